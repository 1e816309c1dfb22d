"""Slice registry with min-share admission control."""

from __future__ import annotations

import logging
from typing import Dict, Iterator, List

from llm_slice.config.settings import Settings
from llm_slice.errors import AdmissionRejectedError, DuplicateSliceError
from llm_slice.slicectl.fsm import SliceDescriptor

__all__ = [
    "SliceRegistry",
    "register_slice",
]

logger = logging.getLogger(__name__)


class SliceRegistry:
    """Admitted slices, in registration order.

    A slice is admitted only while the guaranteed shares of all admitted slices
    still sum to at most 1.
    """

    def __init__(self) -> None:
        self._slices: Dict[str, SliceDescriptor] = {}

    @property
    def reserved_share(self) -> float:
        return sum(desc.min_share for desc in self._slices.values())

    @property
    def slice_ids(self) -> List[str]:
        return list(self._slices)

    def get(self, slice_id: str) -> SliceDescriptor:
        return self._slices[slice_id]

    def by_service(self, service_id: str) -> SliceDescriptor:
        for desc in self._slices.values():
            if desc.service_id == service_id and not desc.is_background:
                return desc
        raise KeyError(service_id)

    def register(self, desc: SliceDescriptor) -> str:
        """Admit ``desc`` and return its slice_id as the handle.

        Raises:
            DuplicateSliceError: the slice_id is already registered.
            AdmissionRejectedError: the min-share budget would exceed 1.
        """

        if desc.slice_id in self._slices:
            raise DuplicateSliceError(desc.slice_id)
        reserved = self.reserved_share + desc.min_share
        if reserved > 1 + Settings.SHARE_TOLERANCE:
            raise AdmissionRejectedError(
                f"admitting {desc.slice_id!r} (min_share {desc.min_share:g}) would reserve {reserved:.6g} > 1"
            )
        self._slices[desc.slice_id] = desc
        logger.debug("slice %s admitted, reserved share %.4f", desc.slice_id, reserved)
        return desc.slice_id

    def __contains__(self, slice_id: object) -> bool:
        return slice_id in self._slices

    def __iter__(self) -> Iterator[SliceDescriptor]:
        return iter(self._slices.values())

    def __len__(self) -> int:
        return len(self._slices)


def register_slice(registry: SliceRegistry, desc: SliceDescriptor) -> str:
    return registry.register(desc)
