"""Scenario documents: parsing and validation.

A scenario is one JSON object. Required keys: ``name``, ``horizon_ms``, ``ues``,
``services``, ``slices`` and ``mode``. Optional keys: ``tti``, ``arrivals``,
``background``, ``ric`` (required in dynamic mode), ``timeouts``, ``delays``,
``seeds``, ``permissions`` (CSV path relative to the scenario file) and
``strict_fsm``. Unknown keys are rejected at every level.

.. code-block:: json

    {
      "name": "minimal",
      "horizon_ms": 1000,
      "ues": [{"ue_id": "ue1", "cqi": 10, "services": ["llama"]}],
      "services": [{"service_id": "llama"}],
      "slices": [{"slice_id": "llama", "service_id": "llama", "min_share": 0.2, "max_share": 1.0}],
      "arrivals": [{"ue_id": "ue1", "service_id": "llama", "rate_per_s": 2}],
      "mode": {"kind": "shared"}
    }
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from llm_slice.config.enums import SchedulerModes, normalize_short_code
from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime, ms_to_us
from llm_slice.errors import (
    ConfigurationError,
    CrossRefError,
    DuplicateSliceError,
    MissingKeyError,
    ParseError,
    UnknownKeyError,
)
from llm_slice.mac.partition import QuotaVector
from llm_slice.mac.scheduler import SchedulerMode
from llm_slice.radio.link import LinkState, TtiConfig
from llm_slice.slicectl.fsm import SliceDescriptor
from llm_slice.slicectl.permissions import PermissionDb, load_permissions
from llm_slice.slicectl.registry import SliceRegistry
from llm_slice.workload.profiles import ArrivalProcess, BackgroundFlow, ServiceProfile

__all__ = [
    "UeSpec",
    "ArrivalSpec",
    "RicConfig",
    "TimeoutConfig",
    "DelayConfig",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "scenario_summary",
    "mode_from_name",
]


@dataclass(frozen=True)
class UeSpec:
    ue_id: str
    cqi: int
    services: Tuple[str, ...]

    @property
    def link(self) -> LinkState:
        return LinkState(self.ue_id, self.cqi)


@dataclass(frozen=True)
class ArrivalSpec:
    ue_id: str
    service_id: str
    process: ArrivalProcess


@dataclass(frozen=True)
class RicConfig:
    epoch_ms: float = Settings.RIC_EPOCH_MS
    alpha: float = Settings.RIC_ALPHA


@dataclass(frozen=True)
class TimeoutConfig:
    t_disc_ms: float = Settings.T_DISC_MS
    check_period_ms: float = Settings.TIMEOUT_CHECK_MS


@dataclass(frozen=True)
class DelayConfig:
    control_delay_ms: float = Settings.CONTROL_DELAY_MS
    uplink_delay_ms: float = Settings.UPLINK_DELAY_MS


@dataclass(frozen=True)
class Scenario:
    """A fully validated run configuration."""

    name: str
    horizon_ms: float
    ues: Tuple[UeSpec, ...]
    services: Tuple[ServiceProfile, ...]
    slices: Tuple[SliceDescriptor, ...]
    mode: SchedulerMode
    tti: TtiConfig = TtiConfig()
    arrivals: Tuple[ArrivalSpec, ...] = ()
    background: Tuple[BackgroundFlow, ...] = ()
    ric: Optional[RicConfig] = None
    timeouts: TimeoutConfig = TimeoutConfig()
    delays: DelayConfig = DelayConfig()
    seeds: Tuple[int, ...] = (1,)
    permissions: PermissionDb = field(default_factory=PermissionDb, compare=False)
    permissions_path: Optional[str] = None
    strict_fsm: bool = True

    @property
    def horizon_us(self) -> SimTime:
        return ms_to_us(self.horizon_ms)

    def service(self, service_id: str) -> ServiceProfile:
        return {s.service_id: s for s in self.services}[service_id]

    def slice_of_service(self, service_id: str) -> SliceDescriptor:
        for desc in self.slices:
            if desc.service_id == service_id and not desc.is_background:
                return desc
        raise KeyError(service_id)

    def ue(self, ue_id: str) -> UeSpec:
        return {u.ue_id: u for u in self.ues}[ue_id]

    @property
    def background_slice(self) -> Optional[SliceDescriptor]:
        for desc in self.slices:
            if desc.is_background:
                return desc
        return None

    def initial_quota(self) -> Optional[QuotaVector]:
        """Fixed partition of static mode and the starting quotas of dynamic mode."""

        if self.mode.kind == SchedulerModes.SHARED:
            return None
        return QuotaVector({desc.slice_id: desc.fixed_share for desc in self.slices})

    def build_registry(self) -> SliceRegistry:
        """Admit every slice, in document order (raises AdmissionRejectedError on overbooking)."""

        registry = SliceRegistry()
        for desc in self.slices:
            registry.register(desc)
        return registry

    def with_mode(self, kind, work_conserving: Optional[bool] = None) -> "Scenario":
        """Copy of the scenario running in another scheduler mode.

        Raises:
            MissingKeyError: dynamic mode requested but the scenario has no ``ric`` section.
        """

        kind = mode_from_name(kind)
        if kind == self.mode.kind and work_conserving is None:
            mode = self.mode
        else:
            mode = SchedulerMode.of(kind, work_conserving)
        scenario = replace(self, mode=mode)
        _check_mode(scenario)
        return scenario


def mode_from_name(name) -> SchedulerModes:
    """Scheduler mode from a name or alias such as "baseline" or "llm-slice"."""

    code = normalize_short_code(name)
    if code not in {m.value for m in SchedulerModes}:
        raise ConfigurationError(f"unknown scheduler mode {name!r}")
    return SchedulerModes(code)


# ------------------------------------------------------------------------------ #
#                                   parsing                                      #
# ------------------------------------------------------------------------------ #


def _object(value: Any, where: str, required: Sequence[str] = (), optional: Sequence[str] = ()) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ParseError(f"expected an object, got {type(value).__name__}", where)
    for key in value:
        if key not in required and key not in optional:
            raise UnknownKeyError(key, where)
    for key in required:
        if key not in value:
            raise MissingKeyError(key, where)
    return value


def _list(value: Any, where: str) -> List[Any]:
    if not isinstance(value, list):
        raise ParseError(f"expected a list, got {type(value).__name__}", where)
    return value


def _number(value: Any, where: str, minimum: Optional[float] = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", where)
    if minimum is not None and value < minimum:
        raise ParseError(f"must be >= {minimum:g}, got {value!r}", where)
    return value


def _integer(value: Any, where: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", where)
    return int(_number(value, where, minimum))


def _label(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ParseError(f"expected a non-empty string, got {value!r}", where)
    return value


def _boolean(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ParseError(f"expected true or false, got {value!r}", where)
    return value


def _unique(ids: Sequence[str], kind: str) -> None:
    seen = set()
    for item in ids:
        if item in seen:
            raise ConfigurationError(f"duplicate {kind} {item!r}")
        seen.add(item)


def _parse_ue(doc: Any, where: str) -> UeSpec:
    doc = _object(doc, where, required=("ue_id", "cqi", "services"))
    services = tuple(_label(s, f"{where}.services") for s in _list(doc["services"], f"{where}.services"))
    _unique(services, f"service in {where}")
    cqi = doc["cqi"]
    if isinstance(cqi, bool) or not isinstance(cqi, int):
        raise ParseError(f"cqi must be an integer, got {cqi!r}", f"{where}.cqi")
    ue_id = _label(doc["ue_id"], f"{where}.ue_id")
    LinkState(ue_id, cqi)
    return UeSpec(ue_id, cqi, services)


_SERVICE_NUMBERS = {
    "tokens_mu": float,
    "tokens_sigma": float,
    "tokens_min": int,
    "tokens_max": int,
    "bytes_per_token": int,
    "token_interval_ms": float,
    "first_token_delay_ms": float,
}


def _parse_service(doc: Any, where: str) -> ServiceProfile:
    doc = _object(doc, where, required=("service_id",), optional=tuple(_SERVICE_NUMBERS))
    values: Dict[str, Any] = {}
    for key, kind in _SERVICE_NUMBERS.items():
        if key in doc:
            reader = _integer if kind is int else _number
            values[key] = reader(doc[key], f"{where}.{key}")
    return ServiceProfile(_label(doc["service_id"], f"{where}.service_id"), **values)


def _parse_slice(doc: Any, where: str) -> SliceDescriptor:
    doc = _object(
        doc,
        where,
        required=("slice_id", "min_share", "max_share"),
        optional=("service_id", "priority", "static_share"),
    )
    slice_id = _label(doc["slice_id"], f"{where}.slice_id")
    if slice_id == Settings.BACKGROUND_SLICE_ID:
        if "service_id" in doc:
            raise ParseError("the background slice carries no service", f"{where}.service_id")
        service_id = ""
    elif "service_id" not in doc:
        raise MissingKeyError("service_id", where)
    else:
        service_id = _label(doc["service_id"], f"{where}.service_id")

    return SliceDescriptor(
        slice_id=slice_id,
        service_id=service_id,
        min_share=_number(doc["min_share"], f"{where}.min_share"),
        max_share=_number(doc["max_share"], f"{where}.max_share"),
        priority=_integer(doc.get("priority", 0), f"{where}.priority"),
        static_share=(
            _number(doc["static_share"], f"{where}.static_share") if "static_share" in doc else None
        ),
    )


def _parse_arrival(doc: Any, where: str) -> ArrivalSpec:
    doc = _object(
        doc,
        where,
        required=("ue_id", "service_id", "rate_per_s"),
        optional=("burst_multiplier", "burst_on_ms", "burst_off_ms"),
    )
    process = ArrivalProcess(
        rate_per_s=_number(doc["rate_per_s"], f"{where}.rate_per_s"),
        burst_multiplier=_number(doc.get("burst_multiplier", 1.0), f"{where}.burst_multiplier"),
        burst_on_ms=_number(doc.get("burst_on_ms", 0.0), f"{where}.burst_on_ms"),
        burst_off_ms=_number(doc.get("burst_off_ms", 0.0), f"{where}.burst_off_ms"),
    )
    return ArrivalSpec(_label(doc["ue_id"], f"{where}.ue_id"), _label(doc["service_id"], f"{where}.service_id"), process)


def _parse_background(doc: Any, where: str) -> BackgroundFlow:
    doc = _object(doc, where, required=("ue_id", "rate_bytes_per_s"), optional=("packet_bytes",))
    return BackgroundFlow(
        ue_id=_label(doc["ue_id"], f"{where}.ue_id"),
        rate_bytes_per_s=_number(doc["rate_bytes_per_s"], f"{where}.rate_bytes_per_s"),
        packet_bytes=_integer(doc.get("packet_bytes", 1500), f"{where}.packet_bytes"),
    )


def _parse_mode(doc: Any) -> SchedulerMode:
    doc = _object(doc, "mode", required=("kind",), optional=("work_conserving",))
    kind = normalize_short_code(_label(doc["kind"], "mode.kind"))
    if kind not in {m.value for m in SchedulerModes}:
        raise ParseError(f"unknown scheduler mode {doc['kind']!r}", "mode.kind")
    work_conserving = _boolean(doc["work_conserving"], "mode.work_conserving") if "work_conserving" in doc else None
    return SchedulerMode.of(SchedulerModes(kind), work_conserving)


def _cross_check(scenario: Scenario) -> None:
    service_ids = [s.service_id for s in scenario.services]
    slice_ids = [s.slice_id for s in scenario.slices]
    ue_ids = [u.ue_id for u in scenario.ues]
    _unique(service_ids, "service")
    _unique(ue_ids, "ue")
    for slice_id in slice_ids:
        if slice_ids.count(slice_id) > 1:
            raise DuplicateSliceError(slice_id)

    served = {}
    for desc in scenario.slices:
        if desc.is_background:
            continue
        if desc.service_id not in service_ids:
            raise CrossRefError(desc.service_id, "service", f"slice {desc.slice_id!r}")
        if desc.service_id in served:
            raise ConfigurationError(
                f"service {desc.service_id!r} is carried by both {served[desc.service_id]!r} and {desc.slice_id!r}"
            )
        served[desc.service_id] = desc.slice_id

    for ue in scenario.ues:
        for service_id in ue.services:
            if service_id not in service_ids:
                raise CrossRefError(service_id, "service", f"ue {ue.ue_id!r}")
            if service_id not in served:
                raise CrossRefError(service_id, "slice for service", f"ue {ue.ue_id!r}")

    subscriptions = {ue.ue_id: set(ue.services) for ue in scenario.ues}
    pairs = set()
    for spec in scenario.arrivals:
        if spec.ue_id not in subscriptions:
            raise CrossRefError(spec.ue_id, "ue", "arrivals")
        if spec.service_id not in subscriptions[spec.ue_id]:
            raise CrossRefError(spec.service_id, "subscribed service", f"arrivals of {spec.ue_id!r}")
        if (spec.ue_id, spec.service_id) in pairs:
            raise ConfigurationError(f"duplicate arrivals for {(spec.ue_id, spec.service_id)}")
        pairs.add((spec.ue_id, spec.service_id))

    for flow in scenario.background:
        if flow.ue_id not in subscriptions:
            raise CrossRefError(flow.ue_id, "ue", "background")
        if scenario.background_slice is None:
            raise CrossRefError(Settings.BACKGROUND_SLICE_ID, "slice", "background")
    _unique([flow.ue_id for flow in scenario.background], "background flow for ue")


def _check_mode(scenario: Scenario) -> None:
    if scenario.mode.kind == SchedulerModes.DYNAMIC and scenario.ric is None:
        raise MissingKeyError("ric", "scenario (required in dynamic mode)")
    scenario.build_registry()
    scenario.initial_quota()  # static shares must fit the grid


_TOP_REQUIRED = ("name", "horizon_ms", "ues", "services", "slices", "mode")
_TOP_OPTIONAL = (
    "tti",
    "arrivals",
    "background",
    "ric",
    "timeouts",
    "delays",
    "seeds",
    "permissions",
    "strict_fsm",
)


def parse_scenario(text: str, base_dir: Optional[str] = None) -> Scenario:
    """Parse and fully validate a scenario document.

    Args:
        text (str): the JSON document.
        base_dir (str, optional): directory that a relative ``permissions`` path is
            resolved against. Defaults to the working directory.

    Raises:
        ParseError: malformed JSON or a value of the wrong type (with its location).
        MissingKeyError, UnknownKeyError: schema violations.
        CrossRefError: an id that does not resolve.
        AdmissionRejectedError: the min_shares overbook the grid.
        ConfigurationError: any other invalid value.
    """

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc

    doc = _object(doc, "scenario", required=_TOP_REQUIRED, optional=_TOP_OPTIONAL)

    tti_doc = _object(doc.get("tti", {}), "tti", optional=("tti_us", "n_prb"))
    ric = None
    if "ric" in doc:
        ric_doc = _object(doc["ric"], "ric", optional=("epoch_ms", "alpha"))
        ric = RicConfig(
            epoch_ms=_number(ric_doc.get("epoch_ms", Settings.RIC_EPOCH_MS), "ric.epoch_ms"),
            alpha=_number(ric_doc.get("alpha", Settings.RIC_ALPHA), "ric.alpha"),
        )
        if ric.epoch_ms <= 0 or not 0 < ric.alpha <= 1:
            raise ConfigurationError(f"ric needs epoch_ms > 0 and alpha in (0, 1], got {ric}")
    timeouts_doc = _object(doc.get("timeouts", {}), "timeouts", optional=("t_disc_ms", "check_period_ms"))
    timeouts = TimeoutConfig(
        t_disc_ms=_number(timeouts_doc.get("t_disc_ms", Settings.T_DISC_MS), "timeouts.t_disc_ms"),
        check_period_ms=_number(
            timeouts_doc.get("check_period_ms", Settings.TIMEOUT_CHECK_MS), "timeouts.check_period_ms"
        ),
    )
    if timeouts.t_disc_ms <= 0 or timeouts.check_period_ms <= 0:
        raise ConfigurationError(f"timeouts must be positive, got {timeouts}")
    delays_doc = _object(doc.get("delays", {}), "delays", optional=("control_delay_ms", "uplink_delay_ms"))
    delays = DelayConfig(
        control_delay_ms=_number(
            delays_doc.get("control_delay_ms", Settings.CONTROL_DELAY_MS), "delays.control_delay_ms", 0
        ),
        uplink_delay_ms=_number(delays_doc.get("uplink_delay_ms", Settings.UPLINK_DELAY_MS), "delays.uplink_delay_ms", 0),
    )

    seeds = tuple(_integer(s, "seeds", 0) for s in _list(doc.get("seeds", [1]), "seeds"))
    if not seeds:
        raise ConfigurationError("seeds must list at least one seed")

    permissions_path = None
    if "permissions" in doc:
        permissions_path = os.path.join(base_dir or os.getcwd(), _label(doc["permissions"], "permissions"))
        try:
            with open(permissions_path, encoding="utf-8") as f:
                permissions_text = f.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read permissions file {permissions_path!r}: {exc}") from exc
        try:
            permissions = load_permissions(permissions_text)
        except ParseError as exc:
            raise ParseError(f"{permissions_path}: {exc}", exc.location) from exc

    ues = tuple(_parse_ue(u, f"ues[{i}]") for i, u in enumerate(_list(doc["ues"], "ues")))
    if not ues:
        raise ConfigurationError("a scenario needs at least one ue")
    if "permissions" not in doc:
        permissions = PermissionDb.from_subscriptions({u.ue_id: u.services for u in ues})

    scenario = Scenario(
        name=_label(doc["name"], "name"),
        horizon_ms=_number(doc["horizon_ms"], "horizon_ms", 0),
        ues=ues,
        services=tuple(_parse_service(s, f"services[{i}]") for i, s in enumerate(_list(doc["services"], "services"))),
        slices=tuple(_parse_slice(s, f"slices[{i}]") for i, s in enumerate(_list(doc["slices"], "slices"))),
        mode=_parse_mode(doc["mode"]),
        tti=TtiConfig(
            tti_us=_integer(tti_doc.get("tti_us", Settings.TTI_US), "tti.tti_us"),
            n_prb=_integer(tti_doc.get("n_prb", Settings.N_PRB), "tti.n_prb"),
        ),
        arrivals=tuple(
            _parse_arrival(a, f"arrivals[{i}]") for i, a in enumerate(_list(doc.get("arrivals", []), "arrivals"))
        ),
        background=tuple(
            _parse_background(b, f"background[{i}]")
            for i, b in enumerate(_list(doc.get("background", []), "background"))
        ),
        ric=ric,
        timeouts=timeouts,
        delays=delays,
        seeds=seeds,
        permissions=permissions,
        permissions_path=permissions_path,
        strict_fsm=_boolean(doc.get("strict_fsm", True), "strict_fsm"),
    )

    _cross_check(scenario)
    _check_mode(scenario)
    return scenario


def load_scenario(path: str) -> Scenario:
    """Read and parse a scenario file; a relative ``permissions`` path is resolved next to it."""

    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario {path!r}: {exc}") from exc
    return parse_scenario(text, base_dir=os.path.dirname(os.path.abspath(path)))


def scenario_summary(scenario: Scenario) -> Mapping[str, Any]:
    """Plain description used by ``llmslice validate``."""

    return {
        "name": scenario.name,
        "horizon_ms": scenario.horizon_ms,
        "mode": scenario.mode.name,
        "work_conserving": scenario.mode.work_conserving,
        "ues": len(scenario.ues),
        "slices": [desc.slice_id for desc in scenario.slices],
        "seeds": list(scenario.seeds),
    }
