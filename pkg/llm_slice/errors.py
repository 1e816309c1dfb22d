"""Exception hierarchy of the llm_slice package.

Classes:
    LlmSliceError: root of every error raised on purpose by this package.
    ConfigurationError: invalid scenario, permissions file or quota input (CLI exit code 2).
    SimulationError: a run could not be completed (CLI exit code 1).
    OutputError: result files could not be written (CLI exit code 1).
"""

from typing import Optional

__all__ = [
    "LlmSliceError",
    "ConfigurationError",
    "ParseError",
    "MissingKeyError",
    "UnknownKeyError",
    "CrossRefError",
    "InvalidCqiError",
    "InvalidQuotaError",
    "InfeasibleBoundsError",
    "DuplicateSliceError",
    "AdmissionRejectedError",
    "DuplicateRecordError",
    "ModeMismatchError",
    "SimulationError",
    "PastTimeError",
    "InvalidTransitionError",
    "EmptyRunError",
    "DivisionByZeroMetricError",
    "OutputError",
]


class LlmSliceError(Exception):
    """Base class of all errors raised by llm_slice."""


# ------------------------------- configuration ------------------------------- #


class ConfigurationError(LlmSliceError, ValueError):
    """The inputs describe something that cannot be simulated."""


class ParseError(ConfigurationError):
    """A document could not be parsed. `location` is a 1-based line number or a key path."""

    def __init__(self, message: str, location: Optional[object] = None) -> None:
        self.location = location
        prefix = f"[{location}] " if location is not None else ""
        super().__init__(prefix + message)


class MissingKeyError(ConfigurationError):
    def __init__(self, key: str, where: str = "scenario") -> None:
        self.key = key
        super().__init__(f"missing required key {key!r} in {where}")


class UnknownKeyError(ConfigurationError):
    def __init__(self, key: str, where: str = "scenario") -> None:
        self.key = key
        super().__init__(f"unknown key {key!r} in {where}")


class CrossRefError(ConfigurationError):
    def __init__(self, ref: str, kind: str, where: str) -> None:
        self.ref = ref
        super().__init__(f"{where} references unknown {kind} {ref!r}")


class InvalidCqiError(ConfigurationError):
    def __init__(self, cqi) -> None:
        self.cqi = cqi
        super().__init__(f"CQI must be an integer in 1..15, got {cqi = }")


class InvalidQuotaError(ConfigurationError):
    """Quota shares outside [0, 1] or summing above 1."""


class InfeasibleBoundsError(ConfigurationError):
    """Sum of min_share of the controlled slices exceeds 1."""


class DuplicateSliceError(ConfigurationError):
    def __init__(self, slice_id: str) -> None:
        self.slice_id = slice_id
        super().__init__(f"slice {slice_id!r} is already registered")


class AdmissionRejectedError(ConfigurationError):
    """Admitting the slice would overbook the guaranteed (min_share) budget."""


class DuplicateRecordError(ConfigurationError):
    def __init__(self, ue_id: str, service_id: str, line: int) -> None:
        self.pair = (ue_id, service_id)
        super().__init__(f"[{line}] duplicate permission record for {self.pair}")


class ModeMismatchError(ConfigurationError):
    """An operation needs a different scheduler mode than the one configured."""


# -------------------------------- simulation -------------------------------- #


class SimulationError(LlmSliceError, RuntimeError):
    """A run was aborted."""


class PastTimeError(SimulationError):
    def __init__(self, time: int, clock: int) -> None:
        super().__init__(f"cannot schedule at {time = } us before the clock ({clock = } us)")


class InvalidTransitionError(SimulationError):
    def __init__(self, state, message_kind) -> None:
        self.state = state
        self.message_kind = message_kind
        super().__init__(f"no slice transition from {state} on {message_kind}")


class EmptyRunError(SimulationError):
    """No LLM response stream was started, so the run has no metrics."""


class DivisionByZeroMetricError(SimulationError):
    """A baseline metric is zero (or missing) so no relative improvement exists."""


# ---------------------------------- output ---------------------------------- #


class OutputError(LlmSliceError, OSError):
    """Result files could not be written."""
