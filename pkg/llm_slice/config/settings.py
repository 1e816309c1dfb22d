"""defines settings constants for global context

Module Structure:
- Settings (class): contains config constants (scenario defaults) as class variables.
"""

__all__ = [
    "Settings",
]


class Settings:
    """Class containing settings and default parameters
    for the llm_slice simulator. Every value can be overridden per scenario."""

    # ------------------------------ radio grid ------------------------------ #

    TTI_US = 1000
    """Duration of one transmission time interval in microseconds."""

    N_PRB = 100
    """Physical resource blocks per TTI."""

    BYTES_PER_PRB_PER_CQI = 12
    """Linear rate map: a PRB carries this many bytes per CQI step."""

    # ------------------------------- workload ------------------------------- #

    TOKENS_MU = 5.3
    """Lognormal location of the response token count."""

    TOKENS_SIGMA = 0.8
    """Lognormal scale of the response token count."""

    TOKENS_MIN = 16
    TOKENS_MAX = 4096

    BYTES_PER_TOKEN = 4

    TOKEN_INTERVAL_MS = 20.0
    """Gap between generated tokens (about 50 tokens/s)."""

    FIRST_TOKEN_DELAY_MS = 200.0
    """Model compute time before the first token."""

    PROMPT_BYTES = 256
    """Recorded uplink prompt size. Uplink cost is the fixed UPLINK_DELAY_MS."""

    # ------------------------------ control plane ----------------------------- #

    CONTROL_DELAY_MS = 5.0
    """Per-hop delay of a control message (UE <-> gNB <-> core)."""

    UPLINK_DELAY_MS = 10.0

    T_DISC_MS = 2000.0
    """Head-of-line wait after which a response stream is disconnected."""

    TIMEOUT_CHECK_MS = 100.0
    """Period of the head-of-line timeout scan."""

    RIC_EPOCH_MS = 100.0
    RIC_ALPHA = 0.2

    BACKGROUND_SLICE_ID = "background"
    """Slice that carries constant-bit-rate background flows in static/dynamic modes."""

    SHARED_POOL_ID = "shared"
    """Name of the single resource pool used in shared mode."""

    DEFAULT_TIER = "standard"

    # ------------------------------- tolerances ------------------------------- #

    SHARE_TOLERANCE = 1e-9
    """Slack allowed when checking that shares sum to at most 1."""

    # ------------------------------- environment ------------------------------ #

    LOG_ENV_VAR = "LLMSLICE_LOG"
    """Environment variable selecting diagnostics on stderr: off | info | debug."""

    LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
