"""Run defaults. Every CLI flag and service keyword falls back to these."""

from dataclasses import dataclass

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class RunSettings:
    """Default knobs for verification, search and sampling runs."""
    window: int = 8
    delta: str = "-1"
    seed: int = 42
    samples: int = 100
    grid_range: int = 1
    workers: int = 4
    # Numerators in [-bound, bound], denominators in [1, bound].
    sample_bound: int = 9


DEFAULT_SETTINGS = RunSettings()
