"""Run configuration shared by the CLI and the experiment scripts."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .lts import DEFAULT_MAX_STATES


@dataclass(frozen=True)
class RunConfig:
    max_states: int = DEFAULT_MAX_STATES
    probe_depth: int = 3
    seed: int = 0
    output: str = "text"
    cases: int = 200
    depth: int = 3
    names: tuple[str, ...] = field(default=("a", "b"))

    def __post_init__(self):
        for name in ("max_states", "probe_depth", "cases", "depth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.output not in ("text", "json"):
            raise ValueError(f"output must be text or json, not {self.output!r}")
        if not self.names:
            raise ValueError("alphabet must not be empty")

    def as_dict(self) -> dict:
        return asdict(self)
