"""Run configuration shared by the library and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict

DEFAULT_SEED = 0xA16EB7A
DEFAULT_HORIZON = 20
DEFAULT_WALK_HORIZON = 12
DEFAULT_ISO_ATTEMPTS = 32

# parameter sweep for the ideal facts: the special values 0, 1, q plus generic points
SWEEP_ALPHAS = (0, 1, -1, 2, -2, 3, 5)


@dataclass(frozen=True)
class Config:
    horizon: int = DEFAULT_HORIZON
    walk_horizon: int = DEFAULT_WALK_HORIZON
    seed: int = DEFAULT_SEED
    field: str = "Q"
    params: Dict[str, Fraction] = dc_field(default_factory=dict)
    format: str = "json"

    def __post_init__(self):
        if self.horizon < 1 or self.walk_horizon < 1:
            raise ValueError("horizons must be >= 1")
        if self.format not in ("json", "dot", "text"):
            raise ValueError(f"unknown format {self.format!r}")
