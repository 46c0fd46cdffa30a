"""Runtime limits: dimension cap and closure budget.

Nerve enumeration is exponential in the degree, so the maximum degree is a
hard-capped configuration value; all shipped fixtures live in dimension <= 3.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

HARD_DIM_CAP = 4
DEFAULT_MAX_DIM = 3
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class Config:
    max_dim: int = DEFAULT_MAX_DIM
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self):
        if self.max_dim > HARD_DIM_CAP:
            raise ValueError(f"max_dim {self.max_dim} exceeds hard cap {HARD_DIM_CAP}")
        if self.max_dim < 0 or self.budget <= 0:
            raise ValueError("max_dim must be >= 0 and budget positive")


def default_config() -> Config:
    """Config with `CORNER_MAX_DIM` from the environment, if set."""
    md = os.environ.get("CORNER_MAX_DIM")
    if md is None:
        return Config()
    return Config(max_dim=int(md))
