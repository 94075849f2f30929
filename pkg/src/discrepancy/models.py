#!/usr/bin/env python3
"""
Discrepancy Models
Dilation ranges, truncation policies and the estimate record shared by both engines
"""

from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.errors import DomainError
from src.geometry.body import ConvexBody


@lru_cache(maxsize=64)
def body_reach(body: ConvexBody) -> float:
    """Largest distance from the origin to a point of the body"""
    origin = np.zeros(2)
    return float(max(arc.max_distance(origin) for arc in body.arcs))


class LambdaRange(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: float = 0.0
    hi: float = 1.0

    @model_validator(mode="after")
    def _check_bounds(self):
        if not 0.0 <= self.lo < self.hi <= 1.0:
            raise ValueError(f"need 0 <= lo < hi <= 1, got [{self.lo}, {self.hi}]")
        return self

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def check_embedding(self, body: ConvexBody) -> None:
        """hi * C must sit inside one fundamental cell of the torus"""
        if self.hi * body_reach(body) > 0.5 + 1e-12:
            raise DomainError(f"lambda up to {self.hi} pushes {body.spec.label()} out of the torus cell")

    @classmethod
    def parse(cls, text: str) -> "LambdaRange":
        lo, _, hi = text.partition(":")
        return cls(lo=float(lo), hi=float(hi))


class TruncationPolicy(BaseModel):
    """Grow the lattice radius geometrically until W consecutive annuli each add
    less than eps_rel of the running total, or the cap is hit.

    With cell_units, radii are counted in multiples of max(K, L) for grid point sets.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    initial_radius: float = 8.0
    growth: float = 1.25
    eps_rel: float = 1e-3
    window: int = 3
    max_radius: float = 128.0
    cell_units: bool = False

    @model_validator(mode="after")
    def _check_fields(self):
        if self.initial_radius < 4.0:
            raise ValueError("initial_radius must be at least 4")
        if self.growth <= 1.0:
            raise ValueError("growth must exceed 1")
        if self.eps_rel <= 0.0:
            raise ValueError("eps_rel must be positive")
        if self.window < 2:
            raise ValueError("window must be at least 2")
        if self.max_radius < self.initial_radius:
            raise ValueError("max_radius must be at least initial_radius")
        return self

    def radii(self):
        radius = self.initial_radius
        while True:
            yield radius
            if radius >= self.max_radius:
                return
            radius = min(radius * self.growth, self.max_radius)


@dataclass
class DiscrepancyEstimate:
    """Value of the (t, lambda)-averaged squared discrepancy with its error metadata"""

    value: float
    engine: str
    std_error: Optional[float] = None
    tail_bound: Optional[float] = None
    radius: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    flagged: bool = False
    annuli: List[Dict[str, float]] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0.0:
            raise DomainError(f"negative discrepancy {self.value}")
        if self.tail_bound is not None and self.tail_bound < 0.0:
            raise DomainError(f"negative tail bound {self.tail_bound}")

    @property
    def error(self) -> float:
        """std_error for Monte Carlo, tail_bound for Parseval"""
        if self.std_error is not None:
            return self.std_error
        return self.tail_bound if self.tail_bound is not None else 0.0

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        if self.std_error is None:
            out.pop("std_error")
        if self.tail_bound is None:
            out.pop("tail_bound")
        return out
