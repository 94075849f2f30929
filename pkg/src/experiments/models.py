#!/usr/bin/env python3
"""
Experiment Models
Validated experiment configurations and the scaling report they produce
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.discrepancy.models import LambdaRange, TruncationPolicy
from src.geometry.spec import BodySpec

ExponentMode = Literal["upper", "irredistr", "sharp_disk", "two_fifths"]
GeneratorKind = Literal["uniform", "jittered", "grid", "grid_for_sigma"]


def exponent_for(mode: str, sigma: float) -> float:
    """Theoretical growth exponent of the averaged squared discrepancy"""
    if mode == "upper":
        return 2.0 / (2.0 * sigma + 3.0)
    if mode == "irredistr":
        return 1.0 - sigma
    if mode == "sharp_disk":
        return 0.5
    if mode == "two_fifths":
        return 0.4
    raise ValueError(f"unknown exponent mode {mode!r}")


class ExperimentConfig(BaseModel):
    """One sweep: a body, generators and a strictly increasing list of sizes.

    sizes are j values for grid_for_sigma and target N for the other generators.
    Without a body the sweep runs on C_sigma (the cornered body when sigma = 1).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["scaling", "envelope", "budget"] = "scaling"
    name: str = "experiment"
    sigma: float = 1.0
    body: Optional[BodySpec] = None
    generators: List[GeneratorKind] = Field(default_factory=lambda: ["grid_for_sigma"])
    sizes: List[int]
    lam: LambdaRange = Field(default_factory=LambdaRange)
    engine: Literal["parseval", "mc"] = "parseval"
    policy: TruncationPolicy = Field(default_factory=TruncationPolicy)
    samples: int = 100_000
    seed: Optional[int] = None
    exponent: ExponentMode = "upper"
    tolerance: float = 0.08
    slope_floor: float = -0.05
    radius: Optional[float] = None
    output: Optional[str] = None

    @model_validator(mode="after")
    def _check_sweep(self):
        if len(self.sizes) < 4:
            raise ValueError("a sweep needs at least 4 sizes")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if not 0.5 <= self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in [1/2, 1], got {self.sigma}")
        if not self.generators:
            raise ValueError("at least one generator is required")
        if self.exponent == "irredistr" and (self.lam.lo, self.lam.hi) != (0.5, 1.0):
            raise ValueError("the irredistr exponent is stated for lambda in [1/2, 1]")
        if self.kind == "budget" and self.radius is None:
            raise ValueError("budget sweeps need a radius")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return self

    @property
    def theoretical_exponent(self) -> float:
        return exponent_for(self.exponent, self.sigma)


@dataclass
class ScalingReport:
    rows: List[Dict[str, Any]]
    slope: float
    intercept: float
    r2: float
    ci: List[float]
    exponent: float
    exponent_mode: str
    tolerance: float
    passed: bool
    flagged_rows: int = 0
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        out["check"] = "scaling"
        return out
