#!/usr/bin/env python3
"""
Point Sets
Finite point sets on the unit torus: product grids, the anisotropic grids tuned
to C_sigma, and seeded random comparison generators
"""

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.errors import DomainError

logger = logging.getLogger(__name__)

_BELOW_ONE = np.nextafter(1.0, 0.0)
GRID_TAG_TOL = 1e-12


def _grid_points(K: int, L: int) -> np.ndarray:
    kk, ll = np.meshgrid(np.arange(K) / K, np.arange(L) / L, indexing="ij")
    return np.stack([kk.ravel(), ll.ravel()], axis=1)


def _lex_sorted(pts: np.ndarray) -> np.ndarray:
    return pts[np.lexsort((pts[:, 1], pts[:, 0]))]


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points in [0, 1)^2; structure = (K, L) when the points are exactly {(k/K, l/L)}"""

    points: np.ndarray
    structure: Optional[Tuple[int, int]] = None
    seed: Optional[int] = None
    generator: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float).reshape(-1, 2))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if len(pts) == 0:
            raise DomainError("a point set needs at least one point")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise DomainError("point coordinates must lie in [0, 1)")
        if self.structure is not None:
            K, L = self.structure
            if len(pts) != K * L:
                raise DomainError(f"grid({K},{L}) needs {K * L} points, got {len(pts)}")
            if not np.allclose(_lex_sorted(pts), _grid_points(K, L), rtol=0.0, atol=GRID_TAG_TOL):
                raise DomainError(f"points tagged grid({K},{L}) are not the points (k/{K}, l/{L})")

    @property
    def N(self) -> int:
        return len(self.points)

    def translated(self, shift) -> "PointSet":
        """Coordinatewise (u + v) mod 1; the grid tag is dropped"""
        moved = np.mod(self.points + np.asarray(shift, dtype=float), 1.0)
        moved = np.minimum(moved, _BELOW_ONE)
        return PointSet(moved, seed=self.seed, generator={**self.generator, "translated": True})

    def describe(self) -> dict:
        out = {"N": self.N, "structure": list(self.structure) if self.structure else None, "seed": self.seed}
        out.update(self.generator)
        return out


def grid(K: int, L: int) -> PointSet:
    """{(k/K, l/L) : 0 <= k < K, 0 <= l < L}"""
    if K < 1 or L < 1:
        raise DomainError(f"grid needs K, L >= 1, got ({K}, {L})")
    return PointSet(_grid_points(K, L), structure=(K, L), generator={"kind": "grid", "K": K, "L": L})


def grid_shape_for_sigma(j: int, sigma: float) -> Tuple[int, int]:
    """K = [j^((2s+1)/(2s+3))], L = [j^(2/(2s+3))]"""
    if not 0.5 <= sigma <= 1.0:
        raise DomainError(f"sigma must lie in [1/2, 1], got {sigma}")
    K = int(np.floor(j ** ((2.0 * sigma + 1.0) / (2.0 * sigma + 3.0)) + 1e-9))
    L = int(np.floor(j ** (2.0 / (2.0 * sigma + 3.0)) + 1e-9))
    if K < 1 or L < 1:
        raise DomainError(f"j={j} too small for sigma={sigma}: K={K}, L={L}")
    return K, L


def grid_for_sigma(j: int, sigma: float) -> Tuple[PointSet, int, int, int]:
    K, L = grid_shape_for_sigma(j, sigma)
    points = PointSet(grid(K, L).points, structure=(K, L),
                      generator={"kind": "grid_for_sigma", "j": j, "sigma": sigma, "K": K, "L": L})
    return points, K, L, K * L


class GeneratorSpec(BaseModel):
    """uniform(n, seed) | jittered(k, l, seed) | grid(k, l) | grid_for_sigma(j, sigma)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["uniform", "jittered", "grid", "grid_for_sigma"]
    n: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None  # noqa: E741
    j: Optional[int] = None
    sigma: Optional[float] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check_parameters(self):
        if self.kind == "uniform" and (self.n is None or self.n < 1):
            raise ValueError("uniform needs n >= 1")
        if self.kind in ("jittered", "grid") and (self.k is None or self.l is None or self.k < 1 or self.l < 1):
            raise ValueError(f"{self.kind} needs k, l >= 1")
        if self.kind == "grid_for_sigma" and (self.j is None or self.sigma is None):
            raise ValueError("grid_for_sigma needs j and sigma")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return self

    @property
    def randomized(self) -> bool:
        return self.kind in ("uniform", "jittered")

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return self.model_copy(update={"seed": seed})


def rng_for(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; the same seed gives the same stream on every platform"""
    return np.random.Generator(np.random.Philox(seed))


def draw_seed() -> int:
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])


def generate(spec: GeneratorSpec) -> PointSet:
    if spec.kind == "grid":
        return grid(spec.k, spec.l)
    if spec.kind == "grid_for_sigma":
        return grid_for_sigma(spec.j, spec.sigma)[0]

    seed = draw_seed() if spec.seed is None else spec.seed
    rng = rng_for(seed)
    if spec.kind == "uniform":
        points = rng.random((spec.n, 2))
    else:
        cells = np.stack(np.meshgrid(np.arange(spec.k), np.arange(spec.l), indexing="ij"), axis=-1).reshape(-1, 2)
        points = (cells + rng.random(cells.shape)) / np.array([spec.k, spec.l], dtype=float)
        points = np.minimum(points, _BELOW_ONE)
    logger.debug(f"Generated {len(points)} points ({spec.kind}, seed={seed})")
    return PointSet(points, seed=seed, generator=spec.model_dump(exclude={"seed"}, exclude_none=True))
