#!/usr/bin/env python3
"""
Profile Functions
Nonnegative concave functions on [-1, 1]: analytic test profiles and normalized
X-rays of convex bodies, with the majorant mu_f, second differences and omega_2
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src.errors import DomainError
from src.fourier.filon import graded_mesh
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)

PROFILE_NODES = 2 ** 16
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True, eq=False)
class ProfileFunction:
    """f on [-1, 1], zero outside; evaluate is exact and vectorized.

    center and half_width record the affine map x -> center + half_width * x
    back to the slice coordinate t of the source body.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    name: str = "profile"
    breakpoints: Tuple[float, ...] = ()
    center: float = 0.0
    half_width: float = 1.0
    theta: Optional[float] = None
    body_label: Optional[str] = None
    nodes: int = field(default=PROFILE_NODES)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x_arr).ravel()
        out = np.zeros(flat.shape)
        inside = np.abs(flat) <= 1.0
        if np.any(inside):
            out[inside] = self.evaluate(flat[inside])
        if x_arr.ndim == 0:
            return float(out[0])
        return out.reshape(x_arr.shape)

    @cached_property
    def grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.nodes + 1)

    @cached_property
    def samples(self) -> np.ndarray:
        """Values on the uniform grid of nodes + 1 points over [-1, 1]"""
        return self(self.grid)

    def to_body(self, rho, fhat):
        """chi_hat(rho Theta) = w exp(-2 pi i rho c) f_hat(rho w)"""
        rho = np.asarray(rho, dtype=float)
        return self.half_width * np.exp(-2j * np.pi * rho * self.center) * fhat

    def source(self) -> dict:
        return {
            "name": self.name,
            "body": self.body_label,
            "theta": self.theta,
            "center": self.center,
            "half_width": self.half_width,
        }


def tent() -> ProfileFunction:
    return ProfileFunction(lambda x: 1.0 - np.abs(x), name="tent", breakpoints=(0.0,))


def semicircle() -> ProfileFunction:
    return ProfileFunction(lambda x: np.sqrt(np.maximum(1.0 - x * x, 0.0)), name="semicircle")


def constant(value: float = 1.0) -> ProfileFunction:
    return ProfileFunction(lambda x: np.full(np.shape(x), float(value)), name=f"constant({value})")


def normalize_profile(body: ConvexBody, direction: Direction, nodes: int = PROFILE_NODES) -> ProfileFunction:
    """f(x) = profile(body, Theta, (A+B)/2 + x (B-A)/2)"""
    lower, upper = body.support_interval(direction)
    center = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)
    kinks = tuple(float(k) for k in (body.junction_levels(direction) - center) / half if -1.0 < k < 1.0)

    def evaluate(x):
        return body.profile(direction, center + half * np.asarray(x, dtype=float))

    return ProfileFunction(evaluate, name=f"{body.spec.label()}@{direction.theta:.6g}",
                           breakpoints=kinks, center=center, half_width=half,
                           theta=direction.theta, body_label=body.spec.label(), nodes=nodes)


def mu(f: ProfileFunction, h: float) -> float:
    """mu_f(h) = max{f(-1+|h|), f(1-|h|)} for 0 < |h| < 1/2"""
    a = abs(float(h))
    if a == 0.0 or a >= 0.5:
        raise DomainError(f"mu needs 0 < |h| < 1/2, got {h}")
    return float(max(f(-1.0 + a), f(1.0 - a)))


def second_diff_l2(f: ProfileFunction, h: float, ratio: float = 0.1) -> float:
    """L2 norm over R of f(x+2h) - 2 f(x+h) + f(x).

    The norm is even in h, so |h| is used. Composite 8-point Gauss-Legendre on a
    mesh graded toward every point where one of the three shifted copies has an
    endpoint or a kink: panels stay below ratio * distance, so within |h| of those
    points there are at least 8 / ratio panels per |h|.
    """
    h = abs(float(h))
    if h == 0.0:
        return 0.0
    kinks = np.array((-1.0, 1.0) + tuple(f.breakpoints))
    cuts = np.concatenate([kinks, kinks - h, kinks - 2.0 * h])
    cuts = cuts[(cuts >= -1.0 - 2.0 * h) & (cuts <= 1.0)]
    mesh = graded_mesh(cuts, h_max=1.0 / 256.0, ratio=ratio, h_min=1e-8 * h)
    a, b = mesh[:-1], mesh[1:]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    x = x.ravel()
    diff = f(x + 2.0 * h) - 2.0 * f(x + h) + f(x)
    weights = (half[:, None] * _GAUSS_WEIGHTS[None, :]).ravel()
    return float(np.sqrt(np.sum(weights * diff * diff)))


def omega2_grid(nu: float, points: int = 64) -> np.ndarray:
    """nu * 2^(-j/8), j = 0 .. points-1, with nu itself as the top endpoint"""
    return nu * 2.0 ** (-np.arange(points) / 8.0)


def omega2(f: ProfileFunction, nu: float, points: int = 64, cache: Optional[Dict[float, float]] = None) -> float:
    """sup over |h| <= nu of second_diff_l2, as a max over a geometric grid.

    Pass the same cache dict across calls to reuse values on shared grid points.
    """
    if nu <= 0.0:
        raise DomainError(f"omega2 needs nu > 0, got {nu}")
    cache = {} if cache is None else cache
    best = 0.0
    for h in omega2_grid(nu, points):
        key = float(h)
        if key not in cache:
            cache[key] = second_diff_l2(f, key)
        best = max(best, cache[key])
    return best
