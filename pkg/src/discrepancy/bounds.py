#!/usr/bin/env python3
"""
Truncation Bounds and the Lattice-Sum Inequality
Rigorous majorants for the Parseval terms left out beyond radius M, and the
lower bound on sums of |S(m)|^2 over a disk minus a small core
"""

import logging
from functools import lru_cache
from typing import Any, Dict

import numpy as np
from scipy.special import zeta

from src.discrepancy.models import LambdaRange
from src.geometry.body import ConvexBody
from src.geometry.scans import worst_chord
from src.pointsets.pointset import PointSet
from src.pointsets.sums import exp_sum_box

logger = logging.getLogger(__name__)

CHORD_DEPTHS = 40
SMALLEST_DEPTH = 1e-10


@lru_cache(maxsize=64)
def chord_constant(body: ConvexBody, depths: int = CHORD_DEPTHS) -> float:
    """C with max_Theta chord(Theta, delta) <= C sqrt(delta) for delta <= min_width / 4,
    maximized over a geometric depth grid"""
    deltas = np.geomspace(SMALLEST_DEPTH, body.min_width / 4.0, depths)
    ratios = [worst_chord(body, float(d)) / np.sqrt(d) for d in deltas]
    constant = float(max(ratios))
    logger.info(f"Chord constant for {body.spec.label()}: {constant:.6g}")
    return constant


def _lattice_tail(coefficient: float, power: float, radius: float, spread: float, cell_area: float) -> float:
    """Bound on sum over lattice points |m| > radius of coefficient * |m|^-power.

    Every point owns a cell of area cell_area within distance spread of it, so the
    sum is dominated by the integral over |x| > radius - spread.
    """
    if radius <= spread:
        return np.inf
    inner = radius - spread
    return (coefficient * (1.0 + spread / radius) ** power
            * 2.0 * np.pi * inner ** (2.0 - power) / ((power - 2.0) * cell_area))


def _square_tail(side: float, lam: LambdaRange, radius: float, K: int, L: int) -> float:
    """Separable sinc majorant for an axis-parallel square on the lattice KZ x LZ"""
    axis = side ** 2 * (lam.hi ** 3 - lam.lo ** 3) / (3.0 * np.pi ** 2)
    off_axis = lam.length / np.pi ** 4
    on_axes = (2.0 * zeta(2.0, np.floor(radius / K) + 1.0) / K ** 2
               + 2.0 * zeta(2.0, np.floor(radius / L) + 1.0) / L ** 2)
    # |m| > M forces one coordinate beyond M / sqrt(2)
    beyond = radius / np.sqrt(2.0)
    off_axes = (4.0 * zeta(2.0) / (K * L) ** 2
                * (zeta(2.0, np.floor(beyond / K) + 1.0) + zeta(2.0, np.floor(beyond / L) + 1.0)))
    return float(axis * on_axes + off_axis * off_axes)


def tail_bound(body: ConvexBody, points: PointSet, lam: LambdaRange, radius: float,
               sparse: bool = False) -> float:
    """Upper bound on the Parseval terms with |m| > radius; +inf when no majorant applies"""
    K, L = points.structure if (sparse and points.structure) else (1, 1)
    weight = float(points.N) ** 2

    if body.spec.kind == "axis_square":
        return weight * _square_tail(body.spec.side * body.scale, lam, radius, K, L)
    if body.has_flats:
        logger.warning(f"No tail majorant for {body.spec.label()} (flat edges)")
        return np.inf

    spread = 0.5 * np.hypot(K, L) if (K, L) != (1, 1) else 1.0 / np.sqrt(2.0)
    cell_area = float(K * L)
    constant = chord_constant(body)
    # Phi(r) <= area^2 (4/w)^5 r^-5 / 5 + C^2 (hi^2 / 2) r^-3
    near = body.area ** 2 * (4.0 / body.min_width) ** 5 / 5.0
    far = constant ** 2 * lam.hi ** 2 / 2.0
    total = (_lattice_tail(near, 5.0, radius, spread, cell_area)
             + _lattice_tail(far, 3.0, radius, spread, cell_area))
    return weight * float(total)


def lattice_count(radius: float) -> int:
    """card{m in Z^2 : |m| <= radius}"""
    r = int(np.floor(radius))
    n1, n2 = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    return int(np.count_nonzero(n1 ** 2 + n2 ** 2 <= radius * radius))


def cassels_check(points: PointSet, r_omega: float, r_u: float = 2.0) -> Dict[str, Any]:
    """sum over r_u < |m| <= r_omega of |S(m)|^2 against N pi r_omega^2 / 4 - card(U) N^2"""
    if r_omega <= r_u:
        raise ValueError("r_omega must exceed r_u")
    box = int(np.floor(r_omega))
    freqs = np.arange(-box, box + 1)
    m1, m2 = np.meshgrid(freqs, freqs, indexing="ij")
    r2 = (m1 ** 2 + m2 ** 2).astype(float)
    ring = (r2 > r_u * r_u) & (r2 <= r_omega * r_omega)

    if points.structure is not None:
        K, L = points.structure
        hits = ring & (m1 % K == 0) & (m2 % L == 0)
        lhs = float(np.count_nonzero(hits)) * float(K * L) ** 2
    else:
        power = np.abs(exp_sum_box(points, box)) ** 2
        lhs = float(np.sum(power[ring]))

    N = float(points.N)
    core = lattice_count(r_u)
    rhs = N * np.pi * r_omega ** 2 / 4.0 - core * N ** 2
    passed = bool(lhs >= rhs)
    logger.info(f"Cassels check N={points.N} R={r_omega:.6g}: lhs={lhs:.6g} rhs={rhs:.6g} "
                f"{'PASS' if passed else 'FAIL'}")
    return {
        "check": "cassels",
        "N": points.N,
        "r_omega": float(r_omega),
        "r_u": float(r_u),
        "core_count": core,
        "lhs": lhs,
        "rhs": float(rhs),
        "pass": passed,
    }
