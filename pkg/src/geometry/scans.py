#!/usr/bin/env python3
"""
Chord Scans
Grid scans over directions and depths: minimal chord ratios, the two-chord
condition, the worst chord used by tail bounds and the Holder exponent of split chords
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import optimize, stats

from src.errors import DomainError, FitError
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)


def default_theta_grid(count: int = 720, half_turn: bool = False) -> np.ndarray:
    end = np.pi if half_turn else 2.0 * np.pi
    return np.linspace(0.0, end, count, endpoint=False)


def default_delta_grid(body: ConvexBody, count: int = 12, smallest: float = 2.0 ** -14) -> np.ndarray:
    """Geometric depths up to half the minimal width"""
    return np.geomspace(smallest, 0.5 * body.min_width, count)


def min_chord_scan(body: ConvexBody, theta_grid: Optional[Sequence[float]] = None,
                   delta_grid: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """min over the grid of chord(Theta, delta) / delta"""
    thetas = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    deltas = default_delta_grid(body) if delta_grid is None else np.asarray(delta_grid, dtype=float)
    if np.any(deltas <= 0.0) or deltas.max() > 0.5 * body.min_width * (1.0 + 1e-9):
        raise DomainError("delta grid must lie in (0, min_width / 2]")

    best, worst = np.inf, (None, None)
    for theta in thetas:
        ratios = body.chord(Direction(theta), deltas) / deltas
        k = int(np.argmin(ratios))
        if ratios[k] < best:
            best, worst = float(ratios[k]), (float(theta), float(deltas[k]))
    logger.info(f"min_chord_scan {body.spec.label()}: c_hat={best:.6g} at theta={worst[0]:.6g}")
    return {
        "check": "min_chord",
        "body": body.spec.label(),
        "c_hat": best,
        "worst_theta": worst[0],
        "worst_delta": worst[1],
        "pass": bool(best > 0.0),
    }


def two_chord_scan(body: ConvexBody, sigma: float, theta_grid: Optional[Sequence[float]] = None,
                   delta_grid: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """min over theta in [0, pi) of (|gamma_Theta| + |gamma_-Theta|) / delta^sigma"""
    thetas = default_theta_grid(half_turn=True) if theta_grid is None else np.asarray(theta_grid, dtype=float)
    deltas = default_delta_grid(body) if delta_grid is None else np.asarray(delta_grid, dtype=float)

    per_delta = np.full(len(deltas), np.inf)
    worst_theta = np.zeros(len(deltas))
    for theta in thetas:
        direction = Direction(theta)
        total = body.chord(direction, deltas) + body.chord(direction.opposite(), deltas)
        ratios = total / deltas ** sigma
        better = ratios < per_delta
        per_delta = np.where(better, ratios, per_delta)
        worst_theta = np.where(better, theta, worst_theta)
    k = int(np.argmin(per_delta))
    return {
        "check": "two_chord",
        "body": body.spec.label(),
        "sigma": float(sigma),
        "c_hat": float(per_delta[k]),
        "worst_theta": float(worst_theta[k]),
        "worst_delta": float(deltas[k]),
        "per_delta": [float(v) for v in per_delta],
        "delta_grid": [float(d) for d in deltas],
        "pass": bool(per_delta[k] > 0.0),
    }


def worst_chord(body: ConvexBody, delta: float, count: int = 720) -> float:
    """max over directions of chord(Theta, delta)"""
    thetas = default_theta_grid(count, half_turn=body.central_symmetric)
    chords = np.array([body.chord(Direction(t), delta) for t in thetas])
    k = int(np.argmax(chords))
    step = thetas[1] - thetas[0]
    res = optimize.minimize_scalar(lambda t: -body.chord(Direction(t), delta),
                                   bounds=(thetas[k] - step, thetas[k] + step),
                                   method="bounded", options={"xatol": 1e-10})
    return float(max(chords[k], -res.fun))


def _min_split(body: ConvexBody, thetas: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    best = np.full(len(deltas), np.inf)
    for theta in thetas:
        minus, plus = body.split_chords(Direction(theta), deltas)
        best = np.minimum(best, np.minimum(minus, plus))
    return best


def holder_estimate(body: ConvexBody, delta_grid: Optional[Sequence[float]] = None,
                    theta_grid: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """Slope s of log min_Theta min(gamma-, gamma+) against log delta; alpha_hat = 1/s - 1"""
    if body.has_corners:
        raise DomainError(f"{body.spec.label()} has corners; the split-chord exponent needs a C^1 boundary")
    deltas = (2.0 ** -np.arange(14, 5, -1, dtype=float) if delta_grid is None
              else np.asarray(delta_grid, dtype=float))
    if len(deltas) < 3:
        raise FitError("holder_estimate needs at least 3 depths")
    if body.axis_symmetric and body.central_symmetric:
        thetas = np.linspace(0.0, np.pi / 2, 181) if theta_grid is None else np.asarray(theta_grid, dtype=float)
    else:
        thetas = default_theta_grid() if theta_grid is None else np.asarray(theta_grid, dtype=float)

    minima = _min_split(body, thetas, deltas)
    if np.any(minima <= 0.0):
        raise FitError("split chords vanish on the grid")
    fit = stats.linregress(np.log(deltas), np.log(minima))
    alpha = 1.0 / fit.slope - 1.0
    logger.info(f"holder_estimate {body.spec.label()}: slope={fit.slope:.6g}, alpha_hat={alpha:.6g}")
    return {
        "check": "equivalence",
        "body": body.spec.label(),
        "slope": float(fit.slope),
        "alpha_hat": float(alpha),
        "r2": float(fit.rvalue ** 2),
        "delta_grid": [float(d) for d in deltas],
        "min_split": [float(m) for m in minima],
    }
