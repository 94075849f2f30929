#!/usr/bin/env python3
"""
Asymptotic Checks for C_sigma
Brute-force roots of g(x) = (1+x)^(1/s) - 1 - x/s and measured chords of C_sigma
near its poles, each compared with the predicted scaling regime
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from src.discrepancy.budget import body_for_sigma
from src.errors import DomainError, RootError
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-12
DEFAULT_TILTS = (0.0, 1e-3, 1e-2, 5e-2, 0.1)


def g_function(sigma: float):
    p = 1.0 / sigma
    return lambda x: (1.0 + x) ** p - 1.0 - p * x


def predicted_root_scale(sigma: float, y: float) -> float:
    return y ** 0.5 if y <= 1.0 else y ** sigma


def lemma_g_roots(sigma: float, y: float, require_both: bool = False) -> Dict[str, Any]:
    """Roots of g(x) = y on x in [-1, 0) and x > 0, with |root| / predicted scale"""
    if not 0.5 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (1/2, 1), got {sigma}")
    if y <= 0.0:
        raise DomainError(f"y must be positive, got {y}")
    g = g_function(sigma)

    def shifted(x):
        return g(x) - y

    upper = 1.0
    while shifted(upper) < 0.0:
        upper *= 2.0
    positive = brentq(shifted, 0.0, upper, xtol=ROOT_TOLERANCE, rtol=4 * np.finfo(float).eps)

    # g falls from 1/sigma - 1 at x = -1 to 0 at x = 0
    if y <= g(-1.0):
        negative = -1.0 if y == g(-1.0) else brentq(shifted, -1.0, 0.0, xtol=ROOT_TOLERANCE,
                                                    rtol=4 * np.finfo(float).eps)
    else:
        negative = None
        if require_both:
            raise RootError(f"g(x) = {y} has no root with x < 0 for sigma={sigma}")
        logger.warning(f"g(x) = {y:.6g} has no negative root for sigma={sigma}")

    scale = predicted_root_scale(sigma, y)
    return {
        "sigma": float(sigma),
        "y": float(y),
        "roots": {"negative": None if negative is None else float(negative), "positive": float(positive)},
        "predicted_scale": float(scale),
        "ratios": {"negative": None if negative is None else abs(negative) / scale,
                   "positive": positive / scale},
    }


def lemma_g_scan(sigma: float, y_grid: Optional[Sequence[float]] = None, ceiling: float = 10.0) -> Dict[str, Any]:
    ys = 2.0 ** np.arange(-20, 21, dtype=float) if y_grid is None else np.asarray(y_grid, dtype=float)
    results = [lemma_g_roots(sigma, float(y)) for y in ys]
    ratios = [v for r in results for v in r["ratios"].values() if v is not None]
    low, high = float(min(ratios)), float(max(ratios))
    passed = bool(low >= 1.0 / ceiling and high <= ceiling)
    logger.info(f"lemma-g sigma={sigma}: ratios in [{low:.4g}, {high:.4g}] {'PASS' if passed else 'FAIL'}")
    return {"check": "lemma-g", "sigma": float(sigma), "results": results, "min_ratio": low,
            "max_ratio": high, "ceiling": ceiling, "pass": passed}


def chord_formula(sigma: float, tilt: float, delta: float) -> float:
    """Predicted chord of the unscaled body at depth delta, normal tilted by tilt from the pole"""
    if sigma == 1.0:
        return delta / np.sqrt((0.25 - np.tan(tilt)) ** 2 + 3.0 * delta)
    if tilt < delta ** (1.0 - sigma):
        return delta ** sigma
    return delta ** 0.5 * tilt ** ((2.0 * sigma - 1.0) / (2.0 * (1.0 - sigma)))


def chord_asymptotics(sigma: float, tilt_grid: Optional[Sequence[float]] = None,
                      delta_grid: Optional[Sequence[float]] = None, ceiling: float = 10.0) -> Dict[str, Any]:
    """Measured chord of C_sigma (C_1 when sigma = 1) near the lower pole over the regime formula.

    Tilts are theta - pi/2; depths are in the unscaled coordinates of the construction.
    """
    if not 0.5 < sigma <= 1.0:
        raise DomainError(f"sigma must lie in (1/2, 1], got {sigma}")
    tilts = np.asarray(DEFAULT_TILTS if tilt_grid is None else tilt_grid, dtype=float)
    deltas = 2.0 ** np.arange(-20, -9, dtype=float) if delta_grid is None else np.asarray(delta_grid, dtype=float)
    if sigma == 1.0 and np.any(np.tan(tilts) >= 0.25):
        raise DomainError("tilts must stay below the corner slope 1/4 of C_1")

    body = body_for_sigma(sigma)
    s = body.scale
    table = np.empty((len(tilts), len(deltas)))
    for i, tilt in enumerate(tilts):
        measured = body.chord(Direction(np.pi / 2 + tilt), deltas * s) / s
        table[i] = measured / np.array([chord_formula(sigma, tilt, d) for d in deltas])

    low, high = float(table.min()), float(table.max())
    passed = bool(low >= 1.0 / ceiling and high <= ceiling)
    logger.info(f"chord asymptotics sigma={sigma}: ratios in [{low:.4g}, {high:.4g}] "
                f"{'PASS' if passed else 'FAIL'}")
    return {
        "check": "chords",
        "sigma": float(sigma),
        "tilt_grid": tilts.tolist(),
        "delta_grid": deltas.tolist(),
        "ratios": table.tolist(),
        "min_ratio": low,
        "max_ratio": high,
        "ceiling": ceiling,
        "pass": passed,
    }
