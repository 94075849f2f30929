#!/usr/bin/env python3
"""
Fourier Verifiers
Numerical checks of the decay estimates for concave profiles and convex bodies.
Every check returns a JSON-ready report {check, grid, min_ratio, max_ratio, pass, ...}
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from src.fourier.profile import ProfileFunction, mu, omega2, second_diff_l2
from src.fourier.spectrum import profile_spectrum, ray_spectrum
from src.fourier.transforms import ft_body, ft_profile
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)

TEST_CEILING = 100.0
PODKORYTOV_SLACK = 1e-6


def _floats(values) -> list:
    return [float(v) for v in values]


def _report(check: str, grid, ratios, passed: bool, **extra) -> Dict[str, Any]:
    ratios = np.asarray(ratios, dtype=float)
    report = {
        "check": check,
        "grid": _floats(grid),
        "min_ratio": float(np.min(ratios)),
        "max_ratio": float(np.max(ratios)),
        "ratios": _floats(ratios),
        "pass": bool(passed),
    }
    report.update(extra)
    status = "PASS" if passed else "FAIL"
    logger.info(f"{check}: ratios in [{report['min_ratio']:.6g}, {report['max_ratio']:.6g}] {status}")
    return report


def dyadic_grid(lo: float, hi: float) -> np.ndarray:
    """Powers of two from lo to hi inclusive (both powers of two)"""
    return 2.0 ** np.arange(np.log2(lo), np.log2(hi) + 0.5)


def _cumulative(s: np.ndarray, values: np.ndarray) -> np.ndarray:
    return cumulative_trapezoid(values, s, initial=0.0)


def check_podkorytov(f: ProfileFunction, s_grid: Optional[Sequence[float]] = None,
                     slack: float = PODKORYTOV_SLACK) -> Dict[str, Any]:
    """|f_hat(s)| * |s| / mu_f(1/|s|) <= 1 on |s| > 2, where mu_f(1/|s|) is defined"""
    s_grid = dyadic_grid(4.0, 512.0) if s_grid is None else np.asarray(s_grid, dtype=float)
    if np.any(np.abs(s_grid) <= 2.0):
        raise ValueError("check_podkorytov needs |s| > 2")
    ratios = [abs(ft_profile(f, s)) * abs(s) / mu(f, 1.0 / abs(s)) for s in s_grid]
    return _report("podkorytov", s_grid, ratios, max(ratios) <= 1.0 + slack, profile=f.source())


def check_bilateral(f: ProfileFunction, h_grid: Optional[Sequence[float]] = None,
                    ceiling: float = TEST_CEILING) -> Dict[str, Any]:
    """second_diff_l2(f, h) / (h^(1/2) mu_f(h)) stays within a bounded band"""
    h_grid = dyadic_grid(2.0 ** -12, 2.0 ** -3) if h_grid is None else np.asarray(h_grid, dtype=float)
    if np.any(h_grid <= 0.0) or np.any(h_grid > 0.25):
        raise ValueError("check_bilateral needs h in (0, 1/4]")
    ratios = np.array([second_diff_l2(f, h) / (np.sqrt(h) * mu(f, h)) for h in h_grid])
    passed = ratios.min() > 0.0 and ratios.max() / ratios.min() <= ceiling
    return _report("bilateral", h_grid, ratios, passed, ceiling=ceiling, profile=f.source())


def _tail_remainder(f: ProfileFunction, s_max: float, points: int = 16) -> float:
    """Bound on the integral of |f_hat|^2 over |s| > s_max from |f_hat(s)| <= mu_f(1/s)/s"""
    h = (1.0 / s_max) * 2.0 ** -np.arange(points, dtype=float)
    peak = max(mu(f, x) for x in h)
    return 2.0 * peak ** 2 / s_max


def check_tail(f: ProfileFunction, rho_grid: Optional[Sequence[float]] = None,
               ceiling: float = TEST_CEILING, tail_factor: float = 64.0, oversample: int = 8,
               omega_points: int = 64) -> Dict[str, Any]:
    """tail_L2(rho) / omega2(f, 1/rho) and low-frequency s^4 mass / (rho^2 omega2) stay bounded"""
    rho_grid = dyadic_grid(2.0, 256.0) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    if np.any(rho_grid < 2.0):
        raise ValueError("check_tail needs rho >= 2")
    s_max = tail_factor * float(rho_grid.max())
    s, fhat = profile_spectrum(f, s_max, oversample=oversample, samples_per_period=16)
    power = np.abs(fhat) ** 2
    mass = _cumulative(s, power)
    moment = _cumulative(s, s ** 4 * power)
    remainder = _tail_remainder(f, s_max)

    cache: Dict[float, float] = {}
    high, low = [], []
    for rho in rho_grid:
        w2 = omega2(f, 1.0 / rho, points=omega_points, cache=cache)
        tail = 2.0 * (np.interp(s_max, s, mass) - np.interp(rho, s, mass)) + remainder
        high.append(np.sqrt(tail) / w2)
        low.append(np.sqrt(2.0 * np.interp(rho, s, moment)) / (rho ** 2 * w2))
    high, low = np.array(high), np.array(low)
    ratios = np.maximum(high, low)
    passed = bool(np.all(np.isfinite(ratios)) and ratios.max() <= ceiling)
    return _report("tail", rho_grid, ratios, passed, ceiling=ceiling, s_max=s_max,
                   remainder=float(remainder), tail_ratios=_floats(high),
                   low_ratios=_floats(low), profile=f.source())


def check_annulus(f: ProfileFunction, rho_grid: Optional[Sequence[float]] = None, alpha: float = 0.5,
                  beta: float = 1.0, ceiling: float = TEST_CEILING, oversample: int = 8) -> Dict[str, Any]:
    """rho * integral of |f_hat|^2 over alpha rho <= |s| <= beta rho, divided by mu_f(1/rho)^2"""
    rho_grid = dyadic_grid(4.0, 256.0) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    if not 0.0 < alpha < beta:
        raise ValueError("check_annulus needs 0 < alpha < beta")
    if np.any(rho_grid < 2.0 / alpha):
        raise ValueError(f"check_annulus needs rho >= {2.0 / alpha:g}")
    s, fhat = profile_spectrum(f, beta * float(rho_grid.max()), oversample=oversample)
    mass = _cumulative(s, np.abs(fhat) ** 2)
    ratios = np.array([
        rho * 2.0 * (np.interp(beta * rho, s, mass) - np.interp(alpha * rho, s, mass)) / mu(f, 1.0 / rho) ** 2
        for rho in rho_grid
    ])
    passed = ratios.min() >= 1.0 / ceiling and ratios.max() <= ceiling
    return _report("annulus", rho_grid, ratios, passed, alpha=alpha, beta=beta,
                   ceiling=ceiling, profile=f.source())


def check_ray_lower(body: ConvexBody, direction: Direction, sigma: float,
                    rho_grid: Optional[Sequence[float]] = None, oversample: int = 32,
                    slope_floor: float = -0.05) -> Dict[str, Any]:
    """q(rho) = rho^(1+sigma) {integral over tau in [1/2, 1] of |chi_hat(tau rho Theta)|^2}^(1/2)"""
    rho_grid = dyadic_grid(8.0, 1024.0) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    spectrum = ray_spectrum(body, direction, float(rho_grid.max()), oversample=max(32, oversample))
    rho, power = spectrum.rho_values, spectrum.power()
    mass = _cumulative(rho, power)
    q = np.array([
        r ** (1.0 + sigma) * np.sqrt((np.interp(r, rho, mass) - np.interp(0.5 * r, rho, mass)) / r)
        for r in rho_grid
    ])
    slope = float(np.log(q[-1] / q[-2]) / np.log(rho_grid[-1] / rho_grid[-2])) if len(q) > 1 else 0.0
    k = int(np.argmin(q))
    passed = q.min() > 0.0 and slope >= slope_floor
    return _report("ray_lower", rho_grid, q, passed, body=body.spec.label(), theta=direction.theta,
                   sigma=float(sigma), inf_q=float(q[k]), argmin_rho=float(rho_grid[k]),
                   last_octave_slope=slope, method=spectrum.method)


def check_chord_majorant(body: ConvexBody, direction: Direction,
                         rho_grid: Optional[Sequence[float]] = None,
                         slack: float = PODKORYTOV_SLACK) -> Dict[str, Any]:
    """rho |chi_hat(rho Theta)| / max(chord(Theta, 1/rho), chord(-Theta, 1/rho)) <= 1"""
    width = body.width(direction)
    rho_grid = dyadic_grid(16.0, 512.0) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    if np.any(rho_grid * width / 2.0 < 2.0):
        raise ValueError(f"check_chord_majorant needs rho >= {4.0 / width:.6g} for this direction")
    opposite = direction.opposite()
    vec = direction.vector
    ratios = []
    for rho in rho_grid:
        chords = max(body.chord(direction, 1.0 / rho), body.chord(opposite, 1.0 / rho))
        ratios.append(rho * abs(ft_body(body, rho * vec)) / chords)
    return _report("chord_majorant", rho_grid, ratios, max(ratios) <= 1.0 + slack,
                   body=body.spec.label(), theta=direction.theta)
