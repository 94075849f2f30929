#!/usr/bin/env python3
"""
Filon Quadrature
Graded meshes and Filon-type oscillatory quadrature: piecewise-quadratic
interpolation integrated exactly against exp(-2*pi*i*s*x)
"""

from typing import Callable, Iterable

import numpy as np

SERIES_CUTOFF = 0.05


def graded_mesh(breakpoints: Iterable[float], h_max: float, ratio: float = 0.01,
                h_min: float = 1e-13) -> np.ndarray:
    """Nodes between consecutive breakpoints, geometrically graded toward each
    breakpoint (step ~ ratio * distance) and uniform with step <= h_max in between"""
    points = np.unique(np.asarray(list(breakpoints), dtype=float))
    nodes = [points[:1]]
    growth = np.log1p(ratio)
    for p, q in zip(points[:-1], points[1:]):
        length = q - p
        cap = min(0.5 * length, h_max / ratio)
        if cap > h_min:
            count = int(np.ceil(np.log(cap / h_min) / growth))
            geo = h_min * np.exp(growth * np.arange(count + 1))
            geo = geo[geo < cap]
        else:
            geo = np.empty(0)
        edge = geo[-1] if len(geo) else 0.0
        n_mid = max(1, int(np.ceil((length - 2.0 * edge) / h_max)))
        middle = np.linspace(p + edge, q - edge, n_mid + 1)
        nodes.extend([p + geo, middle, q - geo[::-1], np.array([q])])
    return np.unique(np.concatenate(nodes))


def filon_moments(k: np.ndarray):
    """M_j(k) = integral over [-1, 1] of tau^j exp(-i k tau), j = 0, 1, 2"""
    k = np.asarray(k, dtype=float)
    small = np.abs(k) < SERIES_CUTOFF
    ks = np.where(small, 1.0, k)
    sin_k, cos_k = np.sin(ks), np.cos(ks)
    m0 = 2.0 * sin_k / ks
    m1 = -2j * (sin_k - ks * cos_k) / ks ** 2
    m2 = 2.0 * ((ks ** 2 - 2.0) * sin_k + 2.0 * ks * cos_k) / ks ** 3

    k2 = k * k
    s0 = 2.0 * (1.0 - k2 / 6.0 + k2 ** 2 / 120.0 - k2 ** 3 / 5040.0)
    s1 = -2j * k * (1.0 / 3.0 - k2 / 30.0 + k2 ** 2 / 840.0 - k2 ** 3 / 45360.0)
    s2 = 2.0 * (1.0 / 3.0 - k2 / 10.0 + k2 ** 2 / 168.0 - k2 ** 3 / 6480.0)
    return np.where(small, s0, m0), np.where(small, s1, m1), np.where(small, s2, m2)


def filon_transform(func: Callable, breakpoints: Iterable[float], s: float,
                    h_max: float = None, ratio: float = 0.01) -> complex:
    """Integral of func(x) exp(-2 pi i s x) over the span of the breakpoints.

    Panels never exceed 1/(8|s|) (eight per oscillation period) nor 1/256.
    """
    s = float(s)
    if h_max is None:
        h_max = 1.0 / 256.0 if s == 0.0 else min(1.0 / (8.0 * abs(s)), 1.0 / 256.0)
    nodes = graded_mesh(breakpoints, h_max, ratio=ratio)
    a, b = nodes[:-1], nodes[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    values = func(np.concatenate([a, mid, b]))
    fa, fm, fb = np.split(values, 3)
    c1 = 0.5 * (fb - fa)
    c2 = 0.5 * (fb - 2.0 * fm + fa)
    m0, m1, m2 = filon_moments(2.0 * np.pi * s * half)
    phase = np.exp(-2j * np.pi * s * mid)
    return complex(np.sum(half * phase * (fm * m0 + c1 * m1 + c2 * m2)))
