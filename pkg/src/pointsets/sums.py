#!/usr/bin/env python3
"""
Exponential Sums
S(m) = sum_j exp(2 pi i m.u_j) by direct summation, by the grid closed form,
and over whole lattice boxes
"""

import numpy as np

from src.pointsets.pointset import PointSet


def _phases(points: np.ndarray, ms: np.ndarray) -> np.ndarray:
    """(m.u) mod 1 for every (m, u) pair, shape (len(ms), N)"""
    return np.mod(np.outer(ms[:, 0], points[:, 0]) + np.outer(ms[:, 1], points[:, 1]), 1.0)


def grid_sum(K: int, L: int, ms: np.ndarray) -> np.ndarray:
    """KL where K | m1 and L | m2, zero elsewhere"""
    ms = np.asarray(ms, dtype=np.int64).reshape(-1, 2)
    hit = (ms[:, 0] % K == 0) & (ms[:, 1] % L == 0)
    return np.where(hit, float(K * L), 0.0).astype(complex)


def exp_sums(points: PointSet, ms, block: int = 4096, direct: bool = False) -> np.ndarray:
    """S(m) for each row of ms; grids use the closed form unless direct is set"""
    ms = np.asarray(ms, dtype=np.int64).reshape(-1, 2)
    if points.structure is not None and not direct:
        return grid_sum(*points.structure, ms)
    out = np.empty(len(ms), dtype=complex)
    rows = max(1, block * 64 // max(points.N, 1))
    for start in range(0, len(ms), rows):
        chunk = ms[start:start + rows].astype(float)
        out[start:start + rows] = np.exp(2j * np.pi * _phases(points.points, chunk)).sum(axis=1)
    return out


def exp_sum(points: PointSet, m, direct: bool = False) -> complex:
    return complex(exp_sums(points, np.asarray(m).reshape(1, 2), direct=direct)[0])


def exp_sum_box(points: PointSet, radius: int) -> np.ndarray:
    """S(m) for m in [-radius, radius]^2 as an array indexed [m1 + radius, m2 + radius].

    Factorizes as sum_j e(m1 x_j) e(m2 y_j); the contraction is an einsum without
    BLAS so the summation order does not depend on the thread count.
    """
    freqs = np.arange(-radius, radius + 1, dtype=float)
    ex = np.exp(2j * np.pi * np.mod(np.outer(points.points[:, 0], freqs), 1.0))
    ey = np.exp(2j * np.pi * np.mod(np.outer(points.points[:, 1], freqs), 1.0))
    return np.einsum("ja,jb->ab", ex, ey, optimize=False)
