"""
Torus counting: how many points of P fall in the translated dilate lambda*C + t
"""

from typing import Optional

import numpy as np

from src.discrepancy.models import body_reach
from src.errors import DomainError
from src.geometry.body import ConvexBody
from src.pointsets.pointset import PointSet


def wrap(vectors: np.ndarray) -> np.ndarray:
    """Reduce coordinates mod 1 into [-1/2, 1/2)"""
    return vectors - np.floor(vectors + 0.5)


def count_in(body: ConvexBody, lam: float, t, points: PointSet) -> int:
    """card(P intersect (lam C + t)) on the torus, closed-body convention"""
    if lam < 0.0 or lam * body_reach(body) > 0.5 + 1e-12:
        raise DomainError(f"lambda={lam} does not keep {body.spec.label()} inside a torus cell")
    rel = wrap(points.points - np.asarray(t, dtype=float))
    if lam == 0.0:
        return int(np.count_nonzero(np.all(rel == 0.0, axis=1)))
    return int(np.count_nonzero(body.contains(rel / lam)))


def count_many(body: ConvexBody, lams: np.ndarray, shifts: np.ndarray, points: PointSet,
               angles: Optional[np.ndarray] = None) -> np.ndarray:
    """Counts for many (lambda, t[, rotation]) samples at once; lambdas must be positive"""
    rel = wrap(points.points[None, :, :] - shifts[:, None, :])
    if angles is not None:
        c, s = np.cos(angles)[:, None], np.sin(angles)[:, None]
        x, y = rel[..., 0], rel[..., 1]
        rel = np.stack([c * x + s * y, -s * x + c * y], axis=-1)
    scaled = rel / lams[:, None, None]
    inside = body.contains(scaled.reshape(-1, 2)).reshape(len(lams), points.N)
    return inside.sum(axis=1)
