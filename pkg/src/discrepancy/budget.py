"""
Frequency budget of the grid upper bound: splits the sparse Parseval sum for
C_sigma over the three frequency regimes used in the upper-bound argument
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from src.discrepancy.models import LambdaRange
from src.discrepancy.parseval import DilationAverager, half_plane_annulus
from src.geometry.body import ConvexBody
from src.geometry.spec import BodySpec
from src.geometry.zoo import make_body

logger = logging.getLogger(__name__)

SPLIT_C1 = 1.0
SPLIT_C2 = 1.0
CORNER_SPLIT = 0.125


def body_for_sigma(sigma: float) -> ConvexBody:
    """C_sigma for sigma < 1, the cornered body C_1 for sigma = 1"""
    if sigma == 1.0:
        return make_body(BodySpec(kind="c_one"))
    return make_body(BodySpec(kind="c_sigma", sigma=sigma))


def classify(ms: np.ndarray, sigma: float, c1: float = SPLIT_C1, c2: float = SPLIT_C2,
             corner_split: float = CORNER_SPLIT) -> np.ndarray:
    """Regime label 1, 2 or 3 for each frequency m = (K n1, L n2).

    sigma < 1: 1 when |m1| >= c2 |m2|, else 3 when |m1| <= c1 |m2|^sigma, else 2.
    sigma = 1: 1 when |m1| <= corner_split |m2|, else 2.
    """
    a = np.abs(ms[:, 0]).astype(float)
    b = np.abs(ms[:, 1]).astype(float)
    if sigma == 1.0:
        return np.where(a <= corner_split * b, 1, 2)
    labels = np.full(len(ms), 2)
    labels[a <= c1 * b ** sigma] = 3
    labels[a >= c2 * b] = 1
    return labels


def budget_partition(sigma: float, K: int, L: int, radius: float, lam: Optional[LambdaRange] = None,
                     averager: Optional[DilationAverager] = None) -> Dict[str, Any]:
    """Partial sums 2 (KL)^2 Phi(m) over 0 < |m| <= radius, m in KZ x LZ, per regime"""
    lam = lam or LambdaRange()
    if averager is None:
        averager = DilationAverager(body_for_sigma(sigma), lam)
    ms = half_plane_annulus(0.0, radius, K, L)
    terms = 2.0 * float(K * L) ** 2 * averager.phi(ms)
    labels = classify(ms, sigma)

    sums = {f"S_G{i}": float(np.sum(terms[labels == i])) for i in (1, 2, 3)}
    counts = {f"count_G{i}": int(np.count_nonzero(labels == i)) for i in (1, 2, 3)}
    report = {
        "check": "budget",
        "sigma": float(sigma),
        "K": int(K),
        "L": int(L),
        "N": int(K * L),
        "radius": float(radius),
        **sums,
        **{f"{key}_over_L": value / L for key, value in sums.items()},
        **counts,
        "total": float(np.sum(terms)),
    }
    logger.info(f"Budget sigma={sigma} K={K} L={L}: " + ", ".join(f"{k}={v:.6g}" for k, v in sums.items()))
    return report
