#!/usr/bin/env python3
"""
Parseval Engine
Sum over lattice frequencies of |S(m)|^2 times the dilation average
Phi(m) = integral over [lo, hi] of lambda^4 |chi_hat(lambda m)|^2, grown annulus by annulus
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from tqdm import tqdm

from src.discrepancy.bounds import tail_bound
from src.discrepancy.models import DiscrepancyEstimate, LambdaRange, TruncationPolicy
from src.fourier.spectrum import ray_spectrum
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction
from src.pointsets.pointset import PointSet
from src.pointsets.sums import exp_sums

logger = logging.getLogger(__name__)

PARSEVAL_OVERSAMPLE = 16
PARSEVAL_SAMPLES_PER_PERIOD = 32
MIN_BAND = 10
# Each cached ray spline holds 2^band samples
RAY_CACHE_SIZE = 16


class DilationAverager:
    """Phi(m) for integer frequencies m, memoized so one table serves many point sets.

    Phi(m) = |m|^-5 [I(hi |m|) - I(lo |m|)] with I(r) the spline antiderivative of
    rho^4 |chi_hat(rho Theta_m)|^2 along the ray through m. Rays are grouped by
    direction and by a dyadic band chosen from |m| alone, so Phi(m) never depends
    on which other frequencies were requested alongside it.
    """

    def __init__(self, body: ConvexBody, lam: LambdaRange, oversample: int = PARSEVAL_OVERSAMPLE,
                 samples_per_period: int = PARSEVAL_SAMPLES_PER_PERIOD, threads: int = 1):
        self.body = body
        self.lam = lam
        self.oversample = oversample
        self.samples_per_period = samples_per_period
        self.threads = max(1, threads)
        self._table: Dict[Tuple[int, int], float] = {}
        self._lock = threading.Lock()
        self._ray_integral = lru_cache(maxsize=RAY_CACHE_SIZE)(self._compute_ray_integral)

    def fold(self, ms: np.ndarray) -> np.ndarray:
        """Representative frequency with the same Phi: m ~ -m always, quadrant folding
        for bodies symmetric about both axes, radius only for rotation invariant bodies"""
        ms = np.asarray(ms, dtype=np.int64).reshape(-1, 2)
        if self.body.rotation_invariant:
            # only |m| matters; keep an exact integer key when possible
            return np.stack([ms[:, 0] ** 2 + ms[:, 1] ** 2, np.zeros(len(ms), dtype=np.int64)], axis=1)
        if self.body.axis_symmetric:
            return np.abs(ms)
        flip = (ms[:, 0] < 0) | ((ms[:, 0] == 0) & (ms[:, 1] < 0))
        return np.where(flip[:, None], -ms, ms)

    def _band(self, norm: float) -> int:
        width = 2.0 * self.body.circumradius
        need = self.samples_per_period * self.lam.hi * norm * width
        return max(MIN_BAND, int(np.ceil(np.log2(max(need, 1.0)))))

    def _compute_ray_integral(self, theta: float, band: int) -> CubicSpline:
        direction = Direction(theta)
        n = 2 ** band
        width = self.body.width(direction)
        rho_max = n / (self.samples_per_period * width)
        spectrum = ray_spectrum(self.body, direction, rho_max, oversample=self.oversample, samples=n)
        rho = spectrum.rho_values
        return CubicSpline(rho, rho ** 4 * spectrum.power()).antiderivative()

    def _phi_group(self, theta: float, band: int, norms: np.ndarray) -> np.ndarray:
        integral = self._ray_integral(theta, band)
        return (integral(self.lam.hi * norms) - integral(self.lam.lo * norms)) / norms ** 5

    def phi(self, ms) -> np.ndarray:
        ms = np.asarray(ms, dtype=np.int64).reshape(-1, 2)
        keys = self.fold(ms)
        out = np.empty(len(ms))
        missing: Dict[Tuple[float, int], List[Tuple[int, int]]] = {}
        for key in {tuple(int(v) for v in row) for row in keys}:
            if key in self._table:
                continue
            if self.body.rotation_invariant:
                norm, theta = np.sqrt(float(key[0])), 0.0
            else:
                norm, theta = float(np.hypot(*key)), Direction.from_vector(key).theta
            missing.setdefault((theta, self._band(norm)), []).append(key)

        groups = sorted(missing.items())

        def evaluate(item):
            (theta, band), group = item
            if self.body.rotation_invariant:
                norms = np.sqrt(np.array([k[0] for k in group], dtype=float))
            else:
                norms = np.hypot(*np.array(group, dtype=float).T)
            return self._phi_group(theta, band, norms)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            for (_, group), values in zip(groups, pool.map(evaluate, groups)):
                with self._lock:
                    for key, value in zip(group, values):
                        self._table[key] = max(float(value), 0.0)

        for i, row in enumerate(keys):
            out[i] = self._table[(int(row[0]), int(row[1]))]
        return out

    def __len__(self) -> int:
        return len(self._table)


def half_plane_annulus(inner: float, outer: float, K: int = 1, L: int = 1) -> np.ndarray:
    """m = (K n1, L n2) with inner < |m| <= outer and m in the open upper half-plane
    (n1 > 0, or n1 = 0 and n2 > 0)"""
    n1_max, n2_max = int(np.floor(outer / K)), int(np.floor(outer / L))
    n1, n2 = np.meshgrid(np.arange(0, n1_max + 1), np.arange(-n2_max, n2_max + 1), indexing="ij")
    n1, n2 = n1.ravel(), n2.ravel()
    keep = (n1 > 0) | (n2 > 0)
    m = np.stack([K * n1[keep], L * n2[keep]], axis=1).astype(np.int64)
    r2 = m[:, 0].astype(float) ** 2 + m[:, 1].astype(float) ** 2
    return m[(r2 > inner * inner) & (r2 <= outer * outer)]


def parseval_discrepancy(body: ConvexBody, points: PointSet, lam: Optional[LambdaRange] = None,
                         policy: Optional[TruncationPolicy] = None, sparse: Optional[bool] = None,
                         averager: Optional[DilationAverager] = None, threads: int = 1,
                         progress: bool = False) -> DiscrepancyEstimate:
    """2 * sum over the half-plane of |S(m)|^2 Phi(m) for 0 < |m| <= M, M chosen by the policy.

    Grid point sets take the sparse path m in KZ x LZ unless sparse=False.
    """
    lam = lam or LambdaRange()
    policy = policy or TruncationPolicy()
    lam.check_embedding(body)
    if averager is None:
        averager = DilationAverager(body, lam, threads=threads)
    elif averager.body is not body or averager.lam != lam:
        raise ValueError("averager was built for a different body or lambda range")

    use_sparse = points.structure is not None if sparse is None else sparse
    if use_sparse and points.structure is None:
        raise ValueError("the sparse path needs a grid point set")
    K, L = points.structure if use_sparse else (1, 1)
    unit = float(max(points.structure)) if (policy.cell_units and points.structure) else 1.0

    total, inner = 0.0, 0.0
    quiet, converged = 0, False
    annuli = []
    radii = list(policy.radii())
    for radius in tqdm(radii, desc="annuli", disable=not progress, leave=False):
        outer = radius * unit
        ms = half_plane_annulus(inner, outer, K, L)
        if len(ms):
            if use_sparse:
                weights = np.full(len(ms), float(K * L) ** 2)
            else:
                weights = np.abs(exp_sums(points, ms, direct=True)) ** 2
                active = weights > 1e-24 * float(points.N) ** 2
                ms, weights = ms[active], weights[active]
        contribution = 2.0 * float(np.sum(weights * averager.phi(ms))) if len(ms) else 0.0
        total += contribution
        relative = contribution / total if total > 0.0 else 0.0
        annuli.append({"radius": outer, "terms": int(len(ms)), "contribution": contribution,
                       "relative": relative})
        inner = outer
        quiet = quiet + 1 if relative < policy.eps_rel else 0
        if quiet >= policy.window:
            converged = True
            break

    flagged = not converged
    if flagged:
        logger.warning(f"Truncation cap {inner:.6g} reached before the stop rule for "
                       f"{body.spec.label()} N={points.N}; value is a lower bound")
    bound = tail_bound(body, points, lam, inner, sparse=use_sparse)
    logger.info(f"Parseval discrepancy {body.spec.label()} N={points.N}: {total:.6g} "
                f"(radius {inner:.6g}, tail <= {bound:.3g}, {'sparse' if use_sparse else 'dense'})")
    return DiscrepancyEstimate(
        value=total,
        engine="parseval",
        tail_bound=bound,
        radius=inner,
        flagged=flagged,
        annuli=annuli,
        config={"body": body.spec.label(), "N": points.N, "lambda": [lam.lo, lam.hi],
                "path": "sparse" if use_sparse else "dense", "policy": policy.model_dump()},
    )
