#!/usr/bin/env python3
"""
Monte Carlo Engine
Averages (count - lambda^2 N |C|)^2 over uniform translations and dilations,
block by block on independent Philox streams
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from src.discrepancy.counting import count_many
from src.discrepancy.models import DiscrepancyEstimate, LambdaRange
from src.geometry.body import ConvexBody
from src.pointsets.pointset import PointSet, draw_seed

logger = logging.getLogger(__name__)

MC_BLOCK_SIZE = 4096


def _block_values(body: ConvexBody, points: PointSet, lam: LambdaRange, seed: int, block: int,
                  size: int, rotate: bool) -> np.ndarray:
    """Integrand values of one block; block b uses Philox(seed) jumped b times"""
    rng = np.random.Generator(np.random.Philox(seed).jumped(block))
    shifts = rng.random((size, 2))
    lams = lam.lo + lam.length * rng.random(size)
    angles = 2.0 * np.pi * rng.random(size) if rotate else None
    # lambda = 0 has probability zero; keep it off the division
    lams = np.maximum(lams, np.finfo(float).tiny)
    counts = count_many(body, lams, shifts, points, angles)
    return (counts - lams ** 2 * points.N * body.area) ** 2


def mc_discrepancy(body: ConvexBody, points: PointSet, lam: Optional[LambdaRange] = None,
                   samples: int = 100_000, seed: Optional[int] = None, rotate: bool = False,
                   block_size: int = MC_BLOCK_SIZE, threads: int = 1) -> DiscrepancyEstimate:
    """(hi - lo) * mean of the squared deviation, with std_error = (hi - lo) * sd / sqrt(samples)"""
    lam = lam or LambdaRange()
    if samples < 100:
        raise ValueError("mc_discrepancy needs at least 100 samples")
    lam.check_embedding(body)
    seed = draw_seed() if seed is None else int(seed)

    sizes = [min(block_size, samples - start) for start in range(0, samples, block_size)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        blocks = list(pool.map(
            lambda args: _block_values(body, points, lam, seed, args[0], args[1], rotate),
            enumerate(sizes),
        ))
    values = np.concatenate(blocks)
    value = lam.length * float(np.mean(values))
    std_error = lam.length * float(np.std(values, ddof=1)) / np.sqrt(samples)
    logger.info(f"MC discrepancy {body.spec.label()} N={points.N}: {value:.6g} +/- {std_error:.3g} "
                f"({samples} samples, seed={seed})")
    return DiscrepancyEstimate(
        value=value,
        engine="mc",
        std_error=std_error,
        samples=samples,
        seed=seed,
        config={"body": body.spec.label(), "N": points.N, "lambda": [lam.lo, lam.hi],
                "rotate": rotate, "block_size": block_size},
    )
