# Pointsets package initialization
from src.pointsets.io import read_points, write_points
from src.pointsets.pointset import (GeneratorSpec, PointSet, draw_seed, generate, grid, grid_for_sigma,
                                    grid_shape_for_sigma, rng_for)
from src.pointsets.sums import exp_sum, exp_sum_box, exp_sums, grid_sum

__all__ = [
    "PointSet", "GeneratorSpec",
    "grid", "grid_for_sigma", "grid_shape_for_sigma", "generate", "draw_seed", "rng_for",
    "exp_sum", "exp_sums", "exp_sum_box", "grid_sum",
    "read_points", "write_points",
]
