"""
Point set files: two-column CSV (x,y) behind '#' header lines carrying the
generator spec and seed as JSON
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.errors import ConfigError
from src.pointsets.pointset import PointSet

logger = logging.getLogger(__name__)


def write_points(path: Union[str, Path], points: PointSet) -> Path:
    path = Path(path)
    header = "\n".join([
        f"generator: {json.dumps(points.generator, sort_keys=True)}",
        f"seed: {json.dumps(points.seed)}",
        f"structure: {json.dumps(list(points.structure) if points.structure else None)}",
        "x,y",
    ])
    np.savetxt(path, points.points, fmt="%.17g", delimiter=",", header=header, comments="# ")
    logger.info(f"Wrote {points.N} points to {path}")
    return path


def read_points(path: Union[str, Path]) -> PointSet:
    path = Path(path)
    meta = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(": ")
            if key in ("generator", "seed", "structure"):
                try:
                    meta[key] = json.loads(value)
                except json.JSONDecodeError as e:
                    raise ConfigError(f"{path}: bad '{key}' header: {e}") from e
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    structure = tuple(meta["structure"]) if meta.get("structure") else None
    return PointSet(data, structure=structure, seed=meta.get("seed"), generator=meta.get("generator") or {})
