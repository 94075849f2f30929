#!/usr/bin/env python3
"""
Spectrum Cache
Ray spectra stored as columnar text (rho, re, im) behind a header that pins the
body digest and the sampling parameters
"""

import json
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from src.errors import ConfigError
from src.fourier.spectrum import RaySpectrum, ray_spectrum
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)


def cache_path(cache_dir: Path, body: ConvexBody, direction: Direction, rho_max: float) -> Path:
    """One file per (kind, theta, rho_max); the parameters live in the header"""
    return Path(cache_dir) / f"{body.spec.kind}_theta{direction.theta:.12f}_rho{rho_max:.6g}.spec"


def _header(body: ConvexBody, direction: Direction, rho_max: float, oversample: int, method: str) -> dict:
    return {"digest": body.spec.digest(), "theta": direction.theta, "rho_max": rho_max,
            "oversample": oversample, "method": method}


def cache_spectrum(body: ConvexBody, direction: Direction, rho_max: float, cache_dir: Path,
                   oversample: int = 8, spectrum: Optional[RaySpectrum] = None) -> Path:
    spectrum = spectrum or ray_spectrum(body, direction, rho_max, oversample=oversample)
    path = cache_path(cache_dir, body, direction, rho_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = json.dumps(_header(body, direction, rho_max, oversample, spectrum.method))
    data = np.column_stack([spectrum.rho_values, spectrum.ft_values.real, spectrum.ft_values.imag])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=f"{header}\nrho,re,im")
    logger.info(f"Cached spectrum {body.spec.label()} theta={direction.theta:.6g} to {path}")
    return path


def read_cached(path: Path) -> tuple:
    """(header dict, data array) of a cache file"""
    with open(path, encoding="utf-8") as handle:
        first = handle.readline()
    if not first.startswith("# "):
        raise ConfigError(f"{path} has no cache header")
    try:
        header = json.loads(first[2:])
    except json.JSONDecodeError as e:
        raise ConfigError(f"bad cache header in {path}: {e}") from e
    return header, np.loadtxt(path, delimiter=",", comments="#", ndmin=2)


def lookup_spectrum(body: ConvexBody, direction: Direction, rho_max: float, cache_dir: Path,
                    oversample: int = 8) -> Optional[RaySpectrum]:
    """Cached spectrum when the header matches this body and sampling, else None"""
    path = cache_path(cache_dir, body, direction, rho_max)
    if not path.exists():
        return None
    try:
        header, data = read_cached(path)
    except (ConfigError, ValueError) as e:
        logger.warning(f"Unreadable spectrum cache {path}: {e}")
        return None
    expected = _header(body, direction, rho_max, oversample, header.get("method"))
    if header != expected:
        logger.warning(f"Spectrum cache {path} was built for another body or sampling; recomputing")
        return None
    return RaySpectrum(direction, data[:, 0], data[:, 1] + 1j * data[:, 2], header["method"])


def load_spectrum(body: ConvexBody, direction: Direction, rho_max: float, cache_dir: Path,
                  oversample: int = 8) -> RaySpectrum:
    spectrum = lookup_spectrum(body, direction, rho_max, cache_dir, oversample)
    if spectrum is not None:
        logger.info(f"Spectrum cache hit for {body.spec.label()} theta={direction.theta:.6g}")
        return spectrum
    spectrum = ray_spectrum(body, direction, rho_max, oversample=oversample)
    cache_spectrum(body, direction, rho_max, cache_dir, oversample, spectrum)
    return spectrum
