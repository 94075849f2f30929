#!/usr/bin/env python3
"""
Fourier Transforms
Pointwise transforms of profiles and of body indicators: closed forms for
disks and polygons, Filon quadrature of the normalized X-ray otherwise
"""

import logging

import numpy as np
from scipy.special import j1

from src.fourier.filon import filon_transform
from src.fourier.profile import ProfileFunction, normalize_profile
from src.geometry.body import ConvexBody
from src.geometry.direction import Direction

logger = logging.getLogger(__name__)


def ft_profile(f: ProfileFunction, s: float) -> complex:
    """f_hat(s) = integral over [-1, 1] of f(x) exp(-2 pi i s x)"""
    return filon_transform(f, (-1.0, 1.0) + tuple(f.breakpoints), s)


def has_closed_form(body: ConvexBody) -> bool:
    return body.spec.kind == "disk" or body.is_polygon


def polygon_ft(vertices: np.ndarray, xis: np.ndarray) -> np.ndarray:
    """Divergence-theorem transform of a CCW polygon at nonzero frequencies xis (k, 2)"""
    a = np.asarray(vertices, dtype=float)
    b = np.roll(a, -1, axis=0)
    d = b - a
    length = np.hypot(d[:, 0], d[:, 1])
    normal = np.stack([d[:, 1], -d[:, 0]], axis=1) / length[:, None]
    mid = 0.5 * (a + b)

    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    terms = (xis @ normal.T) * length * np.exp(-2j * np.pi * (xis @ mid.T)) * np.sinc(xis @ d.T)
    rho2 = np.sum(xis * xis, axis=1)
    return 1j / (2.0 * np.pi * rho2) * terms.sum(axis=1)


def disk_ft(radius: float, center: np.ndarray, xis: np.ndarray) -> np.ndarray:
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    rho = np.hypot(xis[:, 0], xis[:, 1])
    shift = np.exp(-2j * np.pi * (xis @ np.asarray(center, dtype=float)))
    return radius * j1(2.0 * np.pi * radius * rho) / rho * shift


def closed_form_ft(body: ConvexBody, xis: np.ndarray) -> np.ndarray:
    """Closed-form transform at nonzero frequencies; only for disks and polygons"""
    if body.spec.kind == "disk":
        return disk_ft(body.arcs[0].radius, body.center, xis)
    return polygon_ft(body.vertices, xis)


def ft_body(body: ConvexBody, xi) -> complex:
    """chi_hat_K(xi) = integral over K of exp(-2 pi i xi . x)"""
    xi = np.asarray(xi, dtype=float)
    rho = float(np.hypot(xi[0], xi[1]))
    if rho == 0.0:
        return complex(body.area)
    if has_closed_form(body):
        return complex(closed_form_ft(body, xi[None, :])[0])
    f = normalize_profile(body, Direction.from_vector(xi))
    return complex(f.to_body(rho, ft_profile(f, rho * f.half_width)))
