#!/usr/bin/env python3
"""
Body Zoo
Constructors for disks, squares, regular polygons, the glued power bodies C_sigma
and C_1, lenses and bodies given by a tabulated support function
"""

import logging
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from src.errors import DomainError
from src.geometry.arcs import CircularArc, GraphArc, Segment
from src.geometry.body import ConvexBody
from src.geometry.spec import BodySpec

logger = logging.getLogger(__name__)

MAX_CIRCUMRADIUS = 0.45
GLUE_POINT = 0.5


def _power_graph(sigma: float) -> Tuple[Callable, Callable]:
    p = 1.0 / sigma

    def func(x):
        return np.power(np.maximum(x, 0.0), p) - 1.0

    def deriv(x):
        return p * np.power(np.maximum(x, 0.0), p - 1.0)

    return func, deriv


def _corner_graph() -> Tuple[Callable, Callable]:
    def func(x):
        return 0.75 * x * x + 0.25 * x - 1.0

    def deriv(x):
        return 1.5 * x + 0.25

    return func, deriv


def _glued_arcs(func: Callable, deriv: Callable, x0: float = GLUE_POINT) -> List:
    """Lower-right graph on [0, x0] glued to a circular arc reaching the x-axis with
    vertical tangent, then reflected across both axes into a counter-clockwise loop"""
    f0 = float(func(np.array(x0)))
    m0 = float(deriv(np.array(x0)))
    norm = np.hypot(1.0, m0)
    radius = -f0 * norm
    center_x = x0 - radius * m0 / norm
    phi = float(np.arctan2(f0, x0 - center_x))

    flip_y = np.diag([1.0, -1.0])
    flip_both = np.diag([-1.0, -1.0])
    flip_x = np.diag([-1.0, 1.0])
    return [
        GraphArc(func, deriv, 0.0, x0, label="lower-right"),
        CircularArc((center_x, 0.0), radius, phi, -phi),
        GraphArc(func, deriv, x0, 0.0, matrix=flip_y, label="upper-right"),
        GraphArc(func, deriv, 0.0, x0, matrix=flip_both, label="upper-left"),
        CircularArc((-center_x, 0.0), radius, np.pi + phi, np.pi - phi),
        GraphArc(func, deriv, x0, 0.0, matrix=flip_x, label="lower-left"),
    ]


def _polygon_arcs(vertices: np.ndarray) -> List[Segment]:
    return [Segment(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]


def _disk(spec: BodySpec):
    arcs = [CircularArc((0.0, 0.0), spec.r, -np.pi / 2 + k * np.pi / 2, k * np.pi / 2) for k in range(4)]
    return arcs, dict(axis_symmetric=True, central_symmetric=True, rotation_invariant=True)


def _axis_square(spec: BodySpec):
    h = spec.side / 2.0
    vertices = np.array([(-h, -h), (h, -h), (h, h), (-h, h)])
    return _polygon_arcs(vertices), dict(axis_symmetric=True, central_symmetric=True)


def _regular_polygon(spec: BodySpec):
    k = spec.k
    angles = -np.pi / 2 + np.pi / k + 2.0 * np.pi * np.arange(k) / k
    vertices = spec.circumradius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return _polygon_arcs(vertices), dict(axis_symmetric=True, central_symmetric=(k % 2 == 0))


def _c_sigma(spec: BodySpec):
    func, deriv = _power_graph(spec.sigma)
    return _glued_arcs(func, deriv), dict(axis_symmetric=True, central_symmetric=True)


def _c_one(spec: BodySpec):
    func, deriv = _corner_graph()
    return _glued_arcs(func, deriv), dict(axis_symmetric=True, central_symmetric=True)


def _lens(spec: BodySpec):
    p = 1.0 / spec.sigma

    def func(x):
        return np.power(np.abs(x), p) - 1.0

    def deriv(x):
        return np.sign(x) * p * np.power(np.abs(x), p - 1.0)

    arcs = [GraphArc(func, deriv, -1.0, 1.0, label="lower"),
            GraphArc(func, deriv, 1.0, -1.0, matrix=np.diag([1.0, -1.0]), label="upper")]
    return arcs, dict(axis_symmetric=True, central_symmetric=True)


def _custom_profile(spec: BodySpec):
    """Intersection of the half-planes x.Theta_i <= h_i at equispaced angles"""
    h = np.asarray(spec.support, dtype=float)
    n = len(h)
    theta = 2.0 * np.pi * np.arange(n) / n
    normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)

    # Chebyshev center gives a strictly interior point
    res = linprog(c=[0.0, 0.0, -1.0],
                  A_ub=np.hstack([normals, np.ones((n, 1))]), b_ub=h,
                  bounds=[(None, None), (None, None), (0.0, None)], method="highs")
    if not res.success or res.x[2] <= 1e-12:
        raise DomainError("tabulated support function has empty interior")
    interior = res.x[:2]

    halfspaces = np.hstack([normals, -h[:, None]])
    hs = HalfspaceIntersection(halfspaces, interior)
    hull = ConvexHull(hs.intersections)
    vertices = hs.intersections[hull.vertices]

    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    w = x * yn - xn * y
    area = 0.5 * w.sum()
    centroid = np.array([((x + xn) * w).sum(), ((y + yn) * w).sum()]) / (6.0 * area)
    return _polygon_arcs(vertices - centroid), dict()


_BUILDERS: Dict[str, Callable] = {
    "disk": _disk,
    "axis_square": _axis_square,
    "regular_polygon": _regular_polygon,
    "c_sigma": _c_sigma,
    "c_one": _c_one,
    "lens": _lens,
    "custom_profile": _custom_profile,
}


def make_body(spec: BodySpec, max_circumradius: float = MAX_CIRCUMRADIUS) -> ConvexBody:
    """Build the body, rescaling about its centroid so the circumradius stays below the cap"""
    arcs, flags = _BUILDERS[spec.kind](spec)
    origin = np.zeros(2)
    radius = max(arc.max_distance(origin) for arc in arcs)
    if not np.isfinite(radius) or radius <= 0.0:
        raise DomainError(f"cannot rescale {spec.label()} (circumradius {radius})")
    scale = min(1.0, max_circumradius / radius)
    if scale < 1.0:
        logger.info(f"Rescaling {spec.label()} by {scale:.6g} (circumradius {radius:.6g})")
    center = np.asarray(spec.center, dtype=float)
    arcs = [arc.transformed(scale, center) for arc in arcs]
    body = ConvexBody(spec, arcs, scale=scale, center=center, **flags)
    logger.info(f"Built {body!r}")
    return body
