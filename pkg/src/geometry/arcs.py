#!/usr/bin/env python3
"""
Boundary Arcs
Closed-form boundary pieces (segments, circular arcs, convex graphs) of planar convex bodies

Every arc is parameterized by u in [0, 1] in the counter-clockwise direction of the
body boundary, so the body interior lies to the left of the tangent.
"""

import logging
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, optimize

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """z-component of the planar cross product, broadcasting over leading axes"""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def solve_monotone(fun: Callable, dfun: Callable, lo: np.ndarray, hi: np.ndarray,
                   iterations: int = 80) -> np.ndarray:
    """Vectorized safeguarded Newton iteration for monotone fun on [lo, hi].

    lo and hi may come in either order; fun must change sign (or vanish) on each
    bracket. Newton steps that leave the bracket fall back to bisection.
    """
    a = np.minimum(lo, hi).astype(float)
    b = np.maximum(lo, hi).astype(float)
    fa = fun(a)
    fb = fun(b)
    # Secant start, then Newton with bracket maintenance
    denom = fb - fa
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(denom != 0.0, a - fa * (b - a) / denom, 0.5 * (a + b))
    x = np.clip(np.nan_to_num(x, nan=0.0), a, b)
    increasing = fb >= fa

    for _ in range(iterations):
        fx = fun(x)
        below = np.where(increasing, fx < 0.0, fx > 0.0)
        a = np.where(below, x, a)
        b = np.where(below, b, x)
        dx = dfun(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - fx / dx
        bad = ~np.isfinite(step) | (step <= a) | (step >= b)
        x_new = np.where(bad, 0.5 * (a + b), step)
        done = (fx == 0.0) | (b - a <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(x)))
        x = np.where(done, x, x_new)
        if np.all(done):
            break
    return x


class Segment:
    """Straight boundary piece from start to end"""

    kind = "segment"

    def __init__(self, start, end):
        self.start = np.asarray(start, dtype=float)
        self.end = np.asarray(end, dtype=float)
        self.delta = self.end - self.start

    @property
    def length(self) -> float:
        return float(np.hypot(*self.delta))

    def point(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.start + u[..., None] * self.delta

    def tangent(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(self.delta, u.shape + (2,)).copy()

    def project(self, u, vec: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.start @ vec + u * (self.delta @ vec)

    def critical_params(self, vec: np.ndarray) -> np.ndarray:
        return np.empty(0)

    def is_parallel(self, vec: np.ndarray) -> bool:
        """True when the segment lies along a level line of x -> x.vec"""
        return abs(self.delta @ vec) <= 1e-13 * self.length

    def solve_level(self, vec: np.ndarray, levels: np.ndarray, u0: float, u1: float) -> np.ndarray:
        slope = self.delta @ vec
        u = (levels - self.start @ vec) / slope
        return np.clip(u, min(u0, u1), max(u0, u1))

    def signed_area(self) -> float:
        return 0.5 * float(cross(self.start, self.end))

    def max_distance(self, origin: np.ndarray) -> float:
        return float(max(np.hypot(*(self.start - origin)), np.hypot(*(self.end - origin))))

    def inside(self, points: np.ndarray, origin: np.ndarray) -> np.ndarray:
        """Closed half-plane test against the supporting line of the segment"""
        side = cross(self.delta, points - self.start)
        return side >= -1e-12 * self.length

    def transformed(self, scale: float, shift: np.ndarray) -> "Segment":
        return Segment(self.start * scale + shift, self.end * scale + shift)


class CircularArc:
    """Counter-clockwise circular arc of the given radius between two polar angles"""

    kind = "circle"

    def __init__(self, center, radius: float, phi0: float, phi1: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.phi0 = float(phi0)
        self.phi1 = float(phi1)
        self.span = self.phi1 - self.phi0

    def angle(self, u) -> np.ndarray:
        return self.phi0 + np.asarray(u, dtype=float) * self.span

    def point(self, u) -> np.ndarray:
        phi = self.angle(u)
        return self.center + self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def tangent(self, u) -> np.ndarray:
        phi = self.angle(u)
        return self.radius * self.span * np.stack([-np.sin(phi), np.cos(phi)], axis=-1)

    def project(self, u, vec: np.ndarray) -> np.ndarray:
        phi = self.angle(u)
        return self.center @ vec + self.radius * (np.cos(phi) * vec[0] + np.sin(phi) * vec[1])

    def critical_params(self, vec: np.ndarray) -> np.ndarray:
        theta = np.arctan2(vec[1], vec[0])
        found = []
        for base in (theta, theta + np.pi):
            phi = self.phi0 + np.mod(base - self.phi0, TWO_PI)
            while phi < self.phi1:
                u = (phi - self.phi0) / self.span
                if 0.0 < u < 1.0:
                    found.append(u)
                phi += TWO_PI
        return np.array(sorted(found))

    def solve_level(self, vec: np.ndarray, levels: np.ndarray, u0: float, u1: float) -> np.ndarray:
        theta = np.arctan2(vec[1], vec[0])
        q = np.clip((levels - self.center @ vec) / self.radius, -1.0, 1.0)
        base = np.arccos(q)
        lo_phi = self.angle(min(u0, u1))
        hi_phi = self.angle(max(u0, u1))
        slack = 1e-12
        first = lo_phi - slack + np.mod(theta + base - lo_phi + slack, TWO_PI)
        second = lo_phi - slack + np.mod(theta - base - lo_phi + slack, TWO_PI)
        phi = np.where(first <= hi_phi + slack, first, second)
        phi = np.clip(phi, lo_phi, hi_phi)
        return (phi - self.phi0) / self.span

    def signed_area(self) -> float:
        r, c = self.radius, self.center
        return 0.5 * (r * r * self.span
                      + r * c[0] * (np.sin(self.phi1) - np.sin(self.phi0))
                      - r * c[1] * (np.cos(self.phi1) - np.cos(self.phi0)))

    def max_distance(self, origin: np.ndarray) -> float:
        offset = self.center - origin
        best = max(np.hypot(*(self.point(0.0) - origin)), np.hypot(*(self.point(1.0) - origin)))
        if np.hypot(*offset) > 0.0:
            phi = np.arctan2(offset[1], offset[0])
            phi = self.phi0 + np.mod(phi - self.phi0, TWO_PI)
            if phi <= self.phi1:
                best = max(best, np.hypot(*offset) + self.radius)
        else:
            best = self.radius
        return float(best)

    def inside(self, points: np.ndarray, origin: np.ndarray) -> np.ndarray:
        """Ray exit test: the ray from origin through each point leaves the disk once"""
        v = points - origin
        dist = np.hypot(v[..., 0], v[..., 1])
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = v / dist[..., None]
        rel = origin - self.center
        b = unit @ rel
        c = rel @ rel - self.radius ** 2
        exit_dist = -b + np.sqrt(np.maximum(b * b - c, 0.0))
        return (dist == 0.0) | (dist <= exit_dist * (1.0 + 1e-12) + 1e-15)

    def transformed(self, scale: float, shift: np.ndarray) -> "CircularArc":
        return CircularArc(self.center * scale + shift, self.radius * scale, self.phi0, self.phi1)


class GraphArc:
    """Image of a convex lower graph y = f(x) under x -> offset + matrix @ (x, f(x))

    The local x runs from x_start to x_end as u goes from 0 to 1; matrix is a
    scaled reflection (or identity) so the body stays on the left of the tangent.
    """

    kind = "graph"

    def __init__(self, func: Callable, deriv: Callable, x_start: float, x_end: float,
                 matrix=None, offset=None, label: str = ""):
        self.func = func
        self.deriv = deriv
        self.x_start = float(x_start)
        self.x_end = float(x_end)
        self.matrix = np.eye(2) if matrix is None else np.asarray(matrix, dtype=float)
        self.offset = np.zeros(2) if offset is None else np.asarray(offset, dtype=float)
        self.label = label
        self._inverse = np.linalg.inv(self.matrix)

    def local_x(self, u) -> np.ndarray:
        return self.x_start + np.asarray(u, dtype=float) * (self.x_end - self.x_start)

    def to_u(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.x_start) / (self.x_end - self.x_start)

    def point(self, u) -> np.ndarray:
        x = self.local_x(u)
        local = np.stack([x, self.func(x)], axis=-1)
        return self.offset + local @ self.matrix.T

    def tangent(self, u) -> np.ndarray:
        x = self.local_x(u)
        local = np.stack([np.ones_like(x), self.deriv(x)], axis=-1) * (self.x_end - self.x_start)
        return local @ self.matrix.T

    def _coefficients(self, vec: np.ndarray) -> Tuple[float, float]:
        a, b = self.matrix.T @ vec
        return float(a), float(b)

    def project(self, u, vec: np.ndarray) -> np.ndarray:
        a, b = self._coefficients(vec)
        x = self.local_x(u)
        return self.offset @ vec + a * x + b * self.func(x)

    def critical_params(self, vec: np.ndarray) -> np.ndarray:
        a, b = self._coefficients(vec)
        if abs(b) <= 1e-300:
            return np.empty(0)
        target = -a / b
        x_lo, x_hi = sorted((self.x_start, self.x_end))
        g_lo = self.deriv(np.array(x_lo)) - target
        g_hi = self.deriv(np.array(x_hi)) - target
        if not (g_lo < 0.0 < g_hi):
            return np.empty(0)
        root = optimize.brentq(lambda x: float(self.deriv(np.array(x))) - target,
                               x_lo, x_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        u = float(self.to_u(root))
        return np.array([u]) if 0.0 < u < 1.0 else np.empty(0)

    def solve_level(self, vec: np.ndarray, levels: np.ndarray, u0: float, u1: float) -> np.ndarray:
        a, b = self._coefficients(vec)
        target = levels - self.offset @ vec
        x = solve_monotone(lambda x: a * x + b * self.func(x) - target,
                           lambda x: a + b * self.deriv(x),
                           np.full_like(target, self.local_x(u0)),
                           np.full_like(target, self.local_x(u1)))
        u = self.to_u(x)
        return np.clip(u, min(u0, u1), max(u0, u1))

    def signed_area(self) -> float:
        xs, xe = self.x_start, self.x_end
        chord = np.array([xe - xs, float(self.func(np.array(xe)) - self.func(np.array(xs)))])
        linear = float(cross(self.offset, self.matrix @ chord))
        moment, _ = integrate.quad(lambda x: x * float(self.deriv(np.array(x))) - float(self.func(np.array(x))),
                                   xs, xe, limit=200, epsabs=1e-14, epsrel=1e-13)
        return 0.5 * (linear + np.linalg.det(self.matrix) * moment)

    def max_distance(self, origin: np.ndarray) -> float:
        u = np.linspace(0.0, 1.0, 2049)
        dist = np.hypot(*(self.point(u) - origin).T)
        k = int(np.argmax(dist))
        lo, hi = u[max(k - 1, 0)], u[min(k + 1, len(u) - 1)]
        res = optimize.minimize_scalar(lambda s: -float(np.hypot(*(self.point(s) - origin))),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        return float(max(dist[k], -res.fun))

    def inside(self, points: np.ndarray, origin: np.ndarray) -> np.ndarray:
        """Locate where the ray from origin through each point meets the arc"""
        local_p = (points - self.offset) @ self._inverse.T
        local_o = (origin - self.offset) @ self._inverse.T
        v = local_p - local_o
        vx, vy = v[..., 0], v[..., 1]

        def fun(x):
            return vx * (self.func(x) - local_o[1]) - vy * (x - local_o[0])

        def dfun(x):
            return vx * self.deriv(x) - vy

        x = solve_monotone(fun, dfun, np.full(vx.shape, self.x_start), np.full(vx.shape, self.x_end))
        hit = np.stack([x, self.func(x)], axis=-1) - local_o
        norm2 = vx * vx + vy * vy
        with np.errstate(invalid="ignore", divide="ignore"):
            reach = (hit[..., 0] * vx + hit[..., 1] * vy) / norm2
        return (norm2 == 0.0) | (reach >= 1.0 - 1e-12)

    def transformed(self, scale: float, shift: np.ndarray) -> "GraphArc":
        return GraphArc(self.func, self.deriv, self.x_start, self.x_end,
                        matrix=self.matrix * scale, offset=self.offset * scale + shift,
                        label=self.label)
