#!/usr/bin/env python3
"""
Convex Body
Support intervals, profiles (X-rays), chords, split chords and membership for a
convex body bounded by a counter-clockwise loop of closed-form arcs
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Tuple

import numpy as np
from scipy import optimize

from src.errors import DomainError
from src.geometry.arcs import TWO_PI, cross
from src.geometry.direction import Direction
from src.geometry.spec import BodySpec

logger = logging.getLogger(__name__)

# Depths within DEPTH_SLACK * width outside [0, width] are clamped
DEPTH_SLACK = 1e-12


@dataclass(frozen=True)
class ChordSplit:
    """The two pieces of a chord on either side of the normal line at the contact point"""

    minus_len: float
    plus_len: float

    @property
    def total(self) -> float:
        return self.minus_len + self.plus_len


@dataclass(frozen=True)
class _Chain:
    """Monotone run of the boundary between the two contact sets"""

    arc_index: np.ndarray
    u_lo: np.ndarray
    u_hi: np.ndarray
    level_lo: np.ndarray
    level_hi: np.ndarray


@dataclass(frozen=True)
class _Contact:
    lower: float
    upper: float
    min_params: Tuple[float, float]
    max_params: Tuple[float, float]
    increasing: _Chain
    decreasing: _Chain


class ConvexBody:
    """Planar convex body with a piecewise-analytic boundary; immutable after construction"""

    def __init__(self, spec: BodySpec, arcs: Sequence, scale: float = 1.0, center=(0.0, 0.0),
                 axis_symmetric: bool = False, central_symmetric: bool = False,
                 rotation_invariant: bool = False):
        self.spec = spec
        self.arcs = tuple(arcs)
        self.scale = float(scale)
        self.center = np.asarray(center, dtype=float)
        self.axis_symmetric = axis_symmetric
        self.central_symmetric = central_symmetric
        self.rotation_invariant = rotation_invariant

        self._check_closed()
        self.area = float(sum(arc.signed_area() for arc in self.arcs))
        if self.area <= 0.0:
            raise DomainError(f"boundary of {spec.label()} is not counter-clockwise (area {self.area})")
        self.circumradius = float(max(arc.max_distance(self.center) for arc in self.arcs))
        self._contact = lru_cache(maxsize=4096)(self._compute_contact)

    def __repr__(self) -> str:
        return f"ConvexBody({self.spec.label()}, area={self.area:.6g}, circumradius={self.circumradius:.6g})"

    def _check_closed(self):
        for i, arc in enumerate(self.arcs):
            nxt = self.arcs[(i + 1) % len(self.arcs)]
            gap = np.hypot(*(arc.point(1.0) - nxt.point(0.0)))
            if gap > 1e-9:
                raise DomainError(f"arcs {i} and {i + 1} do not join (gap {gap:.3g})")

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def has_flats(self) -> bool:
        return any(arc.kind == "segment" for arc in self.arcs)

    @property
    def is_polygon(self) -> bool:
        return all(arc.kind == "segment" for arc in self.arcs)

    @cached_property
    def vertices(self) -> np.ndarray:
        if not self.is_polygon:
            raise DomainError(f"{self.spec.label()} is not a polygon")
        return np.array([arc.start for arc in self.arcs])

    @cached_property
    def corner_params(self) -> Tuple[int, ...]:
        """Junction indices where the tangent direction jumps"""
        corners = []
        for i, arc in enumerate(self.arcs):
            before = self.arcs[i - 1].tangent(1.0)
            after = arc.tangent(0.0)
            turn = np.arctan2(cross(before, after), before @ after)
            if abs(turn) > 1e-9:
                corners.append(i)
        return tuple(corners)

    @property
    def has_corners(self) -> bool:
        return len(self.corner_params) > 0

    def boundary_point(self, loop_param) -> np.ndarray:
        loop = np.asarray(loop_param, dtype=float)
        index = np.floor(loop).astype(int)
        local = loop - index
        index = np.mod(index, self.n_arcs)
        out = np.empty(loop.shape + (2,))
        for i in np.unique(index):
            mask = index == i
            out[mask] = self.arcs[i].point(local[mask])
        return out

    @cached_property
    def centroid(self) -> np.ndarray:
        """Centroid from a dense boundary polygon (approximate to ~1e-8)"""
        u = np.linspace(0.0, 1.0, 4097)[:-1]
        pts = np.concatenate([arc.point(u) for arc in self.arcs])
        nxt = np.roll(pts, -1, axis=0)
        w = cross(pts, nxt)
        area = 0.5 * w.sum()
        return ((pts + nxt) * w[:, None]).sum(axis=0) / (6.0 * area)

    # Support and chains

    def _compute_contact(self, theta: float) -> _Contact:
        vec = np.array([np.cos(theta), np.sin(theta)])
        values, params = [], []
        for i, arc in enumerate(self.arcs):
            us = np.concatenate([[0.0, 1.0], arc.critical_params(vec)])
            values.append(arc.project(us, vec))
            params.append(i + us)
        values = np.concatenate(values)
        params = np.concatenate(params)
        lower, upper = float(values.min()), float(values.max())
        min_params = (float(params[np.argmin(values)]),) * 2
        max_params = (float(params[np.argmax(values)]),) * 2

        tol = 1e-12 * max(self.circumradius, 1e-300)
        for i, arc in enumerate(self.arcs):
            if arc.kind == "segment" and arc.is_parallel(vec):
                level = float(arc.project(0.0, vec))
                if abs(level - upper) <= tol:
                    max_params = (float(i), float(i + 1))
                elif abs(level - lower) <= tol:
                    min_params = (float(i), float(i + 1))

        n = self.n_arcs
        inc_start, inc_end = min_params[1], max_params[0]
        if inc_end <= inc_start:
            inc_end += n
        dec_start, dec_end = max_params[1], min_params[0]
        if dec_end <= dec_start:
            dec_end += n
        return _Contact(lower, upper, min_params, max_params,
                        self._chain(inc_start, inc_end, vec),
                        self._chain(dec_start, dec_end, vec))

    def _chain(self, start: float, end: float, vec: np.ndarray) -> _Chain:
        idx, lo, hi, lev_lo, lev_hi = [], [], [], [], []
        for k in range(int(np.floor(start)), int(np.ceil(end))):
            u0 = max(start, k) - k
            u1 = min(end, k + 1) - k
            if u1 - u0 <= 0.0:
                continue
            arc = self.arcs[k % self.n_arcs]
            idx.append(k % self.n_arcs)
            lo.append(u0)
            hi.append(u1)
            lev_lo.append(float(arc.project(u0, vec)))
            lev_hi.append(float(arc.project(u1, vec)))
        return _Chain(np.array(idx, dtype=int), np.array(lo), np.array(hi),
                      np.array(lev_lo), np.array(lev_hi))

    def contact(self, direction: Direction) -> _Contact:
        return self._contact(direction.theta)

    def support_interval(self, direction: Direction) -> Tuple[float, float]:
        """(A, B) with A = min over the body of x.Theta and B the max"""
        contact = self.contact(direction)
        return contact.lower, contact.upper

    def width(self, direction: Direction) -> float:
        lower, upper = self.support_interval(direction)
        return upper - lower

    @cached_property
    def min_width(self) -> float:
        thetas = np.linspace(0.0, np.pi, 721)
        widths = np.array([self.width(Direction(t)) for t in thetas])
        k = int(np.argmin(widths))
        step = thetas[1] - thetas[0]
        res = optimize.minimize_scalar(lambda t: self.width(Direction(t)),
                                       bounds=(thetas[k] - step, thetas[k] + step),
                                       method="bounded", options={"xatol": 1e-10})
        return float(min(widths[k], res.fun))

    def junction_levels(self, direction: Direction) -> np.ndarray:
        """Projections of arc junctions strictly inside the support interval"""
        vec = direction.vector
        lower, upper = self.support_interval(direction)
        levels = np.array([float(arc.project(0.0, vec)) for arc in self.arcs])
        inside = (levels > lower) & (levels < upper)
        return np.unique(levels[inside])

    def _chain_points(self, chain: _Chain, levels: np.ndarray, vec: np.ndarray, ascending: bool) -> np.ndarray:
        ends = chain.level_hi if ascending else -chain.level_hi
        keys = levels if ascending else -levels
        piece = np.clip(np.searchsorted(ends, keys, side="left"), 0, len(ends) - 1)
        out = np.empty(levels.shape + (2,))
        for j in np.unique(piece):
            mask = piece == j
            arc = self.arcs[chain.arc_index[j]]
            u = arc.solve_level(vec, levels[mask], chain.u_lo[j], chain.u_hi[j])
            out[mask] = arc.point(u)
        return out

    def chord_endpoints(self, direction: Direction, levels) -> Tuple[np.ndarray, np.ndarray]:
        """Boundary points on the increasing and decreasing chains at the given levels"""
        contact = self.contact(direction)
        vec = direction.vector
        levels = np.clip(np.atleast_1d(np.asarray(levels, dtype=float)), contact.lower, contact.upper)
        return (self._chain_points(contact.increasing, levels, vec, ascending=True),
                self._chain_points(contact.decreasing, levels, vec, ascending=False))

    def profile(self, direction: Direction, t):
        """Length of the slice {x in C : x.Theta = t}; zero outside [A, B]"""
        t_arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t_arr).ravel()
        contact = self.contact(direction)
        out = np.zeros(flat.shape)
        inside = (flat >= contact.lower) & (flat <= contact.upper)
        if np.any(inside):
            first, second = self.chord_endpoints(direction, flat[inside])
            out[inside] = np.hypot(*(first - second).T)
        if t_arr.ndim == 0:
            return float(out[0])
        return out.reshape(t_arr.shape)

    def _check_depth(self, direction: Direction, delta) -> np.ndarray:
        lower, upper = self.support_interval(direction)
        width = upper - lower
        slack = DEPTH_SLACK * width
        delta = np.asarray(delta, dtype=float)
        if np.any(delta < -slack) or np.any(delta > width + slack):
            raise DomainError(f"depth outside [0, {width:.6g}] for theta={direction.theta:.6g}")
        return np.clip(delta, 0.0, width)

    def chord(self, direction: Direction, delta):
        """|gamma_Theta(delta)|: the slice at depth delta above the support line"""
        delta = self._check_depth(direction, delta)
        lower, _ = self.support_interval(direction)
        return self.profile(direction, lower + delta)

    def _split_axis(self, direction: Direction) -> Tuple[np.ndarray, np.ndarray]:
        """Contact point and the direction of the normal line through it"""
        contact = self.contact(direction)
        vec = direction.vector
        first, last = contact.min_params
        if first != last:
            point = 0.5 * (self.boundary_point(first) + self.boundary_point(last))
            return point, vec
        point = self.boundary_point(first)
        junction = int(round(first))
        if abs(first - junction) < 1e-12 and (junction % self.n_arcs) in self.corner_params:
            i = junction % self.n_arcs
            before = self.arcs[i - 1].tangent(1.0)
            after = self.arcs[i].tangent(0.0)
            inward = [np.array([-t[1], t[0]]) / np.hypot(*t) for t in (before, after)]
            bisector = inward[0] + inward[1]
            return point, bisector / np.hypot(*bisector)
        return point, vec

    def split_chords(self, direction: Direction, deltas) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized split: (minus lengths, plus lengths) for each depth"""
        deltas = np.atleast_1d(self._check_depth(direction, deltas))
        lower, _ = self.support_interval(direction)
        vec = direction.vector
        perp = direction.normal
        point, axis = self._split_axis(direction)
        middle = point + np.outer(deltas / (axis @ vec), axis)
        first, second = self.chord_endpoints(direction, lower + deltas)
        s1 = np.sum((first - middle) * perp, axis=1)
        s2 = np.sum((second - middle) * perp, axis=1)
        smin, smax = np.minimum(s1, s2), np.maximum(s1, s2)
        plus = np.maximum(smax, 0.0) - np.maximum(smin, 0.0)
        minus = np.minimum(smax, 0.0) - np.minimum(smin, 0.0)
        return minus, plus

    def split_chord(self, direction: Direction, delta: float) -> ChordSplit:
        minus, plus = self.split_chords(direction, [delta])
        return ChordSplit(minus_len=float(minus[0]), plus_len=float(plus[0]))

    # Membership

    @cached_property
    def _junction_angles(self) -> np.ndarray:
        starts = np.array([arc.point(0.0) for arc in self.arcs]) - self.center
        angles = np.arctan2(starts[:, 1], starts[:, 0])
        base = angles[0]
        unwrapped = base + np.mod(angles - base, TWO_PI)
        unwrapped[0] = base
        return unwrapped

    def contains(self, points):
        """Closed-body membership; accepts one point or an (n, 2) array"""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        rel = pts - self.center
        dist = np.hypot(rel[:, 0], rel[:, 1])
        result = np.zeros(len(pts), dtype=bool)
        candidates = dist <= self.circumradius * (1.0 + 1e-12)
        if np.any(candidates):
            angles = self._junction_angles
            a = np.arctan2(rel[candidates, 1], rel[candidates, 0])
            a = angles[0] + np.mod(a - angles[0], TWO_PI)
            index = np.clip(np.searchsorted(angles, a, side="right") - 1, 0, self.n_arcs - 1)
            sub = np.zeros(len(a), dtype=bool)
            cand_pts = pts[candidates]
            for i in np.unique(index):
                mask = index == i
                sub[mask] = self.arcs[i].inside(cand_pts[mask], self.center)
            result[candidates] = sub
        return bool(result[0]) if single else result
