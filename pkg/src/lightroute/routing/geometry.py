"""Per-query geometry: the ``[st]`` frame, the triangle decision rule and
the worst-case circle classifier used as a diagnostic.

Topology (which side of ``st`` a vertex lies on, whether an edge crosses
``[st]``) is decided with exact orientation tests on the original
coordinates.  A vertex exactly on the line through ``s`` and ``t`` counts
as lying above it.  Metric work happens in a rotated frame with ``s`` at
the origin and ``t`` on the positive x-axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from ..errors import ClassificationError, NoSegmentIntersection
from ..geom import (Circle, check_on_circle, circle_segment_intersections, circumcircle,
                    cw_arc_contains, orient_sign, polar_angle)

TWO_PI = 2.0 * math.pi


class Direction(Enum):
    CW = "cw"
    CCW = "ccw"


class WorstCaseKind(Enum):
    X1 = "X1"
    X2 = "X2"
    Y = "Y"


class WorstCaseCircleClass(NamedTuple):
    kind: WorstCaseKind
    circle: Circle


@dataclass(frozen=True)
class Frame:
    """Rigid motion taking ``s`` to the origin and ``t`` onto the positive x-axis."""

    s: tuple
    t: tuple

    def __post_init__(self):
        dx, dy = self.t[0] - self.s[0], self.t[1] - self.s[1]
        length = math.hypot(dx, dy)
        if length == 0.0:
            raise NoSegmentIntersection("s and t coincide")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "_c", dx / length)
        object.__setattr__(self, "_s", dy / length)
        object.__setattr__(self, "_sides", {})

    def local(self, p) -> tuple:
        x, y = p[0] - self.s[0], p[1] - self.s[1]
        return (x * self._c + y * self._s, -x * self._s + y * self._c)

    def side(self, p) -> int:
        """+1 above the line st (or on it), -1 below."""
        key = (p[0], p[1])
        got = self._sides.get(key)
        if got is None:
            got = self._sides[key] = 1 if orient_sign(self.s, self.t, p) >= 0 else -1
        return got

    def crosses(self, a, b) -> bool:
        """Segment ``ab`` reaches the other side of ``[st]`` (sides taken with the on-line rule)."""
        if self.side(a) == self.side(b):
            return False
        return orient_sign(a, b, self.s) * orient_sign(a, b, self.t) <= 0

    def crossing_param(self, a, b) -> float:
        """x-coordinate in the local frame where line ``ab`` meets line st."""
        ax, ay = self.local(a)
        bx, by = self.local(b)
        if ay == by:
            return max(ax, bx)
        return ax + (bx - ax) * ay / (ay - by)


def triangle_meets_segment(a, b, c, s, t) -> bool:
    """Closed triangle ``abc`` and closed segment ``[st]`` share a point (exact)."""
    o = orient_sign(a, b, c)
    if o == 0:
        return False
    tri = (a, b, c) if o > 0 else (a, c, b)

    def inside(p):
        return all(orient_sign(tri[i], tri[(i + 1) % 3], p) >= 0 for i in range(3))

    if inside(s) or inside(t):
        return True
    for i in range(3):
        p, q = tri[i], tri[(i + 1) % 3]
        o1, o2 = orient_sign(p, q, s), orient_sign(p, q, t)
        o3, o4 = orient_sign(s, t, p), orient_sign(s, t, q)
        if o1 * o2 <= 0 and o3 * o4 <= 0 and not (o1 == o2 == 0 and o3 == o4 == 0):
            return True
        if o1 == o2 == o3 == o4 == 0:
            # collinear overlap
            lo = min(p[0], q[0]), min(p[1], q[1])
            hi = max(p[0], q[0]), max(p[1], q[1])
            for z in (s, t):
                if lo[0] <= z[0] <= hi[0] and lo[1] <= z[1] <= hi[1]:
                    return True
    return False


class StepDetail(NamedTuple):
    choice: int
    direction: Direction
    circle: Circle
    w: tuple
    r: tuple


def _xy(p) -> tuple:
    return (p[0], p[1])


def _pid(p, fallback):
    pid = getattr(p, "id", None)
    if pid is None and len(p) > 2:
        pid = p[2]
    return fallback if pid is None or pid == -1 else pid


def decide_in_frame(fr: Frame, v, p, q, p_id, q_id):
    """Triangle rule for corners ``v, p, q`` given in world coordinates.

    Returns ``(choice, direction, circle, w, r)`` with the circle and the
    two arc points expressed in the local frame of ``fr``.
    """
    lv, lp, lq = fr.local(v), fr.local(p), fr.local(q)
    circ = circumcircle(lv, lp, lq)
    hits = circle_segment_intersections(circ, (0.0, 0.0), (fr.length, 0.0))
    if not hits:
        raise NoSegmentIntersection("circumcircle does not meet [st]")
    r = hits[-1]
    w = circ.leftmost
    c = circ.center
    a_v = polar_angle(c, lv)
    if cw_arc_contains(circ, w, r, lv):
        direction = Direction.CW
        dp = (a_v - polar_angle(c, lp)) % TWO_PI
        dq = (a_v - polar_angle(c, lq)) % TWO_PI
    else:
        direction = Direction.CCW
        dp = (polar_angle(c, lp) - a_v) % TWO_PI
        dq = (polar_angle(c, lq) - a_v) % TWO_PI
    return (p_id if dp <= dq else q_id), direction, circ, w, r


def step_decision_detail(tri, v_i, s, t) -> StepDetail:
    """Full record of the triangle rule; ``tri`` holds three points with ids."""
    ids = [_pid(p, k) for k, p in enumerate(tri)]
    if v_i not in ids:
        raise ValueError(f"v_i={v_i!r} is not a vertex of the triangle {ids}")
    k = ids.index(v_i)
    others = [j for j in range(3) if j != k]
    if not triangle_meets_segment(_xy(tri[0]), _xy(tri[1]), _xy(tri[2]), _xy(s), _xy(t)):
        raise NoSegmentIntersection(f"triangle {ids} misses [st]")
    fr = Frame(_xy(s), _xy(t))
    a, b = others
    return StepDetail(*decide_in_frame(fr, tri[k], tri[a], tri[b], ids[a], ids[b]))


def step_decision(tri, v_i, s, t) -> int:
    """Next vertex (one of the two other corners of ``tri``) chosen at ``v_i``.

    If ``v_i`` lies on the clockwise arc of the circumcircle from its
    leftmost point to its last crossing with ``[st]``, the first corner met
    walking clockwise from ``v_i`` wins; otherwise the first corner met
    walking counterclockwise.
    """
    return step_decision_detail(tri, v_i, s, t).choice


def exactly_one_on_cw_walk(tri, v_i, s, t) -> bool:
    """Of the two other corners, exactly one lies on the clockwise arc from ``v_i`` to ``r``."""
    ids = [_pid(p, k) for k, p in enumerate(tri)]
    fr = Frame(_xy(s), _xy(t))
    loc = [fr.local(p) for p in tri]
    k = ids.index(v_i)
    circ = circumcircle(*loc)
    hits = circle_segment_intersections(circ, (0.0, 0.0), (fr.length, 0.0))
    if not hits:
        raise NoSegmentIntersection("circumcircle does not meet [st]")
    r = hits[-1]
    lv = loc[k]
    a_v = polar_angle(circ.center, lv)
    span = (a_v - polar_angle(circ.center, r)) % TWO_PI
    tol = 1e-12
    inside = 0
    for j in range(3):
        if j == k:
            continue
        pos = (a_v - polar_angle(circ.center, loc[j])) % TWO_PI
        if pos <= span + tol:
            inside += 1
    return inside == 1


def classify_worst_case_circle(tri_circum: Circle, v_i, v_next, s, t,
                               decision: Direction) -> WorstCaseCircleClass:
    """Slide the circle's centre along the bisector of ``[v_i v_next]`` and classify.

    Inputs are in world coordinates.  The centre moves towards the arc from
    ``v_i`` to ``v_next`` that the decision walks along, and stops at the
    first of two events: the line st becomes tangent (type X1 unless the
    step crosses), or ``v_i`` becomes the leftmost point (X2, or Y when
    ``[v_i v_next]`` crosses ``[st]``).
    """
    check_on_circle(tri_circum, v_i, "v_i")
    check_on_circle(tri_circum, v_next, "v_next")
    fr = Frame(_xy(s), _xy(t))
    O = fr.local(tri_circum.center)
    v = fr.local(v_i)
    u = fr.local(v_next)
    R = tri_circum.radius

    ex, ey = u[0] - v[0], u[1] - v[1]
    el = math.hypot(ex, ey)
    if el == 0.0:
        raise ClassificationError("v_i and v_next coincide")
    nx, ny = -ey / el, ex / el
    # midpoint of the arc walked by the decision
    a0 = math.atan2(v[1] - O[1], v[0] - O[0])
    a1 = math.atan2(u[1] - O[1], u[0] - O[0])
    if decision is Direction.CCW:
        am = a0 + ((a1 - a0) % TWO_PI) / 2.0
    else:
        am = a0 - ((a0 - a1) % TWO_PI) / 2.0
    mx, my = O[0] + R * math.cos(am), O[1] + R * math.sin(am)
    if nx * (mx - O[0]) + ny * (my - O[1]) < 0.0:
        nx, ny = -nx, -ny

    crossing = fr.crosses(_xy(v_i), _xy(v_next))
    scale = max(R, 1e-300)
    tol = 1e-12 * scale

    events = []
    # tangency: centre height equals radius
    qa = 1.0 - ny * ny
    qb = 2.0 * (nx * (O[0] - v[0]) + ny * (O[1] - v[1]) - O[1] * ny)
    qc = R * R - O[1] * O[1]
    roots = []
    if abs(qa) > 1e-15:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
    elif abs(qb) > 0.0:
        roots = [-qc / qb]
    for lam in roots:
        if lam >= -tol:
            events.append((max(lam, 0.0), 0))
    # v_i leftmost: centre at v_i's height and to its right
    if abs(ny) > 1e-15:
        lam = (v[1] - O[1]) / ny
        if lam >= -tol and O[0] + lam * nx > v[0]:
            events.append((max(lam, 0.0), 1))
    if not events:
        raise ClassificationError("no stopping event while sliding the centre")
    lam, kind = min(events)
    cx, cy = O[0] + lam * nx, O[1] + lam * ny
    rad = math.hypot(cx - v[0], cy - v[1])
    # back to world coordinates
    c, sn = fr._c, fr._s
    wc = (fr.s[0] + cx * c - cy * sn, fr.s[1] + cx * sn + cy * c)
    circle = Circle(wc, rad)
    if kind == 1:
        return WorstCaseCircleClass(WorstCaseKind.Y if crossing else WorstCaseKind.X2, circle)
    if crossing:
        raise ClassificationError("tangency reached on a crossing step")
    return WorstCaseCircleClass(WorstCaseKind.X1, circle)
