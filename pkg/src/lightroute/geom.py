"""Planar geometry kernel.

Orientation and in-circle tests are exact: a floating point evaluation is
accepted when it clears Shewchuk's static error bound, otherwise the
determinant is recomputed in rational arithmetic.  Everything else (circle
construction, intersections, arcs) is plain floating point and callers are
expected to compare with slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cmp_to_key
from typing import NamedTuple, Sequence

from .errors import (CollinearDefiningPoints, DegenerateDirection, NotOnCircle,
                     ThetaOutOfRange)

_EPS = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS

TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float
    id: int = -1


class Orientation(IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class InCircle(IntEnum):
    OUTSIDE = -1
    ON_BOUNDARY = 0
    INSIDE = 1


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _orient_exact(pa, pb, pc) -> int:
    ax, ay = Fraction(pa[0]), Fraction(pa[1])
    bx, by = Fraction(pb[0]), Fraction(pb[1])
    cx, cy = Fraction(pc[0]), Fraction(pc[1])
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def orient_sign(pa, pb, pc) -> int:
    """Sign of twice the signed area of ``pa pb pc`` (+1 ccw, -1 cw, 0 collinear)."""
    detleft = (pa[0] - pc[0]) * (pb[1] - pc[1])
    detright = (pa[1] - pc[1]) * (pb[0] - pc[0])
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return 1
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return -1
        detsum = -detleft - detright
    else:
        if det != 0.0:
            return _sign(det)
        # repeated points are the common zero case and need no exact pass
        if (pa[0] == pc[0] and pa[1] == pc[1]) or (pb[0] == pc[0] and pb[1] == pc[1]) \
                or (pa[0] == pb[0] and pa[1] == pb[1]):
            return 0
        return _orient_exact(pa, pb, pc)
    errbound = _CCW_ERRBOUND * detsum
    if det >= errbound:
        return 1
    if -det >= errbound:
        return -1
    return _orient_exact(pa, pb, pc)


def orientation(p, q, r) -> Orientation:
    return Orientation(orient_sign(p, q, r))


def _incircle_exact(pa, pb, pc, pd) -> int:
    dx, dy = Fraction(pd[0]), Fraction(pd[1])
    adx, ady = Fraction(pa[0]) - dx, Fraction(pa[1]) - dy
    bdx, bdy = Fraction(pb[0]) - dx, Fraction(pb[1]) - dy
    cdx, cdy = Fraction(pc[0]) - dx, Fraction(pc[1]) - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    return _sign(det)


def incircle_sign(pa, pb, pc, pd) -> int:
    """+1 if ``pd`` is inside the circle through ccw ``pa pb pc``, -1 outside, 0 on it.

    For clockwise ``pa pb pc`` the sign is reversed, as with the raw determinant.
    """
    adx = pa[0] - pd[0]
    bdx = pb[0] - pd[0]
    cdx = pc[0] - pd[0]
    ady = pa[1] - pd[1]
    bdy = pb[1] - pd[1]
    cdy = pc[1] - pd[1]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    errbound = _ICC_ERRBOUND * permanent
    if det > errbound or -det > errbound:
        return _sign(det)
    return _incircle_exact(pa, pb, pc, pd)


def incircle_sos(pa, pb, pc, pd, ia: int, ib: int, ic: int, id_: int) -> int:
    """In-circle sign for ccw ``pa pb pc`` that never returns 0.

    Exact ties are broken by symbolically lifting every point by an
    infinitesimal that grows with its index, so larger ids count as
    "higher" on the paraboloid.  The first non-vanishing cofactor, taken in
    order of decreasing index, decides the sign.
    """
    s = incircle_sign(pa, pb, pc, pd)
    if s != 0:
        return s
    # d/d(lift_k) of the determinant for each of the four rows
    terms = [
        (ia, lambda: orient_sign(pb, pc, pd)),
        (ib, lambda: orient_sign(pc, pa, pd)),
        (ic, lambda: orient_sign(pa, pb, pd)),
        (id_, lambda: -orient_sign(pa, pb, pc)),
    ]
    terms.sort(key=lambda item: item[0], reverse=True)
    for _, cof in terms:
        c = cof()
        if c != 0:
            return c
    raise CollinearDefiningPoints("in-circle tie with a degenerate defining triangle")


def in_circle(a, b, c, d) -> InCircle:
    """Position of ``d`` relative to the circumcircle of ``a b c`` (given ccw).

    Clockwise input is accepted and handled by flipping the sign.
    """
    o = orient_sign(a, b, c)
    if o == 0:
        raise CollinearDefiningPoints("circle through collinear points")
    return InCircle(incircle_sign(a, b, c, d) * o)


class Circle(NamedTuple):
    center: tuple
    radius: float

    @property
    def leftmost(self) -> tuple:
        return (self.center[0] - self.radius, self.center[1])


def circumcircle(a, b, c) -> Circle:
    if orient_sign(a, b, c) == 0:
        raise CollinearDefiningPoints("circumcircle of collinear points")
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Circle((a[0] + ux, a[1] + uy), math.hypot(ux, uy))


def _kappa_for(theta: float) -> int:
    ratio = TWO_PI / theta
    nearest = round(ratio)
    # 2*pi/(pi/4) must give 8 cones, not 9 from a rounding wobble
    if abs(ratio - nearest) <= 1e-9 * ratio:
        return int(nearest)
    return math.ceil(ratio)


@dataclass(frozen=True)
class ConeSystem:
    theta: float
    kappa: int = field(init=False)
    cone_angle: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.theta < math.pi / 2):
            raise ThetaOutOfRange(f"theta must lie in (0, pi/2), got {self.theta!r}")
        k = _kappa_for(self.theta)
        object.__setattr__(self, "kappa", k)
        object.__setattr__(self, "cone_angle", TWO_PI / k)

    @classmethod
    def with_kappa(cls, kappa: int) -> "ConeSystem":
        """Cone system with exactly ``kappa`` cones, ``theta = 2*pi/kappa``.

        Unlike the constructor this accepts any ``kappa >= 1`` (so a quadrant
        system with ``kappa = 4`` is allowed even though its angle is not a
        valid spanner parameter).
        """
        if int(kappa) != kappa or kappa < 1:
            raise ValueError(f"kappa must be a positive integer, got {kappa!r}")
        obj = object.__new__(cls)
        object.__setattr__(obj, "theta", TWO_PI / kappa)
        object.__setattr__(obj, "kappa", int(kappa))
        object.__setattr__(obj, "cone_angle", TWO_PI / kappa)
        return obj

    def index(self, apex, target) -> int:
        return cone_index(self, apex, target)


def cone_index(cones: ConeSystem, apex, target) -> int:
    dx = target[0] - apex[0]
    dy = target[1] - apex[1]
    if dx == 0.0 and dy == 0.0:
        raise DegenerateDirection("apex and target coincide")
    ang = math.atan2(dy, dx)
    if ang < 0.0:
        ang += TWO_PI
    k = cones.kappa
    i = int(ang / cones.cone_angle)
    return min(i, k - 1)


def circle_segment_intersections(c: Circle, a, b) -> list:
    """Points where the closed segment ``[ab]`` meets the circle, ordered from a to b."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    fx, fy = a[0] - c.center[0], a[1] - c.center[1]
    qa = dx * dx + dy * dy
    if qa == 0.0:
        raise DegenerateDirection("segment endpoints coincide")
    qb = 2.0 * (dx * fx + dy * fy)
    qc = fx * fx + fy * fy - c.radius * c.radius
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return []
    if disc == 0.0:
        roots = [-qb / (2.0 * qa)]
    else:
        sq = math.sqrt(disc)
        q = -0.5 * (qb + math.copysign(sq, qb))
        roots = sorted({q / qa, qc / q if q != 0.0 else q / qa})
    tol = 1e-12
    out = []
    for t in roots:
        if -tol <= t <= 1.0 + tol:
            t = min(max(t, 0.0), 1.0)
            out.append((a[0] + t * dx, a[1] + t * dy))
    return out


def distance(a, b) -> float:
    """Euclidean distance in the plane; extra fields such as a point id are ignored."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def polar_angle(center, p) -> float:
    ang = math.atan2(p[1] - center[1], p[0] - center[0])
    return ang + TWO_PI if ang < 0.0 else ang


def check_on_circle(c: Circle, p, name: str):
    d = math.hypot(p[0] - c.center[0], p[1] - c.center[1])
    if abs(d - c.radius) > 1e-9 * max(c.radius, 1e-300):
        raise NotOnCircle(f"{name} is {abs(d - c.radius):.3e} off the circle")


def on_cw_arc(c: Circle, start, end, query) -> bool:
    """True iff ``query`` lies on the clockwise arc from ``start`` to ``end`` (inclusive)."""
    for name, p in (("start", start), ("end", end), ("query", query)):
        check_on_circle(c, p, name)
    return cw_arc_contains(c, start, end, query)


def cw_arc_contains(c: Circle, start, end, query) -> bool:
    """:func:`on_cw_arc` for points already known to lie on ``c``."""
    close = 1e-9 * c.radius
    if distance(query, start) <= close or distance(query, end) <= close:
        return True
    a0 = polar_angle(c.center, start)
    span = (a0 - polar_angle(c.center, end)) % TWO_PI
    if distance(start, end) <= close:
        span = 0.0
    pos = (a0 - polar_angle(c.center, query)) % TWO_PI
    return pos <= span


def segments_properly_cross(a, b, c, d) -> bool:
    """Open segments ``ab`` and ``cd`` share exactly one interior point."""
    o1 = orient_sign(a, b, c)
    o2 = orient_sign(a, b, d)
    o3 = orient_sign(c, d, a)
    o4 = orient_sign(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def angle_at(a, apex, b) -> float:
    """Unsigned angle ``a apex b`` in [0, pi]."""
    ux, uy = a[0] - apex[0], a[1] - apex[1]
    vx, vy = b[0] - apex[0], b[1] - apex[1]
    return abs(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))


def ccw_angle(apex, frm, to) -> float:
    """Counterclockwise rotation in [0, 2*pi) taking direction apex->frm to apex->to."""
    a = math.atan2(frm[1] - apex[1], frm[0] - apex[0])
    b = math.atan2(to[1] - apex[1], to[0] - apex[0])
    return (b - a) % TWO_PI


def polygon_area(coords: Sequence) -> float:
    """Signed shoelace area (positive for ccw)."""
    n = len(coords)
    s = 0.0
    for i in range(n):
        x0, y0 = coords[i][0], coords[i][1]
        x1, y1 = coords[(i + 1) % n][0], coords[(i + 1) % n][1]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _turn_key(apex, ref, d, cw: bool, include_ref: bool = False) -> int:
    """Half-turn bucket of ``d`` measured from ``ref``.

    0 for (0, pi), 1 for [pi, 2*pi), and for the reference direction
    itself either -1 (a zero turn) or 2 (a full turn).
    """
    o = orient_sign(apex, ref, d)
    if cw:
        o = -o
    if o > 0:
        return 0
    if o < 0:
        return 1
    dot = (ref[0] - apex[0]) * (d[0] - apex[0]) + (ref[1] - apex[1]) * (d[1] - apex[1])
    if dot > 0:
        return -1 if include_ref else 2
    return 1


def next_around(apex, ref, candidates, cw: bool, include_ref: bool = False):
    """Id of the candidate met first when turning from direction ``apex -> ref``.

    ``candidates`` are ``(id, xy)`` pairs.  The turn is clockwise when ``cw``
    is true and counterclockwise otherwise.  A candidate lying exactly along
    the reference direction is a zero turn with ``include_ref`` and a full
    turn otherwise.
    """
    best = None
    best_half = 3
    best_xy = None
    for vid, xy in candidates:
        h = _turn_key(apex, ref, xy, cw, include_ref)
        if h < best_half:
            best, best_half, best_xy = vid, h, xy
        elif h == best_half and h in (0, 1):
            o = orient_sign(apex, best_xy, xy)
            if (o > 0) if cw else (o < 0):
                best, best_xy = vid, xy
    if best is None:
        raise DegenerateDirection("no candidate directions")
    return best


def order_by_turn(apex, ref, candidates, cw: bool, include_ref: bool = True) -> list:
    """``(half, id, xy)`` triples sorted by turning angle from ``apex -> ref``."""
    keyed = [(_turn_key(apex, ref, xy, cw, include_ref), vid, xy) for vid, xy in candidates]

    def cmp(a, b):
        if a[0] != b[0]:
            return a[0] - b[0]
        if a[0] in (0, 1):
            o = orient_sign(apex, a[2], b[2])
            if o:
                # b lies further along the turn when it is on the turning side of a
                return -o if not cw else o
        return (a[1] > b[1]) - (a[1] < b[1])

    return sorted(keyed, key=cmp_to_key(cmp))
