"""Face walks driven only by the current vertex's view and the header.

A walk keeps one rotational sense for its whole length.  At the start
vertex the reference direction is the chord being replaced; afterwards it
is the edge the message just arrived along, and the next hop is the
neighbour immediately clockwise (or counterclockwise) of that reference.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Optional

from ..errors import NestedDetour, TargetUnreachable, WalkDidNotTerminate
from ..geom import next_around
from .header import RoutingHeader, ViewProvider, WalkMode, WalkRecord

CW = 1
CCW = 0


def _dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _ring_step(ring: list, prev: int, cw: bool) -> int:
    i = ring.index(prev)
    return ring[(i + 1) % len(ring)] if cw else ring[(i - 1) % len(ring)]


class Courier:
    """Carries the message hop by hop and keeps the travelled path.

    On a light graph a hop along a dropped edge becomes a face walk over
    kept edges, steered by the direction bit stored with the edge.
    """

    def __init__(self, provider: ViewProvider, header: RoutingHeader, light: bool = False,
                 target: Optional[int] = None, step_limit: int = 10 ** 6):
        self.provider = provider
        self.header = header
        self.light = light
        self.target = target
        self.path = [provider.position]
        self.length = 0.0
        self.walks = []
        self.step_limit = step_limit

    @property
    def pos(self) -> int:
        return self.provider.position

    @property
    def arrived(self) -> bool:
        return self.target is not None and self.pos == self.target

    def _step(self, w: int):
        view = self.provider.view(self.pos)
        self.length += _dist(view.xy, view.coords(w))
        self.provider.move(w, light=self.light)
        self.path.append(w)
        if len(self.path) > self.step_limit:
            raise WalkDidNotTerminate("route exceeded its step budget")

    def hop(self, w: int):
        view = self.provider.view(self.pos)
        edge = view.edge(w)
        if not self.light or edge.included:
            self._step(w)
            return
        self._detour(view, edge)

    def _detour(self, view, edge):
        h = self.header
        if h.detour_target is not None or h.walk_mode is WalkMode.LIGHT_DETOUR:
            raise NestedDetour(f"detour to {edge.other} requested inside another detour")
        u, w = view.vertex, edge.other
        start_len = self.length
        h.resume_mode = h.walk_mode
        h.walk_mode = WalkMode.LIGHT_DETOUR
        h.detour_target = w
        h.detour_orientation = edge.dir_bit
        h.check()
        cw = edge.dir_bit == CW
        kept = [(e.other, e.xy) for e in view.edges if e.included]
        first = next_around(view.xy, edge.xy, kept, cw)
        h.detour_prev = u
        h.check()
        self._step(first)
        budget = self.step_limit
        while self.pos != w:
            here = self.provider.view(self.pos)
            nxt = _ring_step(here.ring(light=True), h.detour_prev, cw)
            h.detour_prev = self.pos
            self._step(nxt)
            budget -= 1
            if budget <= 0:
                raise WalkDidNotTerminate(f"detour {u}->{w} does not close")
        self.walks.append(WalkRecord("detour", u, w, self.length - start_len,
                                     _dist(view.xy, edge.xy)))
        h.walk_mode = h.resume_mode
        h.resume_mode = None
        h.detour_target = h.detour_prev = h.detour_orientation = None
        h.check()


class WalkOutcome(NamedTuple):
    path: list
    current: int
    next: Optional[int]
    reached_target: bool


def unguided_face_walk(provider: ViewProvider, v: int, stop: Callable, header: RoutingHeader,
                       gap: tuple = None, *, skip: Optional[int] = None,
                       courier: Optional[Courier] = None) -> WalkOutcome:
    """Walk the face between the two edges ``gap = (cw_end, ccw_end)`` at ``v``.

    The walk starts along the shorter of the two edges and tests
    ``stop(cur, cur_xy, nxt, nxt_xy)`` at every vertex after the first hop.
    It also stops when the next hop would be the other end of the gap.
    With ``skip`` set, testing starts only once that vertex is reached.
    """
    if courier is None:
        courier = Courier(provider, header)
    if provider.position != v:
        raise WalkDidNotTerminate(f"walk must start at the message position {provider.position}")
    view = provider.view(v)
    cw_end, ccw_end = gap
    d_cw = _dist(view.xy, view.coords(cw_end))
    d_ccw = _dist(view.xy, view.coords(ccw_end))
    if (d_ccw, ccw_end) <= (d_cw, cw_end):
        first, far, cw = ccw_end, cw_end, False
    else:
        first, far, cw = cw_end, ccw_end, True
    header.walk_mode = WalkMode.UNGUIDED
    header.walk_orientation = CW if cw else CCW
    header.walk_target = far
    header.anchor = (v, view.xy[0], view.xy[1])
    header.skip = skip
    header.check()
    start_idx = len(courier.path) - 1
    start_len = courier.length
    header.walk_prev = v
    header.check()
    courier.hop(first)
    limit = courier.step_limit
    while True:
        cur = courier.pos
        if courier.arrived:
            out = WalkOutcome(courier.path[start_idx:], cur, None, True)
            break
        here = provider.view(cur)
        nxt = _ring_step(here.ring(), header.walk_prev, cw)
        if nxt == v:
            raise WalkDidNotTerminate(f"face walk from {v} closed without stopping")
        if header.skip is not None and cur == header.skip:
            header.skip = None
        active = header.skip is None
        if (active and stop(cur, here.xy, nxt, here.coords(nxt))) or nxt == far:
            out = WalkOutcome(courier.path[start_idx:], cur, nxt, False)
            break
        header.walk_prev = cur
        courier.hop(nxt)
        limit -= 1
        if limit <= 0:
            raise WalkDidNotTerminate("face walk exceeded its step budget")
    courier.walks.append(WalkRecord("unguided", v, courier.pos, courier.length - start_len,
                                    _dist(view.xy, provider.view(courier.pos).xy)))
    return out


def guided_face_walk(provider: ViewProvider, v: int, p: int, header: RoutingHeader,
                     *, courier: Optional[Courier] = None) -> list:
    """Walk from ``v`` to ``p`` around the face of the dropped edge ``vp``.

    The rotational sense comes from the side bit stored with ``vp`` at
    ``v``.  Whenever the current vertex has an edge to ``p`` it is taken.
    """
    if courier is None:
        courier = Courier(provider, header)
    view = provider.view(v)
    start_idx = len(courier.path) - 1
    start_len = courier.length
    if view.has_edge(p):
        courier.hop(p)
        return courier.path[start_idx:]
    rec = view.semi_record(p)
    if rec is None:
        raise TargetUnreachable(f"{v} stores nothing about {p}")
    cw = rec.bit == 1
    header.walk_mode = WalkMode.GUIDED
    header.walk_target = p
    header.walk_orientation = rec.bit
    header.check()
    first = next_around(view.xy, rec.xy, [(e.other, e.xy) for e in view.edges], cw)
    header.walk_prev = v
    header.check()
    courier.hop(first)
    limit = courier.step_limit
    while courier.pos != p:
        if courier.arrived:
            break
        here = provider.view(courier.pos)
        if here.has_edge(p):
            header.walk_prev = courier.pos
            courier.hop(p)
            break
        nxt = _ring_step(here.ring(), header.walk_prev, cw)
        if nxt == v:
            raise TargetUnreachable(f"guided walk from {v} went round without meeting {p}")
        header.walk_prev = courier.pos
        courier.hop(nxt)
        limit -= 1
        if limit <= 0:
            raise TargetUnreachable(f"guided walk {v}->{p} exceeded its step budget")
    courier.walks.append(WalkRecord("guided", v, courier.pos, courier.length - start_len,
                                    _dist(view.xy, rec.xy)))
    return courier.path[start_idx:]
