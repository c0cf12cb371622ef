"""Routers on the Delaunay triangulation, the marked graph and the light graph."""

from __future__ import annotations

import math
from typing import Callable, Optional

from ..delaunay import TriangulationMesh, rightmost_intersecting_triangle
from ..errors import (NoSegmentIntersection, RoutingError, UnknownVertex,
                      WalkDidNotTerminate)
from ..geom import next_around, order_by_turn
from ..spanner import LocalView, MarkedGraph, ProtectionMark, local_view
from .geometry import Frame, decide_in_frame
from .header import DecisionRecord, RouteResult, RoutingHeader, ViewProvider
from .walks import Courier, guided_face_walk, unguided_face_walk

SWEEP = "sweep"
RIGHTMOST = "rightmost"

# competitive ratio of the triangle router on Delaunay triangulations
DT_ROUTING_RATIO = 1.185043874 + 1.5 * math.pi


def routing_ratio_bound(layer: str, theta: Optional[float] = None,
                        r: Optional[float] = None) -> float:
    """Proven routing ratio for ``layer`` in ``{"dt", "mbdg", "lmbdg"}``."""
    from ..spanner import face_stretch_bound
    if layer == "dt":
        return DT_ROUTING_RATIO
    if theta is None:
        raise ValueError(f"the {layer} bound needs theta")
    bound = DT_ROUTING_RATIO * face_stretch_bound(theta)
    if layer == "mbdg":
        return bound
    if layer == "lmbdg":
        if r is None:
            raise ValueError("the lmbdg bound needs r")
        return bound * (1.0 + 1.0 / r)
    raise ValueError(f"unknown layer {layer!r}")


def _dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _check_pair(n: int, s: int, t: int):
    for v in (s, t):
        if not isinstance(v, int) or not 0 <= v < n:
            raise UnknownVertex(v)
    if s == t:
        raise ValueError("source and target coincide")


def _corner(v: int, xy) -> tuple:
    return (v, xy[0], xy[1])


def _decide(fr: Frame, tri: tuple, v: int):
    """Apply the triangle rule at corner ``v`` of ``tri`` (corners are ``(id, x, y)``)."""
    k = 0 if tri[0][0] == v else (1 if tri[1][0] == v else 2)
    a, b = [tri[j] for j in range(3) if j != k]
    c = tri[k]
    choice, direction = decide_in_frame(fr, (c[1], c[2]), (a[1], a[2]), (b[1], b[2]),
                                        a[0], b[0])[:2]
    return choice, direction.value


def _pick_f(fr: Frame, v: int, v_xy, prev_tri: tuple):
    """Corner of the previous triangle whose edge to ``v`` meets ``[st]`` furthest right."""
    best = None
    best_x = -math.inf
    for c in prev_tri:
        if c[0] == v:
            continue
        cxy = (c[1], c[2])
        if fr.crosses(v_xy, cxy):
            x = fr.crossing_param(v_xy, cxy)
            if x > best_x:
                best, best_x = c, x
    if best is None:
        raise NoSegmentIntersection(f"no edge of the previous triangle at {v} meets [st]")
    return best


def _sweep_pair(fr: Frame, v_xy, f, cands: list, sweep_cw: bool):
    """Scan ``cands`` from ``f`` in the sweep sense over half a turn.

    Returns ``(u_m, u_1, in_half)``: ``u_1`` is the first non-crossing
    candidate and ``u_m`` its predecessor in the full order (or, when all
    scanned candidates cross, ``u_m`` is the last of them and ``u_1`` its
    successor).  ``in_half`` tells whether ``u_m`` lies inside the scanned
    half-turn.
    """
    f_xy = (f[1], f[2])
    order = order_by_turn(v_xy, f_xy, cands, sweep_cw, include_ref=True)
    half = [o for o in order if o[0] <= 0]
    if not half:
        raise RoutingError("nothing protected in the half-plane towards t")
    for k, (h, vid, xy) in enumerate(half):
        if not fr.crosses(v_xy, xy):
            if k > 0:
                return half[k - 1][1], vid, True
            prev = order[-1][1]
            return prev, vid, False
    last = half[-1]
    idx = order.index(last)
    nxt = order[(idx + 1) % len(order)][1]
    return last[1], nxt, True


def delaunay_route(mesh: TriangulationMesh, s: int, t: int, variant: str = SWEEP,
                   terminal: Optional[Callable] = None) -> RouteResult:
    """Route from ``s`` to ``t`` on the triangulation.

    ``variant="rightmost"`` always uses the rightmost triangle at the
    current vertex that meets ``[st]``.  ``variant="sweep"`` picks the
    triangle found by sweeping from the previous triangle, which is what
    the marked-graph simulation reproduces.  ``terminal(v)`` says whether
    ``v`` may jump straight to ``t``; by default any edge to ``t`` counts.
    """
    _check_pair(mesh.n, s, t)
    if variant not in (SWEEP, RIGHTMOST):
        raise ValueError(f"unknown variant {variant!r}")
    P = mesh.points
    s_xy, t_xy = (P[s][0], P[s][1]), (P[t][0], P[t][1])
    fr = Frame(s_xy, t_xy)
    if terminal is None:
        def terminal(v):
            return mesh.has_edge(v, t)
    path = [s]
    decisions = []
    prev_tri = None
    v = s
    length = 0.0
    for _ in range(4 * mesh.n + 4):
        v_xy = (P[v][0], P[v][1])
        if terminal(v):
            decisions.append(DecisionRecord(v, None, t, None))
            length += _dist(v_xy, t_xy)
            path.append(t)
            break
        cands = [(w, (P[w][0], P[w][1])) for w in mesh.rings[v]]
        if variant == RIGHTMOST:
            tri_ids = rightmost_intersecting_triangle(mesh, v, P[s], P[t])
            tri = tuple(_corner(i, P[i]) for i in tri_ids)
        elif prev_tri is None:
            u1 = next_around(v_xy, t_xy, cands, cw=False, include_ref=True)
            um = next_around(v_xy, t_xy, cands, cw=True)
            tri = (_corner(v, v_xy), _corner(um, P[um]), _corner(u1, P[u1]))
        else:
            f = _pick_f(fr, v, v_xy, prev_tri)
            sweep_cw = fr.side(v_xy) < 0
            um, u1, _ = _sweep_pair(fr, v_xy, f, cands, sweep_cw)
            tri = (_corner(v, v_xy), _corner(um, P[um]), _corner(u1, P[u1]))
        choice, direction = _decide(fr, tri, v)
        decisions.append(DecisionRecord(v, tri, choice, direction))
        length += _dist(v_xy, P[choice])
        path.append(choice)
        prev_tri = tri
        v = choice
        if v == t:
            break
    else:
        raise WalkDidNotTerminate(f"route {s}->{t} did not reach the target")
    return RouteResult(path, length, [d.vertex for d in decisions], 0, decisions, [], 0)


def _views(g, light: bool) -> list:
    cache = getattr(g, "_view_cache", None)
    if cache is None:
        if light:
            from ..lightness import light_local_view
            cache = [light_local_view(g, v) for v in range(g.n)]
        else:
            cache = [local_view(g, v) for v in range(g.n)]
        try:
            object.__setattr__(g, "_view_cache", cache)
        except AttributeError:
            pass
    return cache


def _protected(view: LocalView) -> list:
    """Every Delaunay edge protected at this vertex: graph edges plus semi-protected records."""
    out = [(e.other, e.xy, e.mark) for e in view.edges]
    out.extend((r.other, r.xy, ProtectionMark.EXTREME) for r in view.semi)
    return out


class _Simulation:
    """One query of the marked-graph router; every decision reads only ``view(pos)``."""

    def __init__(self, views: list, n: int, s: int, t: int, light: bool, strict: bool):
        self.provider = ViewProvider(views.__getitem__, s, strict=strict)
        self.s, self.t = s, t
        sv = self.provider.view(s)
        self.s_xy = sv.xy
        # t's coordinates travel in the header from the start
        self.header = RoutingHeader(_corner(s, sv.xy), None)
        self.light = light
        self.courier = Courier(self.provider, self.header, light=light, target=t,
                               step_limit=50 * n + 50)
        self.decisions = []
        self.n = n

    def run(self, t_xy) -> RouteResult:
        h = self.header
        h.t = _corner(self.t, t_xy)
        h.check()
        self.t_xy = t_xy
        self.fr = Frame(self.s_xy, t_xy)
        for _ in range(4 * self.n + 4):
            if self.courier.arrived:
                break
            self._step()
        else:
            raise WalkDidNotTerminate(f"route {self.s}->{self.t} did not reach the target")
        c = self.courier
        return RouteResult(c.path, c.length, [d.vertex for d in self.decisions],
                           self.provider.violations, self.decisions, c.walks, h.peak_words)

    def _reach(self, v: int, w: int, view: LocalView):
        """Go from ``v`` to the chosen neighbour ``w`` of the triangulation."""
        if view.has_edge(w):
            self.courier.hop(w)
        else:
            guided_face_walk(self.provider, v, w, self.header, courier=self.courier)

    def _step(self):
        v = self.provider.position
        view = self.provider.view(v)
        v_xy = view.xy
        t = self.t
        fr = self.fr
        h = self.header
        prot = _protected(view)
        if any(p[0] == t for p in prot):
            self.decisions.append(DecisionRecord(v, None, t, None))
            self._reach(v, t, view)
            h.clear_walk()
            return
        cands = [(p[0], p[1]) for p in prot]
        marks = {p[0]: p[2] for p in prot}
        coords = {p[0]: p[1] for p in prot}
        skip = None
        if h.prev_triangle is None:
            u1 = next_around(v_xy, self.t_xy, cands, cw=False, include_ref=True)
            um = next_around(v_xy, self.t_xy, cands, cw=True)

            def status(xy):
                return fr.side(xy)
            real_cw_end, real_ccw_end = um, u1
        else:
            f = _pick_f(fr, v, v_xy, h.prev_triangle)
            sweep_cw = fr.side(v_xy) < 0
            um, u1, in_half = _sweep_pair(fr, v_xy, f, cands, sweep_cw)
            if not in_half:
                # the previous triangle sits inside this gap; a walk from u_m
                # has to get past f before it may stop
                skip = f[0]

            def status(xy):
                return fr.crosses(v_xy, xy)
            # u_m is on the clockwise side of u_1 in the sweep sense
            real_cw_end, real_ccw_end = (u1, um) if sweep_cw else (um, u1)
        if marks[um] is not ProtectionMark.MIDDLE and marks[u1] is not ProtectionMark.MIDDLE:
            tri = (_corner(v, v_xy), _corner(um, coords[um]), _corner(u1, coords[u1]))
            choice, direction = _decide(fr, tri, v)
            self.decisions.append(DecisionRecord(v, tri, choice, direction))
            self._reach(v, choice, view)
        else:
            if skip is not None:
                # only a walk that starts at u_m meets f first
                d_m, d_1 = _dist(v_xy, coords[um]), _dist(v_xy, coords[u1])
                start_at_um = (d_m, um) < (d_1, u1)
                if not start_at_um:
                    skip = None

            def stop(cur, cur_xy, nxt, nxt_xy):
                return status(cur_xy) != status(nxt_xy)

            out = unguided_face_walk(self.provider, v, stop, h, (real_cw_end, real_ccw_end),
                                     skip=skip, courier=self.courier)
            if out.reached_target:
                # the walk met t before the triangle was settled
                self.decisions.append(DecisionRecord(v, None, t, None))
                h.clear_walk()
                return
            cur = out.current
            here = self.provider.view(cur)
            tri = (h.anchor, _corner(cur, here.xy), _corner(out.next, here.coords(out.next)))
            choice, direction = _decide(fr, tri, v)
            self.decisions.append(DecisionRecord(v, tri, choice, direction))
            if choice != cur:
                h.walk_prev = cur
                self.courier.hop(choice)
        h.clear_walk()
        h.prev_triangle = self.decisions[-1].triangle
        h.check()


def _route_marked(g, s: int, t: int, light: bool, strict: bool) -> RouteResult:
    _check_pair(g.n, s, t)
    views = _views(g, light)
    sim = _Simulation(views, g.n, s, t, light, strict)
    # t's position is part of the query, like s's
    return sim.run(views[t].xy)


def mbdg_route(g: MarkedGraph, s: int, t: int, strict: bool = False) -> RouteResult:
    """Simulate the sweep router on the marked graph with 1-local decisions."""
    return _route_marked(g, s, t, False, strict)


def lmbdg_route(lg, s: int, t: int, strict: bool = False) -> RouteResult:
    """As :func:`mbdg_route`, detouring around every dropped light-graph edge."""
    return _route_marked(lg, s, t, True, strict)


def runs_agree(marked: RouteResult, reference: RouteResult) -> bool:
    """``marked`` reproduces ``reference`` up to the point where one of its walks met t."""
    a, b = marked.decision_vertices, reference.decision_vertices
    if a == b:
        return True
    if len(a) > len(b) or b[:len(a)] != a:
        return False
    return marked.decisions[-1].triangle is None


def known_terminal(g: MarkedGraph, t: int) -> Callable:
    """Vertices that know an edge to ``t`` in the marked graph (for comparing runs)."""
    def ok(v):
        return g.has_edge(v, t) or any(r.other == t for r in g.semi[v])
    return ok
