"""Weight reduction of the marked graph by polygon expansion.

The minimum spanning tree is kept.  Starting from the degenerate polygon
traced by an Euler tour of the tree, the region P grows face by face until
it reaches the convex hull.  Each face is absorbed across exactly one
unsettled edge ``pq``; the rest of its boundary already lies on P and sums
to ``S``.  The edge is kept when ``S > (1 + 1/r)|pq|``, otherwise it is
dropped and both endpoints remember how to walk around the face instead.

Faces are absorbed in post-order of the dual tree (faces joined across
non-tree edges, rooted at the outer face).  Since the cell structure is
fixed by the planar graph, that order yields the same decisions as any
other valid expansion order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .errors import BadR, BrokenRecord, Disconnected, NotATree, UnknownVertex
from .geom import next_around, polygon_area
from .spanner import LocalView, MarkedGraph, ViewEdge, ViewRecord

CW = 1
CCW = 0


class Decision(Enum):
    INCLUDE = "include"
    EXCLUDE = "exclude"


def include_decision(boundary_weight_sum: float, edge_length: float, r: float) -> Decision:
    if r <= 0:
        raise BadR(f"r must be positive, got {r!r}")
    if boundary_weight_sum > (1.0 + 1.0 / r) * edge_length:
        return Decision.INCLUDE
    return Decision.EXCLUDE


class ExcludedEdgeRecord(NamedTuple):
    other: int
    dir_bit: int
    weight: float


def _length(P, u, v) -> float:
    return math.hypot(P[u][0] - P[v][0], P[u][1] - P[v][1])


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def kruskal(n: int, edges: list, P) -> list:
    """Minimum spanning forest of ``edges`` (sorted ``(u, v)`` pairs); ties by list position."""
    order = sorted(range(len(edges)), key=lambda i: (_length(P, *edges[i]), i))
    dsu = _DSU(n)
    return [edges[i] for i in order if dsu.union(*edges[i])]


@dataclass
class TourPolygon:
    """Closed boundary walk; ``weights[i]`` belongs to ``boundary[i] -> boundary[i+1]``."""

    boundary: list
    weights: list

    def total_weight(self) -> float:
        return float(sum(self.weights))

    def area(self, points) -> float:
        return polygon_area([points[v] for v in self.boundary])


def euler_tour_polygon(mst_edges: list, points=None) -> TourPolygon:
    """Euler tour of a spanning tree as a cyclic boundary starting at vertex 0.

    Neighbours are visited in counterclockwise angular order when ``points``
    is given, otherwise in id order.  Every tree edge is walked twice.
    """
    edges = [tuple(e) for e in mst_edges]
    verts = sorted({v for e in edges for v in e}) or [0]
    n = max(verts) + 1
    if len(verts) != n or len(edges) != n - 1:
        raise NotATree(f"{len(edges)} edges over {len(verts)} vertices")
    adj = [[] for _ in range(n)]
    dsu = _DSU(n)
    for u, v in edges:
        if not dsu.union(u, v):
            raise NotATree(f"edge {u}-{v} closes a cycle")
        adj[u].append(v)
        adj[v].append(u)
    if n == 1:
        return TourPolygon([0], [])
    for u in range(n):
        if points is None:
            adj[u].sort()
        else:
            px, py = points[u][0], points[u][1]
            adj[u].sort(key=lambda w: math.atan2(points[w][1] - py, points[w][0] - px) % (2 * math.pi))
    pos = [{w: i for i, w in enumerate(a)} for a in adj]
    boundary = []
    u, v = 0, adj[0][0]
    for _ in range(2 * (n - 1)):
        boundary.append(u)
        a = adj[v]
        u, v = v, a[(pos[v][u] + 1) % len(a)]
    if points is None:
        weights = [0.0] * len(boundary)
    else:
        weights = [_length(points, boundary[i], boundary[(i + 1) % len(boundary)])
                   for i in range(len(boundary))]
    return TourPolygon(boundary, weights)


@dataclass
class SettleDiagnostics:
    """Per-edge bookkeeping replayed from the expansion."""

    order: list = field(default_factory=list)
    boundary_sums: dict = field(default_factory=dict)
    credits: dict = field(default_factory=dict)
    face_areas: dict = field(default_factory=dict)


@dataclass
class LightGraph:
    base: MarkedGraph
    r: float
    included: frozenset
    weights: dict
    excluded: list
    mst: list
    rings: list
    diagnostics: Optional[SettleDiagnostics] = field(default=None, repr=False, compare=False)
    _pos: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._pos is None:
            self._pos = [{w: i for i, w in enumerate(r)} for r in self.rings]

    @property
    def points(self):
        return self.base.points

    @property
    def n(self) -> int:
        return self.base.n

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.included

    def is_excluded(self, u: int, v: int) -> bool:
        return v in self.excluded[u]

    def edges(self) -> list:
        return sorted(self.included)

    def excluded_edges(self) -> list:
        return sorted((u, v) for u in range(self.n) for v in self.excluded[u] if u < v)

    def record(self, u: int, v: int) -> ExcludedEdgeRecord:
        return self.excluded[u][v]

    def total_weight(self) -> float:
        P = self.points
        return math.fsum(_length(P, u, v) for u, v in self.included)

    def mst_weight(self) -> float:
        P = self.points
        return math.fsum(_length(P, u, v) for u, v in self.mst)


def _faces(rings: list):
    """Face id of every half-edge under the face-on-left convention."""
    pos = [{w: i for i, w in enumerate(r)} for r in rings]
    face_of = {}
    faces = []
    for u in range(len(rings)):
        for v in rings[u]:
            if (u, v) in face_of:
                continue
            fid = len(faces)
            cyc = []
            a, b = u, v
            while (a, b) not in face_of:
                face_of[(a, b)] = fid
                cyc.append((a, b))
                rb = rings[b]
                a, b = b, rb[(pos[b][a] + 1) % len(rb)]
            faces.append(cyc)
    return faces, face_of


def _face_walk(rings, pos, start: int, target: int, first: int, cw: bool, limit: int):
    """Follow a face from ``start`` (first hop ``first``) until ``target`` is met."""
    path = [start, first]
    prev, cur = start, first
    while cur != target:
        if len(path) > limit:
            return None
        r = rings[cur]
        i = pos[cur][prev]
        nxt = r[(i + 1) % len(r)] if cw else r[(i - 1) % len(r)]
        prev, cur = cur, nxt
        path.append(cur)
    return path


def _first_hop(P, ring: list, u: int, chord: int, cw: bool) -> int:
    """Neighbour of ``u`` immediately clockwise (or counterclockwise) of the chord direction."""
    return next_around(P[u], P[chord], [(w, P[w]) for w in ring], cw)


def build_light_graph(g: MarkedGraph, r: float, check: bool = True) -> LightGraph:
    if not (isinstance(r, (int, float)) and r > 0 and math.isfinite(r)):
        raise BadR(f"r must be a positive finite number, got {r!r}")
    P = g.points
    n = g.n
    edges = g.edges()
    mst = kruskal(n, edges, P)
    if len(mst) != n - 1:
        raise Disconnected(f"graph has {n - len(mst)} components")
    tree = set(mst)
    faces, face_of = _faces(g.rings)

    areas = [polygon_area([P[a] for a, _ in cyc]) for cyc in faces]
    outer = min(range(len(faces)), key=lambda f: (areas[f], f))

    # dual tree over non-tree edges, rooted at the outer face
    dual = [[] for _ in faces]
    for e in edges:
        if e in tree:
            continue
        u, v = e
        fl, fr = face_of[(u, v)], face_of[(v, u)]
        dual[fl].append((fr, e))
        dual[fr].append((fl, e))
    parent_edge = [None] * len(faces)
    seen = [False] * len(faces)
    seen[outer] = True
    order = []
    stack = [outer]
    while stack:
        f = stack.pop()
        order.append(f)
        for h, e in dual[f]:
            if not seen[h]:
                seen[h] = True
                parent_edge[h] = e
                stack.append(h)
    if not all(seen):
        raise Disconnected("face structure is not connected")

    weights = {e: _length(P, *e) for e in tree}
    included = set(tree)
    excluded = [dict() for _ in range(n)]
    diag = SettleDiagnostics() if check else None
    # credit lives on the half-edge that currently faces outwards from P
    credit = {}
    if check:
        for u, v in tree:
            credit[(u, v)] = credit[(v, u)] = r * weights[(u, v)]

    child_side = {}
    for f in reversed(order):
        e = parent_edge[f]
        if e is None:
            continue
        u, v = e
        h = (u, v) if face_of[(u, v)] == f else (v, u)
        child_side[e] = h
        s = 0.0
        cred = 0.0
        for a, b in faces[f]:
            if (a, b) == h:
                continue
            key = (a, b) if a < b else (b, a)
            s += weights[key]
            if check:
                cred += credit[(a, b)]
        length = _length(P, u, v)
        decision = include_decision(s, length, r)
        if decision is Decision.INCLUDE:
            included.add(e)
            weights[e] = length
        else:
            weights[e] = s
            p, q = h
            # the child face is on the left of p->q: from p the walk turns
            # counterclockwise, from q clockwise
            excluded[p][q] = ExcludedEdgeRecord(q, CCW, s)
            excluded[q][p] = ExcludedEdgeRecord(p, CW, s)
        if check:
            c = cred - (length if decision is Decision.INCLUDE else 0.0)
            credit[(h[1], h[0])] = c
            diag.order.append(e)
            diag.boundary_sums[e] = s
            diag.credits[e] = c
            diag.face_areas[e] = areas[f]

    rings = [[w for w in g.rings[u] if (min(u, w), max(u, w)) in included] for u in range(n)]
    lg = LightGraph(g, float(r), frozenset(included), weights, excluded, sorted(mst), rings, diag)
    if check:
        for u in range(n):
            for v, rec in excluded[u].items():
                path = recover_face_path(lg, u, rec)
                got = path_length(P, path)
                # a face can touch v more than once, so the walk may stop early
                if got > rec.weight + 1e-9 * max(1.0, rec.weight):
                    raise BrokenRecord(
                        f"face path {u}->{v} has length {got!r}, record says {rec.weight!r}")
    return lg


def path_length(P, path: list) -> float:
    return math.fsum(_length(P, path[i], path[i + 1]) for i in range(len(path) - 1))


def recover_face_path(lg: LightGraph, u: int, rec: ExcludedEdgeRecord) -> list:
    """Walk the light graph from ``u`` around the face holding the dropped chord."""
    if not 0 <= u < lg.n:
        raise UnknownVertex(u)
    v = rec.other
    rings = lg.rings
    if not rings[u]:
        raise BrokenRecord(f"vertex {u} has no kept edges")
    P = lg.points
    cw = rec.dir_bit == CW
    first = _first_hop(P, rings[u], u, v, cw)
    path = _face_walk(rings, lg._pos, u, v, first, cw, 2 * len(lg.included) + 2)
    if path is None:
        raise BrokenRecord(f"face walk from {u} never reaches {v}")
    return path


def light_local_view(lg: LightGraph, v: int) -> LocalView:
    g = lg.base
    if not isinstance(v, int) or not 0 <= v < g.n:
        raise UnknownVertex(v)
    P = g.points
    edges = []
    for w in g.rings[v]:
        rec = lg.excluded[v].get(w)
        edges.append(ViewEdge(w, (P[w][0], P[w][1]), g.marks[v][w], rec is None,
                              None if rec is None else rec.dir_bit))
    semi = tuple(ViewRecord(r.other, (P[r.other][0], P[r.other][1]), r.side_bit)
                 for r in g.semi[v])
    return LocalView(v, (P[v][0], P[v][1]), tuple(edges), semi)
