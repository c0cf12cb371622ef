"""Bounded-degree pruning of the Delaunay triangulation.

Every vertex splits its Delaunay edges into ``kappa`` cones.  Inside a cone
the two angularly outermost edges are *extreme*, the next two inwards are
*penultimate*, and the shortest of whatever remains is the *middle* edge.
An edge survives iff it is protected (extreme, penultimate or middle) at
both endpoints.  Edges that survive at only one endpoint are remembered
there as semi-protected records so that a router can still find them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .delaunay import TriangulationMesh, sort_cw
from .errors import LocalityViolation, ThetaOutOfRange, UnknownVertex
from .geom import ConeSystem, cone_index

DELAUNAY_STRETCH = 1.998


class ProtectionMark(Enum):
    EXTREME = "E"
    PENULTIMATE = "P"
    MIDDLE = "M"


class SemiProtectedRecord(NamedTuple):
    other: int
    side_bit: int


def face_stretch_bound(theta: float) -> float:
    """Worst-case face path / chord ratio, max(pi/2, pi*sin(theta/2) + 1)."""
    return max(math.pi / 2, math.pi * math.sin(theta / 2) + 1.0)


def spanner_stretch_bound(theta: float) -> float:
    """Stretch of the pruned graph with respect to Euclidean distance (tau)."""
    return DELAUNAY_STRETCH * face_stretch_bound(theta)


def degree_bound(kappa: int) -> int:
    return 5 * kappa


def _dist2(P, u, v) -> float:
    return (P[u][0] - P[v][0]) ** 2 + (P[u][1] - P[v][1]) ** 2


def classify_sorted(P, u: int, members: list) -> dict:
    """Marks for clockwise-sorted cone members ``v_0 .. v_m`` of apex ``u``."""
    k = len(members)
    marks = {v: None for v in members}
    if k == 0:
        return marks
    marks[members[0]] = ProtectionMark.EXTREME
    marks[members[-1]] = ProtectionMark.EXTREME
    if k >= 3:
        marks[members[1]] = ProtectionMark.PENULTIMATE
        marks[members[-2]] = ProtectionMark.PENULTIMATE
    if k >= 5:
        # shortest remaining edge; ties go to the smaller id
        mid = min(members[2:-2], key=lambda v: (_dist2(P, u, v), v))
        marks[mid] = ProtectionMark.MIDDLE
    return marks


def cone_members(mesh: TriangulationMesh, cones: ConeSystem, u: int) -> list:
    """Clockwise-sorted Delaunay neighbours of ``u`` for every cone index."""
    P = mesh.points
    buckets = [[] for _ in range(cones.kappa)]
    for v in mesh.rings[u]:
        buckets[cone_index(cones, P[u], P[v])].append(v)
    return [sort_cw(P[u], b, P) if len(b) > 1 else b for b in buckets]


def classify_cone_edges(mesh: TriangulationMesh, cones: ConeSystem, u: int,
                        cone: int) -> dict:
    mesh.check_vertex(u)
    members = mesh.neighbors_cw(u, (cones, cone))
    return classify_sorted(mesh.points, u, members)


@dataclass
class MarkedGraph:
    """The pruned graph (BDG) together with its routing annotations (MBDG).

    ``marks[u][v]`` is the protection of Delaunay edge ``uv`` as seen from
    ``u`` (absent when unprotected there).  ``rings[u]`` holds the surviving
    neighbours of ``u`` in clockwise order.  ``semi[v]`` lists the Delaunay
    edges dropped because the far endpoint did not protect them.
    """

    mesh: TriangulationMesh
    cones: ConeSystem
    marks: list
    rings: list
    semi: list
    _adj: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._adj is None:
            self._adj = [frozenset(r) for r in self.rings]

    @property
    def theta(self) -> float:
        return self.cones.theta

    @property
    def points(self) -> list:
        return self.mesh.points

    @property
    def n(self) -> int:
        return self.mesh.n

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self.rings[u])

    def max_degree(self) -> int:
        return max(len(r) for r in self.rings)

    def edges(self) -> list:
        return sorted((u, v) for u in range(self.n) for v in self.rings[u] if u < v)

    def mark(self, u: int, v: int) -> Optional[ProtectionMark]:
        return self.marks[u].get(v)

    def is_protected(self, u: int, v: int) -> bool:
        return v in self.marks[u]

    def dropped_edges(self) -> list:
        return [(u, v) for u, v in self.mesh.edges() if not self.has_edge(u, v)]


def build_marked_graph(mesh: TriangulationMesh, theta: float) -> MarkedGraph:
    if not (0.0 < theta < math.pi / 2):
        raise ThetaOutOfRange(f"theta must lie in (0, pi/2), got {theta!r}")
    cones = ConeSystem(theta)
    P = mesh.points
    n = mesh.n
    marks = [dict() for _ in range(n)]
    semi = [[] for _ in range(n)]
    for u in range(n):
        for members in cone_members(mesh, cones, u):
            if not members:
                continue
            cm = classify_sorted(P, u, members)
            mid_pos = None
            for pos, v in enumerate(members):
                if cm[v] is ProtectionMark.MIDDLE:
                    mid_pos = pos
            for pos, v in enumerate(members):
                mk = cm[v]
                if mk is not None:
                    marks[u][v] = mk
                else:
                    # unprotected at u; the chord is clockwise of the middle
                    # edge iff it comes later in the clockwise order
                    semi[v].append(SemiProtectedRecord(u, 1 if pos > mid_pos else 0))
    rings = [[v for v in mesh.rings[u] if v in marks[u] and u in marks[v]]
             for u in range(n)]
    for v in range(n):
        semi[v].sort()
    return MarkedGraph(mesh, cones, marks, rings, semi)


class ViewEdge(NamedTuple):
    other: int
    xy: tuple
    mark: Optional[ProtectionMark]
    included: bool = True
    dir_bit: Optional[int] = None


class ViewRecord(NamedTuple):
    other: int
    xy: tuple
    bit: int


@dataclass(frozen=True)
class LocalView:
    """What a vertex knows about the network: itself and its stored edges.

    ``edges`` are its graph neighbours in clockwise order; ``semi`` are the
    semi-protected Delaunay edges it stores.  For a light graph every edge
    also says whether it survived pruning and, if not, the face direction
    bit of its recovery path.
    """

    vertex: int
    xy: tuple
    edges: tuple
    semi: tuple = ()

    def coords(self, v: int) -> tuple:
        if v == self.vertex:
            return self.xy
        for e in self.edges:
            if e.other == v:
                return e.xy
        for r in self.semi:
            if r.other == v:
                return r.xy
        raise LocalityViolation(f"vertex {v} is not visible from {self.vertex}")

    def edge(self, v: int) -> ViewEdge:
        for e in self.edges:
            if e.other == v:
                return e
        raise LocalityViolation(f"{v} is not a neighbour of {self.vertex}")

    def has_edge(self, v: int, light: bool = False) -> bool:
        for e in self.edges:
            if e.other == v:
                return e.included or not light
        return False

    def semi_record(self, v: int) -> Optional[ViewRecord]:
        for r in self.semi:
            if r.other == v:
                return r
        return None

    def ring(self, light: bool = False) -> list:
        """Clockwise neighbour ids; with ``light`` only those kept after pruning."""
        return [e.other for e in self.edges if e.included or not light]

    def word_count(self) -> int:
        # marks and direction bits pack into the word of their edge
        return 3 + len(self.edges) + len(self.semi)


def local_view(g: MarkedGraph, v: int) -> LocalView:
    if not isinstance(v, int) or not 0 <= v < g.n:
        raise UnknownVertex(v)
    P = g.points
    edges = tuple(ViewEdge(w, (P[w][0], P[w][1]), g.marks[v][w]) for w in g.rings[v])
    semi = tuple(ViewRecord(r.other, (P[r.other][0], P[r.other][1]), r.side_bit)
                 for r in g.semi[v])
    return LocalView(v, (P[v][0], P[v][1]), edges, semi)
