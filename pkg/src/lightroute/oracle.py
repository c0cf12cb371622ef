"""Brute-force ground truth: shortest paths, stretch, Euclidean MST, routing
ratios and an empty-circle Delaunay check.

None of this shares code with the constructions it checks beyond the exact
predicates in :mod:`lightroute.geom`.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .errors import Disconnected, TooLarge, UnknownVertex
from .geom import incircle_sos, orient_sign

INF = math.inf
PAIR_CAP = 400
SAMPLE_PAIRS = 1000
BRUTE_FORCE_LIMIT = 60


def _xy(p) -> tuple:
    return (p[0], p[1])


@dataclass(frozen=True)
class PlainGraph:
    """Points plus an explicit edge list, for graphs not built by this package."""

    points: list
    edge_list: list

    @property
    def n(self) -> int:
        return len(self.points)

    def edges(self) -> list:
        return [tuple(e) for e in self.edge_list]


def _as_graph(graph):
    """``(points, edges)`` from a graph object or a ``(points, edges)`` pair."""
    if not hasattr(graph, "edges"):
        points, edges = graph
    else:
        points, edges = graph.points, graph.edges()
    return [_xy(p) for p in points], [tuple(e) for e in edges]


def _adjacency(points, edges) -> list:
    adj = [[] for _ in points]
    for u, v in edges:
        w = math.dist(points[u], points[v])
        adj[u].append((v, w))
        adj[v].append((u, w))
    for row in adj:
        row.sort()
    return adj


def _dijkstra(adj: list, source: int) -> list:
    dist = [INF] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_paths(graph, source: int) -> list:
    """Single-source Euclidean-weighted distances; unreachable vertices get ``inf``."""
    points, edges = _as_graph(graph)
    if not isinstance(source, int) or not 0 <= source < len(points):
        raise UnknownVertex(source)
    return _dijkstra(_adjacency(points, edges), source)


class BaseGraphDistances(NamedTuple):
    """Reference that measures pairs by shortest paths in ``base``."""
    base: object


EUCLIDEAN = "euclidean"


@dataclass
class StretchReport:
    max_ratio: float
    witness: Optional[tuple]
    pairs: int
    _ratios: dict = field(default_factory=dict, repr=False)

    def ratios(self) -> dict:
        """Ratio for every measured pair."""
        return dict(self._ratios)


def _pair_list(n: int, pairs, cap: int, seed: int) -> list:
    if pairs is not None and pairs != "all":
        return [tuple(p) for p in pairs]
    if n <= cap or n * (n - 1) // 2 <= SAMPLE_PAIRS:
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng = random.Random(seed)
    out = set()
    while len(out) < SAMPLE_PAIRS:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            out.add((min(u, v), max(u, v)))
    return sorted(out)


def stretch_factor(graph, reference=EUCLIDEAN, pairs=None, cap: int = PAIR_CAP,
                   seed: int = 0) -> StretchReport:
    """Largest ratio of graph distance to reference distance over the pairs.

    ``reference`` is :data:`EUCLIDEAN` or :class:`BaseGraphDistances`.
    ``pairs`` defaults to all pairs up to ``cap`` vertices and to 1000
    seeded random pairs beyond that.
    """
    points, edges = _as_graph(graph)
    n = len(points)
    adj = _adjacency(points, edges)
    todo = _pair_list(n, pairs, cap, seed)
    base_adj = None
    if isinstance(reference, BaseGraphDistances):
        bp, be = _as_graph(reference.base)
        base_adj = _adjacency(bp, be)
    elif reference != EUCLIDEAN:
        raise ValueError(f"unknown reference {reference!r}")
    by_source = {}
    for u, v in todo:
        by_source.setdefault(u, []).append(v)
    best, witness = 1.0 if todo else 0.0, None
    ratios = {}
    for u in sorted(by_source):
        dist = _dijkstra(adj, u)
        ref = _dijkstra(base_adj, u) if base_adj is not None else None
        for v in by_source[u]:
            if dist[v] == INF:
                raise Disconnected(f"no path between {u} and {v}")
            r = ref[v] if ref is not None else math.dist(points[u], points[v])
            ratio = dist[v] / r if r > 0 else 1.0
            ratios[(u, v)] = ratio
            if witness is None or ratio > best:
                best, witness = ratio, (u, v)
    return StretchReport(best, witness, len(todo), ratios)


def euclidean_mst(source) -> tuple:
    """Minimum spanning tree as ``(sorted edge list, total weight)``.

    ``source`` is a point list (complete graph, Prim in O(n^2)) or a graph
    (Kruskal over its edges).  Equal weights go to the smaller edge.
    """
    if not hasattr(source, "edges"):
        pts = [_xy(p) for p in source]
        n = len(pts)
        if n == 0:
            return [], 0.0
        in_tree = [False] * n
        best = [(INF, -1)] * n
        best[0] = (0.0, -1)
        edges = []
        for _ in range(n):
            u = min((i for i in range(n) if not in_tree[i]), key=lambda i: (best[i], i))
            in_tree[u] = True
            if best[u][1] >= 0:
                p = best[u][1]
                edges.append((min(u, p), max(u, p)))
            for v in range(n):
                if not in_tree[v]:
                    cand = (math.dist(pts[u], pts[v]), min(u, v), max(u, v))
                    cur = best[v]
                    if cur[1] < 0 or cand < (cur[0], min(v, cur[1]), max(v, cur[1])):
                        best[v] = (cand[0], u)
        edges.sort()
        return edges, math.fsum(math.dist(pts[u], pts[v]) for u, v in edges)
    points, graph_edges = _as_graph(source)
    n = len(points)
    order = sorted((math.dist(points[u], points[v]), min(u, v), max(u, v)) for u, v in graph_edges)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for _, u, v in order:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            edges.append((u, v))
    if n and len(edges) != n - 1:
        raise Disconnected(f"graph has {n - len(edges)} components")
    edges.sort()
    return edges, math.fsum(math.dist(points[u], points[v]) for u, v in edges)


def empirical_routing_ratio(router: Callable, graph, pairs="all", cap: int = PAIR_CAP,
                            seed: int = 0, on_route: Optional[Callable] = None) -> StretchReport:
    """Largest routed length over ``|st|`` across ordered pairs.

    ``router(graph, s, t)`` must return an object with a ``length``.
    ``on_route(s, t, result)`` is called for every query when given.
    """
    points = [_xy(p) for p in graph.points]
    n = len(points)
    if pairs == "all" or pairs is None:
        if n <= cap:
            todo = [(s, t) for s in range(n) for t in range(n) if s != t]
        else:
            rng = random.Random(seed)
            todo = []
            while len(todo) < SAMPLE_PAIRS:
                s, t = rng.randrange(n), rng.randrange(n)
                if s != t:
                    todo.append((s, t))
    else:
        todo = [tuple(p) for p in pairs]
    best, witness = 1.0 if todo else 0.0, None
    ratios = {}
    for s, t in todo:
        res = router(graph, s, t)
        if on_route is not None:
            on_route(s, t, res)
        ratio = res.length / math.dist(points[s], points[t])
        ratios[(s, t)] = ratio
        if witness is None or ratio > best:
            best, witness = ratio, (s, t)
    return StretchReport(best, witness, len(todo), ratios)


class BruteForceResult(NamedTuple):
    passed: bool
    witness: Optional[tuple]
    missing: list
    extra: list


def delaunay_edges_bruteforce(points: Sequence) -> set:
    """Edges ``uv`` for which some circle through ``u, v`` and a third point is empty.

    Ties on a circle are settled with the same symbolic perturbation the
    triangulation uses, so the answer is unique.
    """
    pts = [_xy(p) for p in points]
    n = len(pts)
    out = set()
    for u in range(n):
        for v in range(u + 1, n):
            for w in range(n):
                if w == u or w == v:
                    continue
                o = orient_sign(pts[u], pts[v], pts[w])
                if o == 0:
                    continue
                a, b = (u, v) if o > 0 else (v, u)
                empty = True
                for d in range(n):
                    if d in (u, v, w):
                        continue
                    if incircle_sos(pts[a], pts[b], pts[w], pts[d], a, b, w, d) > 0:
                        empty = False
                        break
                if empty:
                    out.add((u, v))
                    break
    return out


def delaunay_bruteforce_check(mesh, limit: int = BRUTE_FORCE_LIMIT) -> BruteForceResult:
    """Compare the mesh's edges with the empty-circle characterisation."""
    n = mesh.n
    if n > limit:
        raise TooLarge(f"brute-force Delaunay check is capped at {limit} points, got {n}")
    truth = delaunay_edges_bruteforce(mesh.points)
    have = {(min(u, v), max(u, v)) for u, v in mesh.edges()}
    missing = sorted(truth - have)
    extra = sorted(have - truth)
    witness = (missing or extra or [None])[0]
    return BruteForceResult(not missing and not extra, witness, missing, extra)


def segment_interval(tri_pts: Sequence, s, t) -> Optional[tuple]:
    """Parameter interval of ``[st]`` inside the closed triangle, or None."""
    pts = [_xy(p) for p in tri_pts]
    if orient_sign(*pts) < 0:
        pts.reverse()
    lo, hi = 0.0, 1.0
    sx, sy = _xy(s)
    tx, ty = _xy(t)
    for i in range(3):
        a, b = pts[i], pts[(i + 1) % 3]
        os_, ot = orient_sign(a, b, (sx, sy)), orient_sign(a, b, (tx, ty))
        if os_ >= 0 and ot >= 0:
            continue
        if os_ < 0 and ot < 0:
            return None
        ex, ey = b[0] - a[0], b[1] - a[1]
        f0 = ex * (sy - a[1]) - ey * (sx - a[0])
        f1 = ex * (ty - a[1]) - ey * (tx - a[0])
        lam = min(max(f0 / (f0 - f1), 0.0), 1.0) if f0 != f1 else 0.0
        if os_ < 0:
            lo = max(lo, lam)
        else:
            hi = min(hi, lam)
        if lo > hi:
            return None
    return (lo, hi)


def check_route_progress(mesh, s: int, t: int, result) -> tuple:
    """Every decision triangle is a mesh triangle at its vertex meeting ``[st]``,
    and the far ends of their intersections strictly advance toward t.

    Returns ``(ok, witness)`` where the witness names the offending decision.
    """
    P = mesh.points
    last = -INF
    for k, d in enumerate(result.decisions):
        if d.triangle is None:
            continue
        ids = [c[0] for c in d.triangle]
        if d.vertex not in ids:
            return False, ("vertex", k, d.vertex, ids)
        if not all(mesh.has_edge(ids[i], ids[j]) for i in range(3) for j in range(i + 1, 3)):
            return False, ("not a triangle", k, ids)
        iv = segment_interval([P[i] for i in ids], P[s], P[t])
        if iv is None:
            return False, ("misses [st]", k, ids)
        if not iv[1] > last:
            return False, ("no progress", k, ids, iv[1], last)
        last = iv[1]
    return True, None


def path_is_walk(graph_has_edge: Callable, path: Iterable) -> Optional[tuple]:
    """First consecutive pair of ``path`` that is not an edge, or None."""
    path = list(path)
    for a, b in zip(path, path[1:]):
        if not graph_has_edge(a, b):
            return (a, b)
    return None
