"""Delaunay triangulation with per-vertex clockwise neighbour rings.

Points are inserted in Hilbert-curve order (Bowyer-Watson cavity
re-triangulation).  The unbounded region is tiled by "ghost" triangles that
share a single vertex at infinity, which keeps hull handling free of special
cases.  All topological decisions use the exact predicates of :mod:`geom`;
co-circular ties are settled by symbolic perturbation on vertex index so the
result is unique for every duplicate-free input.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .errors import AllCollinear, DuplicatePoints, NoIntersectingTriangle, UnknownVertex
from .geom import Point, cone_index, incircle_sos, orient_sign

INF = -1
HULL = -1


def _hilbert_key(xi: int, yi: int, order: int = 16) -> int:
    n = 1 << order
    d = 0
    s = n >> 1
    while s > 0:
        rx = 1 if xi & s else 0
        ry = 1 if yi & s else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                xi = n - 1 - xi
                yi = n - 1 - yi
            xi, yi = yi, xi
        s >>= 1
    return d


def hilbert_order(coords) -> list[int]:
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    scale = ((1 << 16) - 1) / span
    keys = [
        (_hilbert_key(int((x - x0) * scale), int((y - y0) * scale)), i)
        for i, (x, y) in enumerate(zip(xs, ys))
    ]
    keys.sort()
    return [i for _, i in keys]


def _strictly_between(a, b, p) -> bool:
    # p is known to be collinear with a, b
    if a[0] != b[0]:
        return min(a[0], b[0]) < p[0] < max(a[0], b[0])
    return min(a[1], b[1]) < p[1] < max(a[1], b[1])


class _Builder:
    def __init__(self, coords):
        self.C = coords
        self.tv: list[list[int]] = []
        self.tn: list[list[int]] = []
        self.dead: list[bool] = []
        self.free: list[int] = []
        self.last = 0

    def _new(self, a, b, c) -> int:
        if self.free:
            t = self.free.pop()
            self.tv[t] = [a, b, c]
            self.tn[t] = [-2, -2, -2]
            self.dead[t] = False
        else:
            t = len(self.tv)
            self.tv.append([a, b, c])
            self.tn.append([-2, -2, -2])
            self.dead.append(False)
        return t

    def _conflict(self, t: int, p: int) -> bool:
        C = self.C
        a, b, c = self.tv[t]
        if a == INF:
            x, y = b, c
        elif b == INF:
            x, y = c, a
        elif c == INF:
            x, y = a, b
        else:
            return incircle_sos(C[a], C[b], C[c], C[p], a, b, c, p) > 0
        o = orient_sign(C[x], C[y], C[p])
        if o != 0:
            return o > 0
        return _strictly_between(C[x], C[y], C[p])

    def _locate(self, p: int) -> int:
        C = self.C
        P = C[p]
        t = self.last
        if self.dead[t]:
            t = next(i for i, d in enumerate(self.dead) if not d)
        if INF in self.tv[t]:
            t = self.tn[t][self.tv[t].index(INF)]
        steps = 0
        while True:
            v = self.tv[t]
            r = steps % 3
            steps += 1
            for k in range(3):
                i = (k + r) % 3
                e0 = v[(i + 1) % 3]
                e1 = v[(i + 2) % 3]
                if orient_sign(C[e0], C[e1], P) < 0:
                    t = self.tn[t][i]
                    if INF in self.tv[t]:
                        return t
                    break
            else:
                return t

    def start(self, a: int, b: int, c: int):
        if orient_sign(self.C[a], self.C[b], self.C[c]) < 0:
            b, c = c, b
        tris = [self._new(a, b, c), self._new(b, a, INF),
                self._new(c, b, INF), self._new(a, c, INF)]
        edge_owner = {}
        for t in tris:
            v = self.tv[t]
            for i in range(3):
                edge_owner[(v[(i + 1) % 3], v[(i + 2) % 3])] = (t, i)
        for t in tris:
            v = self.tv[t]
            for i in range(3):
                self.tn[t][i] = edge_owner[(v[(i + 2) % 3], v[(i + 1) % 3])][0]
        self.last = tris[0]

    def insert(self, p: int):
        t0 = self._locate(p)
        tv, tn = self.tv, self.tn
        cavity = {t0}
        stack = [t0]
        boundary = []
        verdict = {}
        while stack:
            t = stack.pop()
            for i in range(3):
                nb = tn[t][i]
                if nb in cavity:
                    continue
                hit = verdict.get(nb)
                if hit is None:
                    hit = verdict[nb] = self._conflict(nb, p)
                if hit:
                    cavity.add(nb)
                    stack.append(nb)
                else:
                    v = tv[t]
                    boundary.append((v[(i + 1) % 3], v[(i + 2) % 3], nb))
        for t in cavity:
            self.dead[t] = True
            self.free.append(t)
        by_e0 = {}
        by_e1 = {}
        created = []
        for e0, e1, nb in boundary:
            t = self._new(e0, e1, p)
            tn[t][2] = nb
            nv = tv[nb]
            for j in range(3):
                if nv[j] != e0 and nv[j] != e1:
                    tn[nb][j] = t
                    break
            by_e0[e0] = t
            by_e1[e1] = t
            created.append((t, e0, e1))
        for t, e0, e1 in created:
            tn[t][0] = by_e0[e1]
            tn[t][1] = by_e1[e0]
        self.last = created[0][0]
        for t, e0, e1 in created:
            if e0 != INF and e1 != INF:
                self.last = t
                break


@dataclass
class TriangulationMesh:
    """Delaunay triangulation of ``points``.

    ``triangles`` are ccw vertex triples; ``adjacency[t][i]`` is the triangle
    across the edge opposite vertex ``i`` of ``t`` or ``HULL``.  ``rings[u]``
    lists the neighbours of ``u`` clockwise; for hull vertices it is an open
    sequence running from the previous to the next hull vertex through the
    interior.
    """

    points: list
    triangles: list
    adjacency: list
    rings: list
    hull: list
    vertex_triangles: list = field(repr=False)
    _nbr: list = field(repr=False)
    _hull_set: frozenset = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    def check_vertex(self, u):
        if not isinstance(u, int) or not 0 <= u < len(self.points):
            raise UnknownVertex(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr[u]

    def neighbor_set(self, u: int) -> frozenset:
        return self._nbr[u]

    def edges(self) -> list:
        return sorted((u, v) for u in range(self.n) for v in self._nbr[u] if u < v)

    def is_hull_vertex(self, u: int) -> bool:
        if self._hull_set is None:
            self._hull_set = frozenset(self.hull)
        return u in self._hull_set

    def __eq__(self, other):
        if not isinstance(other, TriangulationMesh):
            return NotImplemented
        return (self.points == other.points and self.triangles == other.triangles
                and self.adjacency == other.adjacency and self.rings == other.rings)

    def neighbors_cw(self, u: int, cone=None) -> list:
        self.check_vertex(u)
        ring = self.rings[u]
        if cone is None:
            return list(ring)
        cones, idx = cone
        P = self.points
        inside = [v for v in ring if cone_index(cones, P[u], P[v]) == idx]
        return sort_cw(P[u], inside, P)

    def rightmost_intersecting_triangle(self, v: int, s, t) -> tuple:
        return rightmost_intersecting_triangle(self, v, s, t)


def sort_cw(apex, ids, P) -> list:
    """Sort neighbour ids clockwise inside an angular range narrower than pi.

    The first element is the most counterclockwise one.  Directions that
    coincide fall back to distance, then id.
    """

    def cmp(a, b):
        o = orient_sign(apex, P[a], P[b])
        if o != 0:
            return 1 if o > 0 else -1
        da = (P[a][0] - apex[0]) ** 2 + (P[a][1] - apex[1]) ** 2
        db = (P[b][0] - apex[0]) ** 2 + (P[b][1] - apex[1]) ** 2
        if da != db:
            return -1 if da < db else 1
        return -1 if a < b else (1 if a > b else 0)

    return sorted(ids, key=functools.cmp_to_key(cmp))


def build(points) -> TriangulationMesh:
    """Delaunay triangulation of ``points`` (a sequence of Point or (x, y) pairs)."""
    pts = [p if isinstance(p, Point) else Point(float(p[0]), float(p[1]), i)
           for i, p in enumerate(points)]
    pts = [Point(float(p.x), float(p.y), i) for i, p in enumerate(pts)]
    n = len(pts)
    if n < 3:
        raise AllCollinear(f"need at least 3 points, got {n}")
    seen = {}
    for p in pts:
        key = (p.x, p.y)
        if key in seen:
            raise DuplicatePoints((seen[key], p.id))
        seen[key] = p.id

    order = hilbert_order(pts)
    a, b = order[0], order[1]
    third = None
    for k in range(2, n):
        if orient_sign(pts[a], pts[b], pts[order[k]]) != 0:
            third = k
            break
    if third is None:
        raise AllCollinear("all points are collinear; no triangulation exists")
    bld = _Builder(pts)
    c = order[third]
    bld.start(a, b, c)
    for k in range(2, n):
        if k != third:
            bld.insert(order[k])

    return _finish(pts, bld)


def _finish(pts, bld: _Builder) -> TriangulationMesh:
    n = len(pts)
    live = [t for t in range(len(bld.tv)) if not bld.dead[t] and INF not in bld.tv[t]]
    live.sort(key=lambda t: tuple(sorted(bld.tv[t])))
    renum = {t: i for i, t in enumerate(live)}
    triangles = []
    adjacency = []
    for t in live:
        v = bld.tv[t]
        # rotate so the smallest id comes first; keeps output canonical
        r = v.index(min(v))
        tri = tuple(v[(r + k) % 3] for k in range(3))
        adj = tuple(renum.get(bld.tn[t][(r + k) % 3], HULL) for k in range(3))
        triangles.append(tri)
        adjacency.append(adj)

    ccw_next = [dict() for _ in range(n)]
    vt = [[] for _ in range(n)]
    for ti, (a, b, c) in enumerate(triangles):
        ccw_next[a][b] = c
        ccw_next[b][c] = a
        ccw_next[c][a] = b
        vt[a].append(ti)
        vt[b].append(ti)
        vt[c].append(ti)

    hull_next = {}
    for t in range(len(bld.tv)):
        if bld.dead[t] or INF not in bld.tv[t]:
            continue
        v = bld.tv[t]
        i = v.index(INF)
        x, y = v[(i + 1) % 3], v[(i + 2) % 3]
        # ghost (x, y, INF): the finite side is to the right of x->y, so the
        # ccw hull runs y -> x
        hull_next[y] = x

    rings = []
    for u in range(n):
        nxt = ccw_next[u]
        if u in hull_next:
            start = hull_next[u]
            seq = [start]
            while seq[-1] in nxt:
                seq.append(nxt[seq[-1]])
        else:
            start = min(nxt)
            seq = [start]
            cur = nxt[start]
            while cur != start:
                seq.append(cur)
                cur = nxt[cur]
        seq.reverse()
        rings.append(seq)

    h0 = min(hull_next, key=lambda i: (pts[i].x, pts[i].y))
    hull = [h0]
    cur = hull_next[h0]
    while cur != h0:
        hull.append(cur)
        cur = hull_next[cur]

    nbr = [frozenset(r) for r in rings]
    return TriangulationMesh(pts, triangles, adjacency, rings, hull, vt, nbr)


def neighbors_cw(mesh: TriangulationMesh, u: int, cone=None) -> list:
    return mesh.neighbors_cw(u, cone)


def segment_triangle_interval(tri_pts, s, t):
    """Parameter interval of ``[st]`` inside the closed ccw triangle, or None."""
    lo, hi = 0.0, 1.0
    for i in range(3):
        e0 = tri_pts[i]
        e1 = tri_pts[(i + 1) % 3]
        o0 = orient_sign(e0, e1, s)
        o1 = orient_sign(e0, e1, t)
        if o0 >= 0 and o1 >= 0:
            continue
        if o0 < 0 and o1 < 0:
            return None
        ex, ey = e1[0] - e0[0], e1[1] - e0[1]
        f0 = ex * (s[1] - e0[1]) - ey * (s[0] - e0[0])
        f1 = ex * (t[1] - e0[1]) - ey * (t[0] - e0[0])
        lam = f0 / (f0 - f1) if f0 != f1 else 0.0
        lam = min(max(lam, 0.0), 1.0)
        if o0 < 0:
            lo = max(lo, lam)
        else:
            hi = min(hi, lam)
        if lo > hi:
            return None
    return (lo, hi)


def rightmost_intersecting_triangle(mesh: TriangulationMesh, v: int, s, t) -> tuple:
    """Triangle at ``v`` whose intersection with ``[st]`` reaches furthest toward t."""
    mesh.check_vertex(v)
    P = mesh.points
    best = None
    best_key = None
    for ti in mesh.vertex_triangles[v]:
        tri = mesh.triangles[ti]
        iv = segment_triangle_interval([P[i] for i in tri], s, t)
        if iv is None:
            continue
        key = (iv[1], iv[0], -ti)
        if best_key is None or key > best_key:
            best, best_key = tri, key
    if best is None:
        raise NoIntersectingTriangle(f"no triangle at {v} meets the segment")
    return best


def edge_count_expected(n: int, h: int) -> tuple:
    """(triangles, edges) predicted by Euler's formula for n points, h on the hull."""
    return 2 * n - h - 2, 3 * n - h - 3
