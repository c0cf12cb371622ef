"""Point files, point generators and the JSON graph document.

A point file has one ``x y`` pair per line in decimal notation; ``#``
starts a comment.  Coordinates are written with ``repr`` so a float
survives the round trip exactly.

The graph document stores the full pipeline result.  Loading rebuilds the
triangulation from the points (it is deterministic) and takes everything
else, marks and records included, from the document as written.
"""

from __future__ import annotations

import json
import math
import random
from typing import Optional

from .delaunay import TriangulationMesh, build
from .errors import BadCount, ParseError
from .geom import ConeSystem
from .lightness import ExcludedEdgeRecord, LightGraph, kruskal
from .spanner import MarkedGraph, ProtectionMark, SemiProtectedRecord

SCHEMA_VERSION = 1
DISTRIBUTIONS = ("uniform", "clustered", "grid_jitter")


def parse_points(text: str) -> list:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'x y', got {raw.strip()!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: not a number in {raw.strip()!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"line {lineno}: coordinates must be finite")
        pts.append((x, y))
    return pts


def format_points(points, header: Optional[str] = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.extend(f"{float(p[0])!r} {float(p[1])!r}" for p in points)
    return "\n".join(lines) + "\n"


def read_points(path) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_points(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def write_points(path, points, header: Optional[str] = None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_points(points, header))


def generate_points(n: int, distribution: str = "uniform", seed: int = 0) -> list:
    """``n`` distinct points in the unit square, fully determined by the arguments."""
    if not isinstance(n, int) or n < 3:
        raise BadCount(f"need at least 3 points, got {n!r}")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}; pick one of {DISTRIBUTIONS}")
    rng = random.Random(seed)
    if distribution == "uniform":
        def draw(i):
            return rng.random(), rng.random()
    elif distribution == "clustered":
        centres = [(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))
                   for _ in range(max(1, n // 50))]
        spread = 0.05

        def draw(i):
            cx, cy = centres[rng.randrange(len(centres))]
            return cx + rng.gauss(0.0, spread), cy + rng.gauss(0.0, spread)
    else:
        side = math.ceil(math.sqrt(n))
        cell = 1.0 / side

        def draw(i):
            k = i % (side * side)
            gx, gy = k % side, k // side
            return ((gx + 0.5 + rng.uniform(-0.25, 0.25)) * cell,
                    (gy + 0.5 + rng.uniform(-0.25, 0.25)) * cell)
    seen = set()
    out = []
    i = 0
    while len(out) < n:
        p = draw(i)
        i += 1
        # collisions are redrawn
        if p in seen:
            continue
        seen.add(p)
        out.append(p)
    return out


def _mark_code(mark: Optional[ProtectionMark]) -> Optional[str]:
    return None if mark is None else mark.value


def _mark_from(code, where: str) -> Optional[ProtectionMark]:
    if code is None:
        return None
    try:
        return ProtectionMark(code)
    except ValueError:
        raise ParseError(f"{where}: unknown mark {code!r}") from None


def document_from_graph(g: MarkedGraph, lg: Optional[LightGraph] = None,
                        metrics: Optional[dict] = None) -> dict:
    """Plain-data document for a marked graph and, optionally, its light graph."""
    P = g.points
    edges = []
    for u, v in g.edges():
        inc = True if lg is None else lg.has_edge(u, v)
        weight = math.dist(P[u][:2], P[v][:2]) if lg is None else lg.weights[(u, v)]
        edges.append([u, v, _mark_code(g.mark(u, v)), _mark_code(g.mark(v, u)), inc, weight])
    semi = [[v, rec.other, rec.side_bit, _mark_code(g.mark(v, rec.other))]
            for v in range(g.n) for rec in g.semi[v]]
    excluded = []
    if lg is not None:
        for u in range(g.n):
            for v in sorted(lg.excluded[u]):
                rec = lg.excluded[u][v]
                excluded.append([u, v, rec.dir_bit, rec.weight])
    doc = {
        "schema_version": SCHEMA_VERSION,
        "theta": g.theta,
        "r": None if lg is None else lg.r,
        "points": [[i, P[i][0], P[i][1]] for i in range(g.n)],
        "edges": edges,
        "semi_protected": semi,
        "excluded": excluded,
    }
    if metrics is not None:
        doc["metrics"] = metrics
    return doc


def _need(doc: dict, key: str, kind):
    if key not in doc:
        raise ParseError(f"document has no {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise ParseError(f"{key!r} has the wrong type")
    return val


def _vertex(x, n: int, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
        raise ParseError(f"{where}: bad vertex {x!r}")
    return x


def graph_from_document(doc: dict, mesh: Optional[TriangulationMesh] = None) -> tuple:
    """``(marked graph, light graph or None)`` described by ``doc``."""
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}")
    raw_pts = _need(doc, "points", list)
    pts = []
    for k, row in enumerate(raw_pts):
        if not (isinstance(row, list) and len(row) == 3 and row[0] == k):
            raise ParseError(f"points[{k}] must be [{k}, x, y]")
        try:
            pts.append((float(row[1]), float(row[2])))
        except (TypeError, ValueError):
            raise ParseError(f"points[{k}] has a non-numeric coordinate") from None
    n = len(pts)
    theta = doc.get("theta")
    if not isinstance(theta, (int, float)):
        raise ParseError("theta must be a number")
    cones = ConeSystem(float(theta))
    if mesh is None:
        mesh = build(pts)
    marks = [dict() for _ in range(n)]
    adj = [set() for _ in range(n)]
    light_rows = []
    for k, row in enumerate(_need(doc, "edges", list)):
        where = f"edges[{k}]"
        if not (isinstance(row, list) and len(row) == 6):
            raise ParseError(f"{where} must have 6 fields")
        u, v = _vertex(row[0], n, where), _vertex(row[1], n, where)
        if not mesh.has_edge(u, v):
            raise ParseError(f"{where}: {u}-{v} is not a Delaunay edge of the points")
        mu, mv = _mark_from(row[2], where), _mark_from(row[3], where)
        if mu is not None:
            marks[u][v] = mu
        if mv is not None:
            marks[v][u] = mv
        adj[u].add(v)
        adj[v].add(u)
        if not isinstance(row[4], bool) or not isinstance(row[5], (int, float)):
            raise ParseError(f"{where}: included flag must be boolean and weight a number")
        light_rows.append(((min(u, v), max(u, v)), row[4], float(row[5])))
    semi = [[] for _ in range(n)]
    for k, row in enumerate(_need(doc, "semi_protected", list)):
        where = f"semi_protected[{k}]"
        if not (isinstance(row, list) and len(row) in (3, 4)):
            raise ParseError(f"{where} must be [store_at, other, side_bit(, mark)]")
        v, u = _vertex(row[0], n, where), _vertex(row[1], n, where)
        if row[2] not in (0, 1):
            raise ParseError(f"{where}: side_bit must be 0 or 1")
        semi[v].append(SemiProtectedRecord(u, int(row[2])))
        mk = _mark_from(row[3], where) if len(row) == 4 else ProtectionMark.EXTREME
        if mk is not None:
            marks[v][u] = mk
    for v in range(n):
        semi[v].sort()
    rings = [[w for w in mesh.rings[u] if w in adj[u]] for u in range(n)]
    g = MarkedGraph(mesh, cones, marks, rings, semi)

    r = doc.get("r")
    if r is None:
        return g, None
    if not isinstance(r, (int, float)):
        raise ParseError("r must be a number or null")
    included = frozenset(e for e, inc, _ in light_rows if inc)
    weights = {e: w for e, _, w in light_rows}
    excluded = [dict() for _ in range(n)]
    for k, row in enumerate(_need(doc, "excluded", list)):
        where = f"excluded[{k}]"
        if not (isinstance(row, list) and len(row) == 4):
            raise ParseError(f"{where} must be [u, v, dir_bit, weight]")
        u, v = _vertex(row[0], n, where), _vertex(row[1], n, where)
        if row[2] not in (0, 1) or not isinstance(row[3], (int, float)):
            raise ParseError(f"{where}: dir_bit must be 0 or 1 and weight a number")
        excluded[u][v] = ExcludedEdgeRecord(v, int(row[2]), float(row[3]))
    mst = sorted(kruskal(n, g.edges(), g.points))
    lrings = [[w for w in rings[u] if (min(u, w), max(u, w)) in included] for u in range(n)]
    lg = LightGraph(g, float(r), included, weights, excluded, mst, lrings)
    return g, lg


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def loads_document(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a JSON document: {exc}") from None


def save_document(path, doc: dict):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_document(doc))


def load_document(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads_document(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
