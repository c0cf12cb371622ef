"""Executable checks of the construction and routing bounds on one graph.

Each check returns a :class:`CheckResult` with the measured value, the
bound it is held to and a witness when it fails.  Checks that do not apply
(no light graph, or theta too large for MST containment) are reported as
skipped and do not count as failures.
"""

from __future__ import annotations

import csv
import math
import os
import random
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .delaunay import edge_count_expected
from .errors import LightRouteError
from .geom import InCircle, angle_at, circumcircle, in_circle
from .lightness import path_length, recover_face_path
from .oracle import (BRUTE_FORCE_LIMIT, BaseGraphDistances, delaunay_bruteforce_check,
                     euclidean_mst, stretch_factor)
from .routing import (HEADER_CAPACITY, Direction, classify_worst_case_circle, delaunay_route,
                      exactly_one_on_cw_walk, lmbdg_route, mbdg_route, routing_ratio_bound)
from .spanner import (ProtectionMark, cone_members, degree_bound, face_stretch_bound,
                      spanner_stretch_bound)

CHECKS = ("delaunay", "degree", "stretch", "weight", "routing", "locality", "mst_containment")
SLACK = 1e-9


@dataclass
class CheckResult:
    check: str
    passed: bool
    value: Optional[float] = None
    bound: Optional[float] = None
    witness: Optional[str] = None
    detail: str = ""
    skipped: bool = False


def _ok(name, value, bound, witness=None, detail=""):
    return CheckResult(name, value <= bound, value, bound,
                       None if value <= bound else witness, detail)


def check_delaunay(g, lg=None, **_):
    mesh = g.mesh
    if mesh.n <= BRUTE_FORCE_LIMIT:
        res = delaunay_bruteforce_check(mesh)
        return CheckResult("delaunay", res.passed, witness=None if res.passed else str(res.witness),
                           detail=f"brute force, {len(res.missing)} missing, {len(res.extra)} extra")
    P = mesh.points
    for tri in mesh.triangles:
        a, b, c = (P[i] for i in tri)
        for d in range(mesh.n):
            if d in tri:
                continue
            if in_circle(a, b, c, P[d]) is InCircle.INSIDE:
                return CheckResult("delaunay", False, witness=f"point {d} inside triangle {tri}",
                                   detail="empty circumcircle")
    h = len(mesh.hull)
    tris, edges = edge_count_expected(mesh.n, h)
    if len(mesh.triangles) != tris or len(mesh.edges()) != edges:
        return CheckResult("delaunay", False,
                           witness=f"{len(mesh.triangles)} triangles, {len(mesh.edges())} edges",
                           detail=f"expected {tris} and {edges}")
    return CheckResult("delaunay", True, detail="empty circumcircles and Euler counts")


def check_degree(g, lg=None, **_):
    bound = degree_bound(g.cones.kappa)
    worst = max(range(g.n), key=lambda v: (g.degree(v), -v))
    return _ok("degree", g.degree(worst), bound, f"vertex {worst}")


def check_stretch(g, lg=None, **_):
    bound = face_stretch_bound(g.theta)
    rep = stretch_factor(g, pairs=g.mesh.edges())
    res = _ok("stretch", rep.max_ratio, bound + SLACK, f"Delaunay edge {rep.witness}",
              "marked graph over Delaunay edges")
    res.bound = bound
    if lg is None or not res.passed:
        return res
    lbound = 1.0 + 1.0 / lg.r
    lrep = stretch_factor(lg, BaseGraphDistances(g))
    if lrep.max_ratio > lbound + SLACK:
        return CheckResult("stretch", False, lrep.max_ratio, lbound, f"pair {lrep.witness}",
                           "light graph over marked graph")
    res.detail += f"; light over marked {lrep.max_ratio:.6f} <= {lbound:.6f}"
    return res


def check_weight(g, lg=None, **_):
    if lg is None:
        return CheckResult("weight", True, detail="no light graph", skipped=True)
    _, mst_w = euclidean_mst(g.points)
    w = lg.total_weight()
    bound = (2.0 * lg.r + 1.0) * spanner_stretch_bound(g.theta) * mst_w
    if g.theta < math.pi / 3:
        bound = min(bound, (2.0 * lg.r + 1.0) * mst_w)
    return _ok("weight", w, bound * (1.0 + SLACK), "total weight", f"MST weight {mst_w:.6f}")


def _pairs(n: int, trials: int, seed: int) -> list:
    total = n * (n - 1)
    if trials >= total:
        return [(s, t) for s in range(n) for t in range(n) if s != t]
    rng = random.Random(seed)
    out = []
    while len(out) < trials:
        s, t = rng.randrange(n), rng.randrange(n)
        if s != t:
            out.append((s, t))
    return out


def _routers(g, lg):
    out = [("dt", lambda s, t: delaunay_route(g.mesh, s, t), routing_ratio_bound("dt")),
           ("mbdg", lambda s, t: mbdg_route(g, s, t), routing_ratio_bound("mbdg", g.theta))]
    if lg is not None:
        out.append(("lmbdg", lambda s, t: lmbdg_route(lg, s, t),
                    routing_ratio_bound("lmbdg", g.theta, lg.r)))
    return out


def check_routing(g, lg=None, trials: int = 1000, seed: int = 0, **_):
    P = g.points
    if lg is not None:
        # routing across a dropped edge relies on its record
        limit = 1.0 + 1.0 / lg.r
        for u in range(g.n):
            for v, rec in sorted(lg.excluded[u].items()):
                uv = math.dist(P[u][:2], P[v][:2])
                try:
                    got = path_length(P, recover_face_path(lg, u, rec))
                except LightRouteError as exc:
                    return CheckResult("routing", False, witness=f"record {u}->{v}",
                                       detail=f"face path broken: {exc}")
                if got > limit * uv + SLACK:
                    return CheckResult("routing", False, got / uv, limit, f"record {u}->{v}",
                                       "face path too long")
    worst, worst_bound, worst_at = 0.0, None, None
    for s, t in _pairs(g.n, trials, seed):
        st = math.dist(P[s][:2], P[t][:2])
        for name, route, bound in _routers(g, lg):
            try:
                res = route(s, t)
            except LightRouteError as exc:
                return CheckResult("routing", False, witness=f"{name} {s}->{t}",
                                   detail=f"{type(exc).__name__}: {exc}")
            ratio = res.length / st
            if ratio > bound + SLACK:
                return CheckResult("routing", False, ratio, bound, f"{name} {s}->{t}",
                                   "routing ratio above bound")
            if worst_bound is None or ratio / bound > worst / worst_bound:
                worst, worst_bound, worst_at = ratio, bound, f"{name} {s}->{t}"
    return CheckResult("routing", True, worst, worst_bound, detail=f"worst relative at {worst_at}")


def check_locality(g, lg=None, trials: int = 1000, seed: int = 0, **_):
    peak = 0
    for s, t in _pairs(g.n, trials, seed):
        for route, graph in ((mbdg_route, g), (lmbdg_route, lg)):
            if graph is None:
                continue
            try:
                res = route(graph, s, t)
            except LightRouteError as exc:
                return CheckResult("locality", False, witness=f"{s}->{t}",
                                   detail=f"{type(exc).__name__}: {exc}")
            if res.locality_violations:
                return CheckResult("locality", False, res.locality_violations, 0, f"{s}->{t}",
                                   "view accessed away from the message")
            peak = max(peak, res.header_peak_words)
    return _ok("locality", peak, HEADER_CAPACITY, detail="peak header words")


def check_mst_containment(g, lg=None, **_):
    if not g.theta < math.pi / 3:
        return CheckResult("mst_containment", True, detail="theta >= pi/3", skipped=True)
    edges, w = euclidean_mst(g.points)
    missing = [e for e in edges if not g.has_edge(*e)]
    if missing:
        return CheckResult("mst_containment", False, witness=f"MST edge {missing[0]}",
                           detail=f"{len(missing)} MST edges missing")
    _, wg = euclidean_mst(g)
    rel = abs(wg - w) / w if w else 0.0
    return _ok("mst_containment", rel, 1e-12, "weights differ", "relative weight difference")


def structural_violations(g, slack: float = SLACK) -> dict:
    """Violations of the cone-structure invariants of a marked graph.

    Keys:

    ``cone_angle``
        consecutive cone neighbours ``a, v, b`` of ``u`` with the angle at
        ``v`` measured on the side of ``u`` below ``pi - theta``;
    ``inner_marks``
        edges marked penultimate or middle at one end but missing;
    ``inner_chain``
        links between consecutive inner cone neighbours that are missing;
    ``unprotected``
        Delaunay edges protected at neither endpoint.

    Each value is a list of witnesses, so an empty dict of lists means pass.
    """
    mesh, P = g.mesh, g.points
    floor = math.pi - g.theta - slack
    out = {"cone_angle": [], "inner_marks": [], "inner_chain": [], "unprotected": []}
    for u in range(g.n):
        for members in cone_members(mesh, g.cones, u):
            for a, v, b in zip(members, members[1:], members[2:]):
                ang = angle_at(P[a], P[v], P[u]) + angle_at(P[u], P[v], P[b])
                if ang < floor:
                    out["cone_angle"].append((u, a, v, b, ang))
            for a, b in zip(members[1:-2], members[2:-1]):
                if not g.has_edge(a, b):
                    out["inner_chain"].append((u, a, b))
        for v, mk in sorted(g.marks[u].items()):
            if mk is not ProtectionMark.EXTREME and not g.has_edge(u, v):
                out["inner_marks"].append((u, v, mk.value))
    for u, v in mesh.edges():
        if not (g.is_protected(u, v) or g.is_protected(v, u)):
            out["unprotected"].append((u, v))
    return out


def decision_violations(mesh, s: int, t: int, result) -> dict:
    """Per-decision checks on a Delaunay routing run.

    ``exactly_one`` lists triangles where the clockwise arc from the current
    vertex to the last crossing does not hold exactly one of the other two
    corners.  ``classification`` lists decisions whose worst-case circle
    could not be classified.  ``kinds`` counts the classes seen.
    """
    P = mesh.points
    out = {"exactly_one": [], "classification": [], "kinds": {}}
    for d in result.decisions:
        if d.triangle is None or d.direction is None:
            continue
        tri = tuple((P[i][0], P[i][1], i) for i in (c[0] for c in d.triangle))
        if not exactly_one_on_cw_walk(tri, d.vertex, P[s], P[t]):
            out["exactly_one"].append((d.vertex, tuple(c[2] for c in tri)))
        circ = circumcircle(*(c[:2] for c in tri))
        try:
            cls = classify_worst_case_circle(circ, P[d.vertex], P[d.choice], P[s], P[t],
                                             Direction(d.direction))
        except LightRouteError as exc:
            out["classification"].append((d.vertex, d.choice, str(exc)))
            continue
        out["kinds"][cls.kind.value] = out["kinds"].get(cls.kind.value, 0) + 1
    return out


_CHECK_FNS = {
    "delaunay": check_delaunay, "degree": check_degree, "stretch": check_stretch,
    "weight": check_weight, "routing": check_routing, "locality": check_locality,
    "mst_containment": check_mst_containment,
}


def run_checks(g, lg=None, checks: Sequence[str] = CHECKS, trials: int = 1000,
               seed: int = 0) -> list:
    unknown = [c for c in checks if c not in _CHECK_FNS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; pick from {CHECKS}")
    return [_CHECK_FNS[c](g, lg, trials=trials, seed=seed) for c in checks]


def write_report(results: Sequence[CheckResult], directory) -> tuple:
    """``verify.csv`` and ``verify.svg`` in ``directory``; returns both paths."""
    from .render import verify_figure
    os.makedirs(directory, exist_ok=True)
    rows = [asdict(r) for r in results]
    csv_path = os.path.join(directory, "verify.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["check"])
        w.writeheader()
        w.writerows(rows)
    svg_path = os.path.join(directory, "verify.svg")
    verify_figure(rows, svg_path)
    return csv_path, svg_path
