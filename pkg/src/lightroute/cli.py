"""Command line entry point: ``lightroute {gen,build,route,verify,render}``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time

from .errors import (BadCount, BadR, LightRouteError, ParseError, ThetaOutOfRange,
                     UnknownVertex)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_PI_EXPR = re.compile(r"^\s*(?:([0-9.]+)\s*\*\s*)?pi\s*(?:/\s*([0-9.]+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from ``0.785``, ``pi/4`` or ``3*pi/8``."""
    m = _PI_EXPR.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def _load(path):
    from .io import graph_from_document, load_document
    return graph_from_document(load_document(path))


def cmd_gen(args) -> int:
    from .io import format_points, generate_points
    pts = generate_points(args.n, args.dist, args.seed)
    text = format_points(pts, f"n={args.n} dist={args.dist} seed={args.seed}")
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_build(args) -> int:
    from . import delaunay
    from .io import document_from_graph, dumps_document, read_points
    from .lightness import build_light_graph
    from .oracle import euclidean_mst
    from .spanner import build_marked_graph
    pts = read_points(args.points)
    if len(pts) < 3:
        raise ParseError(f"{args.points}: need at least 3 points, got {len(pts)}")
    t0 = time.perf_counter()
    mesh = delaunay.build(pts)
    t1 = time.perf_counter()
    g = build_marked_graph(mesh, args.theta)
    t2 = time.perf_counter()
    lg = build_light_graph(g, args.r, check=not args.no_check)
    t3 = time.perf_counter()
    # the Euclidean MST is a subgraph of the triangulation
    _, mst_w = euclidean_mst(mesh)
    metrics = {
        "n": g.n,
        "kappa": g.cones.kappa,
        "delaunay_edges": len(mesh.edges()),
        "mbdg_edges": len(g.edges()),
        "lmbdg_edges": len(lg.included),
        "semi_protected": sum(len(s) for s in g.semi),
        "excluded": len(lg.excluded_edges()),
        "degree_max": g.max_degree(),
        "weight": lg.total_weight(),
        "mst_weight": mst_w,
        "construction_ms": round(1000.0 * (t3 - t0), 3),
        "delaunay_ms": round(1000.0 * (t1 - t0), 3),
        "mbdg_ms": round(1000.0 * (t2 - t1), 3),
        "lmbdg_ms": round(1000.0 * (t3 - t2), 3),
    }
    doc = document_from_graph(g, lg, metrics)
    text = dumps_document(doc)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(json.dumps({"metrics": metrics}, indent=1))
    return EXIT_OK


def cmd_route(args) -> int:
    from .routing import delaunay_route, lmbdg_route, mbdg_route
    g, lg = _load(args.graph)
    for v in (args.source, args.target):
        if not 0 <= v < g.n:
            raise UnknownVertex(v)
    if args.layer == "dt":
        res = delaunay_route(g.mesh, args.source, args.target)
    elif args.layer == "mbdg":
        res = mbdg_route(g, args.source, args.target)
    else:
        if lg is None:
            raise ParseError("document has no light graph (r is null)")
        res = lmbdg_route(lg, args.source, args.target)
    P = g.points
    st = math.dist(P[args.source][:2], P[args.target][:2])
    out = sys.stdout
    out.write("key\tvalue\n")
    out.write(f"layer\t{args.layer}\n")
    out.write(f"path\t{' '.join(map(str, res.path))}\n")
    out.write(f"length\t{res.length!r}\n")
    out.write(f"ratio\t{res.length / st!r}\n")
    out.write(f"locality_violations\t{res.locality_violations}\n")
    out.write(f"header_peak_words\t{res.header_peak_words}\n")
    if args.trace:
        out.write("\nstep\tvertex\ttriangle\tchoice\tdirection\n")
        for k, d in enumerate(res.decisions):
            tri = "" if d.triangle is None else " ".join(str(c[0]) for c in d.triangle)
            out.write(f"{k}\t{d.vertex}\t{tri}\t{d.choice}\t{d.direction or ''}\n")
        if res.walks:
            out.write("\nwalk\tstart\tend\tlength\tstraight\n")
            for w in res.walks:
                out.write(f"{w.kind}\t{w.start}\t{w.end}\t{w.length!r}\t{w.straight!r}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from dataclasses import asdict
    from .verify import CHECKS, run_checks, write_report
    checks = CHECKS if args.checks in (None, "all") else tuple(
        c.strip() for c in args.checks.split(",") if c.strip())
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        print(f"lightroute verify: unknown checks {bad}; pick from {', '.join(CHECKS)}",
              file=sys.stderr)
        return EXIT_USAGE
    g, lg = _load(args.graph)
    results = run_checks(g, lg, checks, trials=args.trials, seed=args.seed)
    passed = all(r.passed for r in results)
    print(json.dumps({"passed": passed, "checks": [asdict(r) for r in results]}, indent=1))
    if args.report_dir:
        csv_path, svg_path = write_report(results, args.report_dir)
        print(f"report: {csv_path} {svg_path}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_render(args) -> int:
    from .render import LAYERS, render_svg
    layers = [] if not args.layers else [x.strip() for x in args.layers.split(",") if x.strip()]
    bad = [x for x in layers if x not in LAYERS]
    if bad:
        print(f"lightroute render: unknown layers {bad}; pick from {', '.join(LAYERS)}",
              file=sys.stderr)
        return EXIT_USAGE
    g, lg = _load(args.graph)
    opts = {}
    if "route" in layers:
        if args.route is None:
            print("lightroute render: the route layer needs --route S T", file=sys.stderr)
            return EXIT_USAGE
        opts["route"] = tuple(args.route)
        opts["route_layer"] = args.route_layer
    if "cones" in layers:
        if args.cones_at is None:
            print("lightroute render: the cones layer needs --cones-at U", file=sys.stderr)
            return EXIT_USAGE
        opts["cones_at"] = args.cones_at
    if "lmbdg" in layers and lg is None:
        raise ParseError("document has no light graph (r is null)")
    render_svg(g, lg, layers, out=args.out, **opts)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lightroute", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("gen", help="write a seeded random point file")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--dist", choices=("uniform", "clustered", "grid_jitter"), default="uniform")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", default="-")
    q.set_defaults(func=cmd_gen)

    q = sub.add_parser("build", help="triangulate, prune and lighten a point file")
    q.add_argument("--points", required=True)
    q.add_argument("--theta", type=parse_angle, default=math.pi / 4,
                   help="cone angle in radians, e.g. 0.7 or pi/4 (default pi/4)")
    q.add_argument("--r", type=float, default=2.0)
    q.add_argument("--out", default="-")
    q.add_argument("--no-check", action="store_true", help="skip replaying every face path")
    q.set_defaults(func=cmd_build)

    q = sub.add_parser("route", help="route one query and print the path")
    q.add_argument("--graph", required=True)
    q.add_argument("--source", type=int, required=True)
    q.add_argument("--target", type=int, required=True)
    q.add_argument("--layer", choices=("dt", "mbdg", "lmbdg"), default="mbdg")
    q.add_argument("--trace", action="store_true", help="also print decisions and walks")
    q.set_defaults(func=cmd_route)

    q = sub.add_parser("verify", help="check the bounds on a built graph")
    q.add_argument("--graph", required=True)
    q.add_argument("--checks", default="all", help="comma-separated subset, or 'all'")
    q.add_argument("--trials", type=int, default=1000, help="routed pairs per layer")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--report-dir", help="write verify.csv and verify.svg here")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("render", help="draw a built graph as SVG")
    q.add_argument("--graph", required=True)
    q.add_argument("--layers", default="", help="comma-separated: mesh,mbdg,lmbdg,route,cones")
    q.add_argument("--route", type=int, nargs=2, metavar=("S", "T"))
    q.add_argument("--route-layer", choices=("dt", "mbdg", "lmbdg"), default="mbdg")
    q.add_argument("--cones-at", type=int, metavar="U")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ThetaOutOfRange, BadR, BadCount, UnknownVertex, ValueError) as exc:
        print(f"lightroute {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LightRouteError as exc:
        print(f"lightroute {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
