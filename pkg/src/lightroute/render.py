"""SVG drawings of the graphs, routes and cone systems, plus the verify report figure.

Only the object API of matplotlib is used (no pyplot state), and the SVG
writer gets a fixed hash salt and no date, so equal inputs give
byte-identical files.
"""

from __future__ import annotations

import io
import math
from typing import Optional, Sequence

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure

from .errors import UnknownVertex
from .spanner import ProtectionMark

LAYERS = ("mesh", "mbdg", "lmbdg", "route", "cones")

MARK_COLOURS = {
    ProtectionMark.EXTREME: "#1b9e77",
    ProtectionMark.PENULTIMATE: "#d95f02",
    ProtectionMark.MIDDLE: "#7570b3",
}
_STYLE = {
    "svg.hashsalt": "lightroute",
    "svg.fonttype": "none",
    "font.size": 8,
}


def _segments(P, edges):
    return [((P[u][0], P[u][1]), (P[v][0], P[v][1])) for u, v in edges]


def _check(g, v):
    if not isinstance(v, int) or not 0 <= v < g.n:
        raise UnknownVertex(v)


def build_figure(g, lg=None, layers: Sequence[str] = (), route: Optional[tuple] = None,
                 route_layer: str = "mbdg", cones_at: Optional[int] = None,
                 size: float = 6.0) -> Figure:
    """Figure with the requested layers drawn over the points.

    ``route`` is ``(s, t)`` and is routed on ``route_layer`` (``dt``,
    ``mbdg`` or ``lmbdg``).  ``cones_at`` is the apex of the cone layer.
    Marks are stubs at each end of an edge, coloured by the mark there;
    dropped light-graph edges are dashed.
    """
    unknown = [x for x in layers if x not in LAYERS]
    if unknown:
        raise ValueError(f"unknown layers {unknown}; pick from {LAYERS}")
    P = g.points
    fig = Figure(figsize=(size, size))
    ax = fig.add_subplot(1, 1, 1)
    ax.set_aspect("equal")
    ax.set_axis_off()

    if "mesh" in layers:
        lc = LineCollection(_segments(P, g.mesh.edges()), colors="#bbbbbb", linewidths=0.5,
                            zorder=1)
        lc.set_gid("mesh")
        ax.add_collection(lc)
    if "mbdg" in layers:
        lc = LineCollection(_segments(P, g.edges()), colors="#222222", linewidths=0.8, zorder=2)
        lc.set_gid("mbdg")
        ax.add_collection(lc)
        stubs, colours = [], []
        for u in range(g.n):
            for v in g.rings[u]:
                mk = g.mark(u, v)
                if mk is None:
                    continue
                a, b = P[u], P[v]
                stubs.append(((a[0], a[1]), (a[0] + 0.25 * (b[0] - a[0]), a[1] + 0.25 * (b[1] - a[1]))))
                colours.append(MARK_COLOURS[mk])
        lc = LineCollection(stubs, colors=colours, linewidths=1.6, zorder=3)
        lc.set_gid("marks")
        ax.add_collection(lc)
    if "lmbdg" in layers:
        if lg is None:
            raise ValueError("the lmbdg layer needs a light graph")
        kept = LineCollection(_segments(P, lg.edges()), colors="#2166ac", linewidths=0.9, zorder=2)
        kept.set_gid("lmbdg")
        ax.add_collection(kept)
        dropped = LineCollection(_segments(P, lg.excluded_edges()), colors="#b2182b",
                                 linewidths=0.8, linestyles="dashed", zorder=2)
        dropped.set_gid("excluded")
        ax.add_collection(dropped)
    if "cones" in layers:
        if cones_at is None:
            raise ValueError("the cones layer needs an apex vertex")
        _check(g, cones_at)
        c = P[cones_at]
        span = max(max(p[0] for p in P) - min(p[0] for p in P),
                   max(p[1] for p in P) - min(p[1] for p in P), 1e-12)
        rays = []
        for k in range(g.cones.kappa):
            a = k * g.cones.cone_angle
            rays.append(((c[0], c[1]), (c[0] + 0.3 * span * math.cos(a), c[1] + 0.3 * span * math.sin(a))))
        lc = LineCollection(rays, colors="#999999", linewidths=0.6, linestyles="dotted", zorder=1)
        lc.set_gid("cones")
        ax.add_collection(lc)
    if "route" in layers or route is not None:
        if route is None:
            raise ValueError("the route layer needs a source and target")
        s, t = route
        _check(g, s)
        _check(g, t)
        path = route_path(g, lg, s, t, route_layer)
        xs = [P[v][0] for v in path]
        ys = [P[v][1] for v in path]
        (line,) = ax.plot(xs, ys, color="#ff7f00", linewidth=2.2, zorder=4)
        line.set_gid("route")
        ax.plot([P[s][0], P[t][0]], [P[s][1], P[t][1]], color="#ff7f00", linewidth=0.6,
                linestyle="dashed", zorder=4)[0].set_gid("chord")

    ax.scatter([p[0] for p in P], [p[1] for p in P], s=6, color="black", zorder=5).set_gid("points")
    ax.autoscale_view()
    ax.margins(0.03)
    return fig


def route_path(g, lg, s: int, t: int, layer: str) -> list:
    from .routing import delaunay_route, lmbdg_route, mbdg_route
    if layer == "dt":
        return delaunay_route(g.mesh, s, t).path
    if layer == "mbdg":
        return mbdg_route(g, s, t).path
    if layer == "lmbdg":
        if lg is None:
            raise ValueError("routing on lmbdg needs a light graph")
        return lmbdg_route(lg, s, t).path
    raise ValueError(f"unknown route layer {layer!r}")


def figure_svg(fig: Figure) -> bytes:
    buf = io.BytesIO()
    with matplotlib.rc_context(_STYLE):
        FigureCanvasSVG(fig)
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def render_svg(g, lg=None, layers: Sequence[str] = (), out=None, **options) -> bytes:
    """SVG bytes for :func:`build_figure`; also written to ``out`` when given."""
    with matplotlib.rc_context(_STYLE):
        fig = build_figure(g, lg, layers, **options)
    data = figure_svg(fig)
    if out is not None:
        with open(out, "wb") as fh:
            fh.write(data)
    return data


def verify_figure(rows: Sequence[dict], out) -> None:
    """Bar chart of measured value over bound for every check with a bound."""
    with matplotlib.rc_context(_STYLE):
        fig = Figure(figsize=(6.0, 0.4 * max(len(rows), 3) + 1.0))
        ax = fig.add_subplot(1, 1, 1)
        names, fracs, colours = [], [], []
        for row in rows:
            bound, value = row.get("bound"), row.get("value")
            if bound in (None, "") or value in (None, "") or not bound:
                continue
            names.append(row["check"])
            fracs.append(float(value) / float(bound))
            colours.append("#4daf4a" if row["passed"] else "#e41a1c")
        ax.barh(range(len(names)), fracs, color=colours)
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names)
        ax.axvline(1.0, color="black", linewidth=0.8, linestyle="dashed")
        ax.set_xlabel("measured / bound")
        ax.invert_yaxis()
        fig.tight_layout()
    data = figure_svg(fig)
    with open(out, "wb") as fh:
        fh.write(data)
