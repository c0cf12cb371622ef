"""Bounded-degree, light planar spanners of the Delaunay triangulation and
local routing on them.

Typical use::

    from lightroute import build, build_marked_graph, build_light_graph, lmbdg_route

    mesh = build(points)
    g = build_marked_graph(mesh, theta)
    lg = build_light_graph(g, r)
    res = lmbdg_route(lg, s, t)
"""

from .delaunay import TriangulationMesh, build
from .errors import LightRouteError
from .geom import ConeSystem, circumcircle, in_circle, orient_sign
from .lightness import ExcludedEdgeRecord, LightGraph, build_light_graph, recover_face_path
from .routing import (DT_ROUTING_RATIO, HEADER_CAPACITY, RouteResult, delaunay_route,
                      lmbdg_route, mbdg_route, routing_ratio_bound)
from .spanner import (DELAUNAY_STRETCH, MarkedGraph, ProtectionMark, build_marked_graph,
                      degree_bound, face_stretch_bound, spanner_stretch_bound)

__version__ = "0.1.0"

__all__ = [
    "TriangulationMesh", "build", "LightRouteError", "ConeSystem", "circumcircle", "in_circle",
    "orient_sign", "ExcludedEdgeRecord", "LightGraph", "build_light_graph", "recover_face_path",
    "DT_ROUTING_RATIO", "HEADER_CAPACITY", "RouteResult", "delaunay_route", "lmbdg_route",
    "mbdg_route", "routing_ratio_bound", "DELAUNAY_STRETCH", "MarkedGraph", "ProtectionMark",
    "build_marked_graph", "degree_bound", "face_stretch_bound", "spanner_stretch_bound",
    "__version__",
]
