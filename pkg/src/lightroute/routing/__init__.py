"""Local routing on the triangulation, the marked graph and the light graph."""

from .geometry import (Direction, Frame, WorstCaseCircleClass, WorstCaseKind,
                       classify_worst_case_circle, exactly_one_on_cw_walk, step_decision,
                       step_decision_detail, triangle_meets_segment)
from .header import (HEADER_CAPACITY, DecisionRecord, RouteResult, RoutingHeader,
                     ViewProvider, WalkMode, WalkRecord)
from .routers import DT_ROUTING_RATIO, delaunay_route, routing_ratio_bound, known_terminal, lmbdg_route, mbdg_route, runs_agree
from .walks import Courier, WalkOutcome, guided_face_walk, unguided_face_walk

__all__ = [
    "Direction", "Frame", "WorstCaseCircleClass", "WorstCaseKind", "classify_worst_case_circle",
    "exactly_one_on_cw_walk", "step_decision", "step_decision_detail", "triangle_meets_segment",
    "HEADER_CAPACITY", "DecisionRecord", "RouteResult", "RoutingHeader", "ViewProvider",
    "WalkMode", "WalkRecord", "delaunay_route", "known_terminal", "lmbdg_route", "mbdg_route", "runs_agree",
    "DT_ROUTING_RATIO", "routing_ratio_bound",
    "Courier", "WalkOutcome", "guided_face_walk", "unguided_face_walk",
]
