"""Message header, route results and the instrumented view source."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional

from ..errors import HeaderOverflow, LocalityViolation

HEADER_CAPACITY = 32


class WalkMode(Enum):
    NONE = "none"
    UNGUIDED = "unguided"
    GUIDED = "guided"
    LIGHT_DETOUR = "light_detour"


# words used by each slot when it is set; coordinates of a vertex cost an
# id plus two reals
_SLOT_WORDS = {
    "s": 3, "t": 3, "prev_triangle": 9, "walk_mode": 1, "walk_target": 1,
    "walk_prev": 1, "walk_orientation": 1, "anchor": 3, "skip": 1,
    "detour_target": 1, "detour_prev": 1, "detour_orientation": 1, "resume_mode": 1,
}


@dataclass
class RoutingHeader:
    """Fixed-slot message header.

    ``prev_triangle`` is the triangle used by the previous decision, each
    corner stored as ``(id, x, y)``.  ``anchor`` is the decision vertex a
    walk started from and ``skip`` the vertex an unguided walk must pass
    before testing its stop rule.  The ``detour_*`` slots carry a face walk
    around a dropped light-graph edge while the outer walk state is parked
    in ``resume_mode``.
    """

    s: tuple
    t: tuple
    prev_triangle: Optional[tuple] = None
    walk_mode: WalkMode = WalkMode.NONE
    walk_target: Optional[int] = None
    walk_prev: Optional[int] = None
    walk_orientation: Optional[int] = None
    anchor: Optional[tuple] = None
    skip: Optional[int] = None
    detour_target: Optional[int] = None
    detour_prev: Optional[int] = None
    detour_orientation: Optional[int] = None
    resume_mode: Optional[WalkMode] = None
    capacity: int = field(default=HEADER_CAPACITY, repr=False)
    peak_words: int = field(default=0, repr=False)

    def word_count(self) -> int:
        total = 0
        for name, words in _SLOT_WORDS.items():
            val = getattr(self, name)
            if name == "walk_mode":
                total += 0 if val is WalkMode.NONE else words
            elif val is not None:
                total += words
        return total

    def check(self) -> int:
        used = self.word_count()
        if used > self.capacity:
            raise HeaderOverflow(f"header needs {used} words, capacity is {self.capacity}")
        if used > self.peak_words:
            self.peak_words = used
        return used

    def clear_walk(self):
        self.walk_mode = WalkMode.NONE
        self.walk_target = None
        self.walk_prev = None
        self.walk_orientation = None
        self.anchor = None
        self.skip = None
        self.check()


class DecisionRecord(NamedTuple):
    vertex: int
    triangle: Optional[tuple]
    choice: int
    direction: Optional[str]


class WalkRecord(NamedTuple):
    kind: str
    start: int
    end: int
    length: float
    straight: float


@dataclass
class RouteResult:
    path: list
    length: float
    decision_vertices: list
    locality_violations: int = 0
    decisions: list = field(default_factory=list)
    walks: list = field(default_factory=list)
    header_peak_words: int = 0

    def ratio(self, straight: float) -> float:
        return self.length / straight if straight > 0 else 1.0


class ViewProvider:
    """Hands out local views and counts every access away from the message.

    The router must announce each hop with :meth:`move`, which only accepts
    neighbours listed in the current view.
    """

    def __init__(self, view_fn: Callable, start: int, strict: bool = False):
        self._view_fn = view_fn
        self._cache = {}
        self.position = start
        self.accesses = 0
        self.violations = 0
        self.strict = strict

    def view(self, v: int):
        self.accesses += 1
        if v != self.position:
            self.violations += 1
            if self.strict:
                raise LocalityViolation(f"view of {v} requested while at {self.position}")
        got = self._cache.get(v)
        if got is None:
            got = self._cache[v] = self._view_fn(v)
        return got

    def move(self, w: int, light: bool = False):
        here = self.view(self.position)
        if not here.has_edge(w, light=light):
            raise LocalityViolation(f"{self.position} has no edge to {w}")
        self.position = w
