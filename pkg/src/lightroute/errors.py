"""Exception hierarchy shared by every module of the package."""


class LightRouteError(Exception):
    """Base class for all package errors."""


# geometry kernel
class GeometryError(LightRouteError):
    pass


class CollinearDefiningPoints(GeometryError):
    pass


class DegenerateDirection(GeometryError):
    pass


class NotOnCircle(GeometryError):
    pass


# triangulation
class TriangulationError(LightRouteError):
    pass


class DuplicatePoints(TriangulationError):
    def __init__(self, ids):
        self.ids = tuple(ids)
        super().__init__(f"duplicate coordinates for point ids {self.ids}")


class AllCollinear(TriangulationError):
    pass


class NoIntersectingTriangle(TriangulationError):
    pass


class UnknownVertex(LightRouteError, KeyError):
    def __init__(self, v):
        self.vertex = v
        super().__init__(f"unknown vertex {v!r}")

    def __str__(self):
        return self.args[0]


# construction
class ThetaOutOfRange(LightRouteError, ValueError):
    pass


class BadR(LightRouteError, ValueError):
    pass


class NotATree(LightRouteError):
    pass


class Disconnected(LightRouteError):
    pass


class BrokenRecord(LightRouteError):
    pass


# routing
class RoutingError(LightRouteError):
    pass


class NoSegmentIntersection(RoutingError):
    pass


class WalkDidNotTerminate(RoutingError):
    pass


class TargetUnreachable(RoutingError):
    pass


class NestedDetour(RoutingError):
    pass


class LocalityViolation(RoutingError):
    pass


class HeaderOverflow(RoutingError):
    pass


class ClassificationError(RoutingError):
    pass


# oracle / cli
class TooLarge(LightRouteError, ValueError):
    pass


class ParseError(LightRouteError, ValueError):
    pass


class BadCount(LightRouteError, ValueError):
    pass
