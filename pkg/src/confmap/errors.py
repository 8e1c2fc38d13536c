"""Exception hierarchy shared by all modules.

Exit codes follow the CLI convention: 0 success, 2 parse, 3 geometry,
4 solver, 5 tolerance, 6 render.
"""


class ConfmapError(Exception):
    exit_code = 1


class ParseError(ConfmapError):
    exit_code = 2


class GeometryError(ConfmapError):
    exit_code = 3


class NotClosed(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class BadQuadMarking(GeometryError):
    pass


class ZeroPoints(GeometryError):
    pass


class CenterOutside(GeometryError):
    pass


class PurposeMismatch(GeometryError):
    pass


class NotSimplyConnected(GeometryError):
    pass


class WrongConnectivity(GeometryError):
    pass


class NoQuadMarking(GeometryError):
    pass


class SolverError(ConfmapError):
    exit_code = 4


class Underdetermined(SolverError):
    pass


class RankCollapse(SolverError):
    pass


class EvalAtSingularity(SolverError):
    pass


class EvalAtCenter(SolverError):
    pass


class PointOutsideDomain(SolverError):
    pass


class TargetOutsideCanonical(SolverError):
    pass


class NewtonDiverged(SolverError):
    pass


class TooFewSamples(SolverError):
    pass


class BadTol(SolverError):
    pass


class DegreeExhausted(SolverError):
    pass


class NegativeL(SolverError):
    pass


class NonpositiveMu(SolverError):
    pass


class NonpositiveInput(SolverError):
    pass


class ToleranceError(ConfmapError):
    exit_code = 5


class TolUnreachable(ToleranceError):
    pass


class RenderError(ConfmapError):
    exit_code = 6


class WrongTarget(RenderError):
    pass
