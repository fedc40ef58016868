"""Error taxonomy. Every failure surfaces under one of these class names."""


class WedgeError(Exception):
    """Base class; ``name`` is what the CLI reports."""

    @property
    def name(self):
        return type(self).__name__


class PoleAtLattice(WedgeError):
    pass


class NotOnCubic(WedgeError):
    pass


class NoConvergence(WedgeError):
    pass


class DivisionNearZero(WedgeError):
    pass


class BranchPoint(WedgeError):
    pass


class UniformizationPole(WedgeError):
    pass


class UnitModulusRoot(WedgeError):
    pass


class DegenerateEps(WedgeError):
    pass


class DoubleRoot(WedgeError):
    pass


class ZeroOrbitDerivative(WedgeError):
    pass


class SingularModeMatrix(WedgeError):
    pass


class ShiftSingularity(WedgeError):
    pass


class EvaluationAtPole(WedgeError):
    pass


class IncidentPole(WedgeError):
    pass


class NearPoleDirection(WedgeError):
    pass


class ExtrapolationUnstable(WedgeError):
    pass


ALL_ERRORS = tuple(c for c in list(globals().values())
                   if isinstance(c, type) and issubclass(c, WedgeError) and c is not WedgeError)
