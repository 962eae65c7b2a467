"""Exception types shared across the package."""


class ProjcongError(Exception):
    """Base class for all package errors."""


class InputError(ProjcongError, ValueError):
    """Malformed or out-of-contract input (CLI exit code 3)."""


class DegenerateInput(InputError):
    """Point set whose affine hull is not full-dimensional."""


class ZeroDirection(InputError):
    pass


class OriginNotInterior(InputError):
    pass


class ExceptionalDirection(InputError):
    """Direction on the exceptional set (facet-parallel or through a vertex)."""


class DegeneratePolygon(InputError):
    pass


class OriginLine(InputError):
    pass


class DirectionOnLine(InputError):
    """Direction orthogonal to a line's direction vector."""


class ZeroSegment(InputError):
    pass


class NotClosed(InputError):
    pass


class ParallelNormals(InputError):
    pass


class IrrationalPolygon(InputError):
    """Edge normals whose lengths are not rational; vertices would be irrational."""


class RetryableFailure(ProjcongError):
    """Failure caused by finite sampling; retrying with more samples may help."""


class SamplingExhausted(RetryableFailure):
    pass


class EmptyIntersection(RetryableFailure):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell

    def __reduce__(self):
        return type(self), (self.args[0], self.cell)


class NoConsistentPatch(RetryableFailure):
    def __init__(self, message, conflict=None):
        super().__init__(message)
        self.conflict = conflict

    def __reduce__(self):
        return type(self), (self.args[0], self.conflict)
