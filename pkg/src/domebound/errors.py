"""Exception hierarchy shared by the numerical stages."""


class DomeBoundError(Exception):
    """Base class for all errors raised by :mod:`domebound`."""


class PreconditionError(DomeBoundError, ValueError):
    """An input lies outside the domain on which an operation is defined."""


class SolverError(DomeBoundError):
    """A root finder or nonlinear solver failed."""


class BracketError(SolverError):
    """The residual does not change sign on the search interval."""

    def __init__(self, message, a=None, b=None, fa=None, fb=None):
        super().__init__(message)
        self.a, self.b, self.fa, self.fb = a, b, fa, fb


class ConvergenceError(SolverError):
    """An iteration hit its cap before reaching the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CertificateError(DomeBoundError):
    """A certified lower/upper bound was violated."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where
