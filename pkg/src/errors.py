from __future__ import annotations


class GgbmError(Exception):
    """Base class for everything the library raises."""


class DomainError(GgbmError, ValueError):
    """A parameter precondition failed; the message names the inequality."""


class PoleError(DomainError):
    pass


class DivergenceError(DomainError):
    pass


class SingularityError(DomainError):
    pass


class ConvergenceError(GgbmError, ArithmeticError):
    """A series or integral representation did not reach its tolerance."""


class QuadratureError(ConvergenceError):
    pass


class EmbeddingError(GgbmError):
    pass


class SingularMatrixError(GgbmError, ValueError):
    pass
