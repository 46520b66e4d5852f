"""Exception hierarchy shared by every solver and the CLI."""


class FrameScaleError(Exception):
    """Base class for all errors raised by framescale."""


# linear algebra
class NotPositiveDefinite(FrameScaleError, ValueError):
    pass


class Singular(FrameScaleError, ValueError):
    pass


class NonSymmetric(FrameScaleError, ValueError):
    pass


# frames and weights
class InvalidShape(FrameScaleError, ValueError):
    pass


class ZeroColumn(FrameScaleError, ValueError):
    pass


class NotAFrame(FrameScaleError, ValueError):
    pass


class DimensionMismatch(FrameScaleError, ValueError):
    pass


class InvalidDimension(FrameScaleError, ValueError):
    pass


class WrongDimension(FrameScaleError, ValueError):
    pass


class NegativeWeight(FrameScaleError, ValueError):
    pass


# solvers
class PivotLimitExceeded(FrameScaleError, RuntimeError):
    pass


class UnboundedProblem(FrameScaleError, RuntimeError):
    pass


class ZeroFColumn(FrameScaleError, ValueError):
    """A frame vector maps to the zero vector under F, so 1/||F(phi)|| is undefined."""


class NotScalable(FrameScaleError):
    pass


class Inconclusive(FrameScaleError):
    """An iterative method stopped without a certificate either way.

    ``report`` carries the last iterate so callers can inspect it.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ValidationFailed(FrameScaleError):
    """A solver claimed success but the rescaled frame is not tight."""


class TooLarge(FrameScaleError, ValueError):
    pass
