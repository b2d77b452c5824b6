"""Exception hierarchy. Every error is a ``FrameError`` so callers can catch broadly."""


class FrameError(ValueError):
    pass


class DimensionMismatch(FrameError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class NonFiniteEntry(FrameError):
    pass


class EmptyFamily(FrameError):
    pass


class NotAFrame(FrameError):
    pass


class NotRieszBasis(FrameError):
    pass


class ZeroExcess(FrameError):
    pass


class ZeroDirection(FrameError):
    pass


class HypothesisFailed(FrameError):
    """A sufficient condition's hypothesis does not hold; ``inequality`` names the one that failed."""

    def __init__(self, message, inequality=None):
        super().__init__(message)
        self.inequality = inequality


class DirectionNotNull(FrameError):
    pass


class ThetaNotNull(FrameError):
    pass


class SingularOperator(FrameError):
    pass


class NotWovenInput(FrameError):
    pass


class SpecInconsistent(FrameError):
    pass


class InvalidAlpha(FrameError):
    pass


class InfeasibleShape(FrameError):
    pass


class EnumerationTooLarge(FrameError):
    def __init__(self, count, cap):
        super().__init__(f"{count} cases exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


class ParseError(FrameError):
    pass
