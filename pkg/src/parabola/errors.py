"""Exception types raised by the library.

Every domain error derives from :class:`ParabolaError` so that the CLI can map
it to exit status 1 without catching programming errors.
"""


class ParabolaError(Exception):
    """Base class for domain errors."""


class NonUnitConstantTerm(ParabolaError, ZeroDivisionError):
    pass


class NegativeConstantTerm(ParabolaError, ValueError):
    pass


class NotInField(ParabolaError, ValueError):
    """A square root does not exist in the quadratic field at hand."""


class FieldMismatch(ParabolaError, ValueError):
    """Two quadratic numbers with different discriminants were combined."""


class HitsVertexInterior(ParabolaError):
    pass


class NotClosingAtSingularity(ParabolaError):
    pass


class NotTransverse(ParabolaError):
    pass


class ZeroIndex(ParabolaError, ValueError):
    pass


class DegreeTooHigh(ParabolaError, ValueError):
    pass


class OutsideSpan(ParabolaError, ValueError):
    pass


class NotAbsolute(ParabolaError, ValueError):
    """A class used as absolute has nonzero boundary weight."""


class ParallelCylinders(ParabolaError):
    pass


class NotHyperbolic(ParabolaError):
    def __init__(self, message="word is not hyperbolic at c=1"):
        super().__init__(message)


class TruncationCapExceeded(ParabolaError):
    pass


class DegenerateSequence(ParabolaError):
    pass
