"""Exception hierarchy.

Every error raised on bad input derives from :class:`RevPinskerError`, which is
itself a ``ValueError`` so callers that only care about "bad argument" can catch
that.  Infinite divergences are values, never errors.
"""


class RevPinskerError(ValueError):
    """Base class for all input/validation errors raised by this package."""


# measure
class EmptyAlphabetError(RevPinskerError):
    pass


class DuplicateLabelError(RevPinskerError):
    pass


class NegativeMassError(RevPinskerError):
    pass


class SumOutOfToleranceError(RevPinskerError):
    pass


class AlphabetMismatchError(RevPinskerError):
    pass


class AlphabetTooLargeForExactError(RevPinskerError):
    pass


class FloorTooLargeError(RevPinskerError):
    pass


# divergence
class ZeroQAtomError(RevPinskerError):
    pass


class NegativeOrderError(RevPinskerError):
    pass


class OutOfRangeProbabilityError(RevPinskerError):
    pass


# fdivergence
class UndefinedLimitError(RevPinskerError):
    pass


class NonPositiveEntryError(RevPinskerError):
    pass


class NotConvexError(RevPinskerError):
    pass


class GNotConvexError(NotConvexError):
    pass


class NotStrictlyPositiveError(RevPinskerError):
    pass


# bounds
class TVOutOfRangeError(RevPinskerError):
    pass


class BadBalanceError(RevPinskerError):
    pass


class OrderOutOfRangeError(RevPinskerError):
    pass


class InapplicableError(RevPinskerError):
    """The bound's hypotheses fail for this input (e.g. unbounded relative information)."""


class ZeroQMinError(RevPinskerError):
    pass


class ZeroMinError(RevPinskerError):
    pass


class NotMutuallyACError(RevPinskerError):
    pass


class NonPositiveEtaError(RevPinskerError):
    pass


class BadBetaError(RevPinskerError):
    pass


# oracle
class GridTooCoarseError(RevPinskerError):
    pass


class NoFeasiblePointError(RevPinskerError):
    pass


class InfeasibleDeltaError(RevPinskerError):
    pass


class AlphabetTooLargeError(RevPinskerError):
    pass


class EnumerationBudgetError(RevPinskerError):
    pass


class UnknownInequalityError(RevPinskerError):
    pass


# exponent
class NonPositiveDeltaError(RevPinskerError):
    pass


# partial_sums
class EmptyVectorError(RevPinskerError):
    pass


class ParamOutOfRangeError(RevPinskerError):
    pass


class LengthMismatchError(RevPinskerError):
    pass


class QTooLargeError(RevPinskerError):
    pass
