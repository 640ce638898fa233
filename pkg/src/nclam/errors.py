"""Exception hierarchy.

The CLI maps :class:`ModelInfeasible` to exit code 3 and :class:`Timeout` to
exit code 4; any other :class:`NclamError` is a configuration error (exit 2).
"""


class NclamError(Exception):
    pass


class ModelInfeasible(NclamError):
    """The requested model or size admits no object."""


class InvalidTree(NclamError, ValueError):
    pass


class InvalidPath(NclamError, ValueError):
    pass


class IndexOutOfRange(NclamError, IndexError):
    pass


class DomainError(NclamError, ValueError):
    pass


class NoCriticalPoint(ModelInfeasible, ValueError):
    pass


class DivergentWeights(ModelInfeasible, ValueError):
    pass


class DivergentNormalizer(ModelInfeasible, ValueError):
    pass


class Infeasible(ModelInfeasible, ValueError):
    pass


class Timeout(NclamError, RuntimeError):
    pass


class DegenerateTree(NclamError, ValueError):
    pass


class IncompatibleDecoration(NclamError, ValueError):
    pass


class IncompatibleLabelling(NclamError, ValueError):
    pass


class NotATree(NclamError, ValueError):
    pass


class CrossingEdges(NclamError, ValueError):
    pass


class TooLarge(NclamError, ValueError):
    pass


class EmptySet(NclamError, ValueError):
    pass


class EmptyBatch(NclamError, ValueError):
    pass


class ResolutionTooFine(NclamError, ValueError):
    pass


class ResolutionMismatch(NclamError, ValueError):
    pass


class CrossingAfterMap(NclamError, AssertionError):
    pass
