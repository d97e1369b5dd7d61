"""Exception hierarchy shared by every module."""


class SloccError(Exception):
    """Base class for all errors raised by slocc224."""


class InvalidInput(SloccError, ValueError):
    """Non-finite entries, empty states or malformed files."""


class ShapeError(SloccError, ValueError):
    """Operands with incompatible dimensions."""


class PreconditionError(SloccError, ValueError):
    """An operation was called outside its domain of definition."""


class SamplingError(SloccError, RuntimeError):
    """Rejection sampling did not produce an admissible draw."""


class InvalidState(SloccError):
    """A local-rank pattern that no genuine 2x2xn pure state can have."""


class AmbiguousClassification(SloccError):
    """The numerical invariants do not match any row of the class table.

    Carries the observed ranks and the decision margins so callers can see
    how close each rank decision was to its threshold.
    """

    def __init__(self, message, ranks=None, margins=None):
        super().__init__(message)
        self.ranks = ranks
        self.margins = margins or {}


class ClassifierDisagreement(SloccError):
    """The rank-table and hyperdeterminant classifiers returned different labels."""

    def __init__(self, message, by_ranks, by_hyperdets):
        super().__init__(message)
        self.by_ranks = by_ranks
        self.by_hyperdets = by_hyperdets
