"""Exception types shared across the package."""


class CycCoverError(Exception):
    """Base class for all library errors."""


class PreconditionError(CycCoverError, ValueError):
    """An operation was called outside its domain."""


class AmbientMismatch(PreconditionError):
    """Operands live in different ambient spaces."""


class BudgetExceeded(CycCoverError):
    """The requested computation is larger than the configured budget."""


class LiteralError(CycCoverError, ValueError):
    """A vector, polynomial or generator-set literal could not be parsed."""


class CacheConflict(CycCoverError):
    """Two cache records describe disjoint intervals for the same (q, n)."""
