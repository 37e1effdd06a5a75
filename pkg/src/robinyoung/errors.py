"""Exception types shared across the package."""


class RangeError(ValueError):
    """An argument is outside the documented feasible range of an operation."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class FactorizationError(ValueError):
    """Factorization would be too expensive; never returns a wrong answer instead."""
