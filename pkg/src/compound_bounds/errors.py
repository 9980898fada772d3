"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class ConsistencyError(ArithmeticError):
    """An internal numerical invariant was violated (indicates a bug or severe roundoff)."""
