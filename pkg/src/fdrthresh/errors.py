class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class DataError(ValueError):
    """Malformed or inconsistent input data."""
