"""Exception types raised across the package."""


class ResilienceError(Exception):
    """Base class for all package errors."""


class GraphParseError(ResilienceError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyGraphError(ResilienceError):
    pass


class InvalidNodeError(ResilienceError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidChangeError(ResilienceError, ValueError):
    """An edge change that is not applicable to the graph (missing edge on
    removal, existing edge on insertion, or a self-loop)."""


class ParameterError(ResilienceError, ValueError):
    pass


class ConsistencyError(ResilienceError):
    """Internal cross-check failed (e.g. core numbers disagree with peeling)."""
