class K4bbError(Exception):
    """Base class for library errors."""


class PreconditionError(K4bbError, ValueError):
    """An operation's documented precondition does not hold."""


class InvalidPartitionError(PreconditionError):
    pass


class SizeLimitError(K4bbError):
    """Input exceeds the configured cap of an exhaustive routine."""


class GraphParseError(K4bbError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoTriangleError(PreconditionError):
    pass


class TypeMismatchError(PreconditionError):
    """Root image does not induce the flag's type."""


class AssignmentFailure(PreconditionError):
    """A leftover vertex is dense towards all three base classes."""

    def __init__(self, vertex: int, counts: tuple[int, int, int], limit):
        self.vertex = vertex
        self.counts = counts
        self.limit = limit
        super().__init__(
            f"vertex {vertex} has edge counts {counts} to the three classes, "
            f"none below {limit}"
        )


class BoundViolation(K4bbError, AssertionError):
    """A constructive routine produced more class-edges than its guarantee."""
