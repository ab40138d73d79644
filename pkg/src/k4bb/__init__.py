"""Balanced bipartitions of K4-free graphs: exact oracles, constructive
partitions with certified bounds, niceness diagnostics and exact flag
densities on step graphons."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundViolation,
    GraphParseError,
    K4bbError,
    PreconditionError,
    SizeLimitError,
    TypeMismatchError,
)
from .graph import Bipartition, ColoredGraph, Graph, TriPartition  # noqa: E402

__all__ = [
    "__version__",
    "Bipartition",
    "BoundViolation",
    "ColoredGraph",
    "Graph",
    "GraphParseError",
    "K4bbError",
    "PreconditionError",
    "SizeLimitError",
    "TriPartition",
    "TypeMismatchError",
]
