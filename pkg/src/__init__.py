"""Weak saturation numbers of uniform hypergraphs and their polymatroid bounds."""

from .errors import (
    CapExceededError,
    HypergraphFormatError,
    LPError,
    PreconditionError,
    WsatError,
)
from .hypergraph import Hypergraph, load_hypergraph

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CapExceededError",
    "Hypergraph",
    "HypergraphFormatError",
    "LPError",
    "PreconditionError",
    "WsatError",
    "load_hypergraph",
]
