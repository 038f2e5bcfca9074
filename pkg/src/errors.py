"""Exception hierarchy shared by the library, the CLI and the tool server."""

from typing import Any


class WsatError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(WsatError, ValueError):
    """An argument violates the documented precondition of an operation."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class CapExceededError(WsatError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what: str, estimate: int, cap: int):
        super().__init__(
            f"{what}: estimated size {estimate:,} exceeds cap {cap:,} "
            "(raise it with a flag or WSAT_CAP_OVERRIDE)"
        )
        self.what = what
        self.estimate = estimate
        self.cap = cap


class HypergraphFormatError(WsatError, ValueError):
    """Malformed hypergraph or parameter JSON."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class LPError(WsatError):
    """The linear program could not be solved as requested."""
