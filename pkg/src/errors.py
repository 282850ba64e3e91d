"""
Exceptions raised across the toolkit.
"""

from typing import Any, Dict, Optional


class PaleyError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigError(PaleyError, ValueError):
    pass


class FieldError(PaleyError, ValueError):
    """Bad field parameters, or an operation undefined on the given element."""


class CapExceededError(PaleyError, ValueError):
    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} = {value} exceeds the configured cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


class TruncatedError(PaleyError):
    """An enumeration hit its limit where a complete answer was required."""


class VerificationError(PaleyError):
    """
    An exact check failed. `witness` holds the violating data (vertices,
    neighbour sums, ...) so the failure can be reproduced by hand.
    """

    def __init__(self, claim: str, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(f"{claim}: {message}")
        self.claim = claim
        self.message = message
        self.witness = witness or {}


class GraphError(PaleyError, ValueError):
    """Invalid vertex sets or graphs handed to a graph operation."""


class GeometryError(PaleyError, ValueError):
    """Degenerate input to an affine-plane operation (equal points, zero slope)."""
