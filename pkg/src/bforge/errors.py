"""Shared exception types."""


class PcpSyntaxError(ValueError):
    """Malformed .pcp input; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ShapeError(ValueError):
    """Presentation violates the weighted (nilpotent) shape constraints."""


class ConsistencyError(ValueError):
    """Presentation does not define unique normal forms."""


class CapExceeded(RuntimeError):
    """A configured order / class cap would be exceeded."""


class HomomorphismError(ValueError):
    """Generator images do not extend to the requested homomorphism."""
