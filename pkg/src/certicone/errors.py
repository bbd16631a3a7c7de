"""Exception types shared across the package."""

from __future__ import annotations


class ShapeError(ValueError):
    """Operands or blocks do not conform."""


class IntervalDivisionError(ZeroDivisionError):
    """Raised when dividing by an interval that contains zero."""

    def __init__(self, msg: str = "division by zero-containing interval"):
        super().__init__(msg)


class VerificationError(RuntimeError):
    """A verification step could not certify its claim.

    This is a sound refusal, not a proof of the opposite.
    """


class ParseError(ValueError):
    """Malformed input, anchored to a line (and column when known)."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None,
                 source: str | None = None):
        self.line = line
        self.col = col
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if col is not None:
            where.append(f"col {col}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {msg}" if prefix else msg)
