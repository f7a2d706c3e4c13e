"""Exception hierarchy shared across the package."""

from __future__ import annotations


class QtmLabError(Exception):
    """Base class for every error this package raises deliberately."""


class MachineSyntaxError(QtmLabError):
    """Source text failed to tokenize or parse.

    Carries the 1-based ``line`` and ``column`` of the offending character
    when known; ``line`` is None for bare amplitude literals parsed outside
    a machine file.
    """

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = ""
        if line is not None and column is not None:
            where = f"line {line}, column {column}: "
        elif line is not None:
            where = f"line {line}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)


class ValidationError(QtmLabError):
    """A machine description or argument violates a documented invariant."""


class NotAMachineCode(ValidationError):
    """An integer is outside the range of the machine numbering."""


class NotWellFormed(ValidationError):
    """An operation requiring a well-formed machine was given a violator."""


class PairingRangeError(ValidationError):
    """unpair applied to an integer outside the pairing's image."""


class StructureError(ValidationError):
    """An engine was handed structurally unusable data (empty state, missing row)."""


class ResourceLimitError(QtmLabError):
    """A configured resource bound was exceeded; the message names the bound."""


class InvariantError(QtmLabError):
    """An internal invariant was breached. Never expected; aborts loudly."""
