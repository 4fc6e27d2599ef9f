"""Exception types shared across the package.

The service layer maps these onto HTTP status codes, so everything that
user input can trigger should raise one of them instead of a bare
builtin exception.
"""

from __future__ import annotations


class NvhError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NvhError, ValueError):
    """A value is outside the domain of an operation (HTTP 422)."""


class UnknownEntityError(NvhError, KeyError):
    """A named region, band, harmonic, cell or session does not exist (HTTP 404)."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return self.args[0] if self.args else ""


class LayoutMismatchError(NvhError):
    """Client-supplied view layout parameters disagree with the served layout (HTTP 409)."""


class ParseError(NvhError, ValueError):
    """A data file could not be parsed; message carries file name and line number."""

    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line
