"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: usage problems exit 2 (via
click), ``DataError`` exits 3, ``NumericalError`` exits 4.
"""


class RumorkitError(Exception):
    """Base class for all toolkit errors."""


class DataError(RumorkitError):
    """Malformed, inconsistent, or insufficient input data."""


class ParseError(DataError):
    """A corpus line could not be parsed. Carries the 1-based line number."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class NumericalError(RumorkitError):
    """A numerical routine produced non-finite state or failed to converge
    in a way that cannot be reported as a result."""
