"""Exception types raised by the library."""


class InctoricError(Exception):
    """Base class for all library errors."""


class WindowError(InctoricError, ValueError):
    """An index window is too small for the requested operation."""


class ShapeError(InctoricError, ValueError):
    """Two matrix tuples do not have the same row shape."""


class NotGoodError(InctoricError, ValueError):
    """A matrix tuple is not good (row sums differ or a column sum is too large)."""


class SpecError(InctoricError, ValueError):
    """A map specification violates a validation rule."""


class SpecParseError(SpecError):
    """Malformed specification or basis text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class OrderError(InctoricError, ValueError):
    """The monomial order does not have the required property."""


class WidthCapExceeded(InctoricError):
    """The truncation loop reached the width cap without stabilizing."""

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript or []
