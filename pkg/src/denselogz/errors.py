"""Exception types shared across the package.

The CLI maps these onto its exit codes (parse 2, resource 3, numeric 4).
"""


class ParseError(ValueError):
    """Malformed instance file. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(RuntimeError):
    """A configured size cap (states, profiles, grid cells, nodes) would be exceeded."""

    def __init__(self, message, required=None, cap=None):
        self.required = required
        self.cap = cap
        super().__init__(message)


class NumericalError(ArithmeticError):
    """An iterative routine failed to reach its certified accuracy."""
