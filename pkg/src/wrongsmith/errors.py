"""Exception types shared across the toolkit."""


class WrongsmithError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(WrongsmithError):
    """Raised when an operation receives empty text, an empty sentence or an
    empty corpus where content is required."""


class ParseError(WrongsmithError):
    """Raised on malformed input files; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(WrongsmithError):
    """Raised on invalid configuration values or shape mismatches."""


class ShapeError(WrongsmithError):
    """Raised when predictions and gold labels disagree in shape; carries the
    index of the offending sentence."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"sentence {index}: {message}"
        super().__init__(message)
        self.index = index
