"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented contract (bad config,
    self-loops, out-of-range parameters, ...)."""


class ParseError(ValidationError):
    """Raised when a text input file cannot be parsed.

    Carries the offending line number when one is known.
    """

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number
