"""Shared exception types."""


class ParseError(ValueError):
    """Malformed input text.  Carries the 1-based line number (0 when the
    failure is not tied to a line, e.g. an unreadable file)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line > 0 else message)
        self.line = line
