class LDPError(Exception):
    """Base class for every error raised by the package."""


class InvalidInputError(LDPError, ValueError):
    """Raised when a numeric argument is not finite."""


class DomainError(LDPError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class ParseError(LDPError, ValueError):
    """Raised when a model spec, set spec or grid cannot be parsed.

    The position is the 0-based character offset in the parsed text where the
    problem was detected.
    """

    text: str
    position: int
    reason: str

    def __init__(self, text: str, position: int, reason: str) -> None:
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in {text!r}")


class DegenerateDataError(LDPError, ArithmeticError):
    """Raised when the data handed to a fit cannot support it (e.g. a zero probability)."""
