"""Exception hierarchy shared by the core engines and the command-line surface"""

from typing import Optional


class WidthForgeError(Exception):
    """Base class for every error raised by widthforge"""


class InputError(WidthForgeError, ValueError):
    """Malformed arguments handed to an operation"""


class ParseError(InputError):
    """File-format violation, optionally tied to a 1-based line number"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PreconditionError(InputError):
    """The hypotheses of a construction do not hold; the message names the failing bound"""


class SizeCapError(WidthForgeError):
    """Instance exceeds the configured size cap of an exact oracle"""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(
            f"{what}: size {size} exceeds the configured cap {cap} "
            f"(raise WIDTHFORGE_CAP to override)"
        )


class InvariantViolation(WidthForgeError, AssertionError):
    """An internal certificate failed; indicates a bug, never bad input"""
