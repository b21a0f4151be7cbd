"""Exception types raised by raagscl."""


class PresentationError(ValueError):
    """Bad group presentation: unknown generator, malformed graph or word, mixed graphs."""


class InvariantViolation(RuntimeError):
    """An internal invariant failed. The run must abort rather than continue."""


class NotApplicableError(ValueError):
    """The requested construction does not apply to this element."""


class BallCapError(ValueError):
    """Requested oracle ball radius exceeds the configured cap."""


class OutOfBallError(ValueError):
    """An oracle operand lies outside the finite ball."""


class CertificateParseError(ValueError):
    """Malformed certificate document.

    Attributes:
        location: Dotted key path of the offending field ("" for the document itself)
    """

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        where = f" at '{location}'" if location else ""
        super().__init__(f"{message}{where}")
