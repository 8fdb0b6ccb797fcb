"""Exception hierarchy shared by all modules."""


class VarformError(Exception):
    """Base class for every error raised by this package."""


class InsufficientPrecisionError(VarformError):
    """A requested coefficient lies outside the known window of a series."""


class NonIntegrableError(VarformError):
    """Antiderivative requested for a series with nonzero z^-1 coefficient."""


class EmptyExactRangeError(VarformError):
    """The loop-space window is too small to give any exact coefficient."""


class WindowError(VarformError):
    """A loop index or exponent falls outside the configured window."""


class OrderTooHighError(VarformError):
    pass


class InconsistencyError(VarformError):
    """Two independent checks that must agree returned different answers."""


class ParseError(VarformError):
    """Syntax error in textual input; ``pos`` is the 0-based offset."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class DivisionByJetError(ParseError):
    pass


class NonIntegerExponentError(ParseError):
    pass


class ZeroDenominatorError(ParseError):
    pass
