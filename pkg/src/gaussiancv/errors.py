"""Exception types shared by the library and mapped to CLI exit codes."""


class InvalidArgument(ValueError):
    """Raised when an argument is outside the domain of an operation."""


class InvalidState(ValueError):
    """Raised when a covariance matrix violates a physicality requirement."""


class NumericError(ArithmeticError):
    """Raised when a numerical routine fails or loses too much precision."""
