"""Exception types shared across the workbench."""


class QpiError(Exception):
    """Base class for all workbench errors."""


class PrecisionError(QpiError):
    """Raised when a precision request is below the supported floor."""


class ParameterError(QpiError):
    """Raised when a parameter is outside its documented domain."""


class MissingParameterError(ParameterError):
    """Raised when an evaluation needs a parameter that was not supplied."""


class BalanceError(ParameterError):
    """Raised when a balance precondition on series parameters fails."""


class PoleError(QpiError):
    """Raised when an evaluation would divide by an exact zero.

    The message names the offending factor so the caller can tell which
    parameter combination is at fault.
    """


class NonConvergence(QpiError):
    """Raised when adaptive summation cannot certify a requested tolerance.

    Carries a diagnostics dict: terms_used, last_abs_term, max_abs_term,
    ratio_estimate and a human-readable reason.
    """

    def __init__(self, reason, diagnostics=None):
        super().__init__(reason)
        self.reason = reason
        self.diagnostics = dict(diagnostics or {})


class UnknownIdentityError(QpiError):
    """Raised when an identity id is not present in the catalog."""
