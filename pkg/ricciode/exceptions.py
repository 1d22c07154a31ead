""" Package exception types """

__all__ = [
    "RicciodeError",
    "RicciodeValidationError",
    "RicciodeNumericalError",
    "InvalidJetError",
    "DomainError",
    "InvalidParamsError",
    "InvalidToleranceError",
    "InvalidStateError",
    "ConfigValidationError",
    "ZeroArgumentError",
    "SingularTimeError",
    "NotSingularError",
    "InsufficientSamplesError",
    "TailTooShortError",
    "IntegrationBudgetError",
]


class RicciodeError(Exception):
    """Base exception type for this package"""


class RicciodeValidationError(RicciodeError, ValueError):
    """Input rejected before any computation"""

    def __init__(self, msg):
        super(RicciodeValidationError, self).__init__(msg)


class RicciodeNumericalError(RicciodeError, ArithmeticError):
    """A numerical procedure could not deliver its result"""

    def __init__(self, msg):
        super(RicciodeNumericalError, self).__init__(msg)


class InvalidJetError(RicciodeValidationError):
    """Metric coefficients must be strictly positive"""

    def __init__(self, a1, a2):
        txt = f"Metric positivity violated: need A1 > 0 and A2 > 0, got A1={a1}, A2={a2}"
        super(InvalidJetError, self).__init__(txt)


class DomainError(RicciodeValidationError):
    """Coordinate outside the declared domain of a closed form"""

    def __init__(self, form, coord, domain):
        lo, hi = domain
        txt = f"{form}: coordinate {coord} outside domain ({lo}, {hi})"
        super(DomainError, self).__init__(txt)


class InvalidParamsError(RicciodeValidationError):
    def __init__(self, msg):
        super(InvalidParamsError, self).__init__(msg)


class InvalidToleranceError(RicciodeValidationError):
    def __init__(self, tol, lo, hi):
        txt = f"Tolerance {tol} outside the supported range [{lo}, {hi}]"
        super(InvalidToleranceError, self).__init__(txt)


class InvalidStateError(RicciodeValidationError):
    """Initial data already at or beyond a singular threshold"""

    def __init__(self, msg):
        super(InvalidStateError, self).__init__(msg)


class ConfigValidationError(RicciodeValidationError):
    """Run configuration does not match the schema"""

    def __init__(self, msg):
        spacing = " " if msg[-1] in ["?", ".", "\n"] else "; "
        suggest = "Run 'ricciode <command> --help' for the accepted options."
        super(ConfigValidationError, self).__init__(msg + spacing + suggest)


class ZeroArgumentError(RicciodeError, ZeroDivisionError):
    """Evaluation at x = 0 of a polynomial with negative exponents"""

    def __init__(self, msg):
        super(ZeroArgumentError, self).__init__(msg)


class SingularTimeError(RicciodeError, ZeroDivisionError):
    """A2 vanished: the right-hand side is undefined"""

    def __init__(self, msg):
        super(SingularTimeError, self).__init__(msg)


class NotSingularError(RicciodeNumericalError):
    def __init__(self, reason):
        txt = f"Trajectory did not terminate singularly (termination: {reason})"
        super(NotSingularError, self).__init__(txt)


class InsufficientSamplesError(RicciodeNumericalError):
    def __init__(self, msg):
        super(InsufficientSamplesError, self).__init__(msg)


class TailTooShortError(InsufficientSamplesError):
    def __init__(self, msg):
        super(TailTooShortError, self).__init__(msg)


class IntegrationBudgetError(RicciodeNumericalError):
    def __init__(self, max_steps, t):
        txt = f"Step budget of {max_steps} exhausted at t={t}"
        super(IntegrationBudgetError, self).__init__(txt)
