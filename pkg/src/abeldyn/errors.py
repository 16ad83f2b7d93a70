"""Exception hierarchy shared by every module."""


class AbeldynError(Exception):
    """Base class for all errors raised by abeldyn."""


class InputError(AbeldynError, ValueError):
    """Malformed or out-of-range input."""


class NotIsogenyError(InputError):
    """An endomorphism with zero degree was used where an isogeny is required."""


class PrecisionError(AbeldynError, ArithmeticError):
    """Root certification did not converge below the precision cap."""


class RecurrenceError(AbeldynError):
    """No linear recurrence stabilised within the available terms."""


class DegenerateError(AbeldynError, ZeroDivisionError):
    """A ratio was requested whose denominator vanishes."""
