"""Exception types raised by wellpress."""


class WellPressError(Exception):
    """Base class for all wellpress errors."""


class RoundingError(WellPressError, ValueError):
    """The physical well parameters do not give an integer well strength."""


class DomainError(WellPressError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ToleranceNotReached(WellPressError, RuntimeError):
    """A root bracket could not be refined to the requested tolerance."""


class NotAllowedError(WellPressError, ValueError):
    """The requested transition would need a negative external pressure."""


class OutOfRangeError(WellPressError, ValueError):
    """The target pressure is beyond the inversion interval."""


class NonMonotoneError(WellPressError, ValueError):
    """The equation of state is not increasing on the inversion interval."""
