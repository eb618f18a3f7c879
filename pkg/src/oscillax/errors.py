"""Exception types shared across the library."""


class OscillaxError(Exception):
    """Base class for all library-specific errors."""


class MalformedNumber(OscillaxError, ValueError):
    """Text is not an integer, a fraction ``p/q``, or a finite decimal."""


class ZeroDenominator(OscillaxError, ZeroDivisionError):
    """Fraction text with a zero denominator."""


class ShapeMismatch(OscillaxError, ValueError):
    """Matrix or index-set dimensions do not compose."""


class IndexOutOfRange(OscillaxError, IndexError):
    """A 1-based row, column, or factor index falls outside its range."""


class OrderOutOfRange(OscillaxError, ValueError):
    """Compound order p outside [1, n]."""


class FeasibilityExceeded(OscillaxError):
    """An exhaustive scan was requested above the configured dimension cap."""


class NotTN(OscillaxError):
    """Input fails the totally-nonnegative precondition."""


class NotITN(OscillaxError):
    """Input is not an invertible totally nonnegative matrix."""


class NotOscillatory(OscillaxError):
    """Input is not oscillatory (or no admissible power was found)."""


class MethodDisagreement(OscillaxError):
    """Independent classification criteria returned different verdicts."""


class InvariantViolation(OscillaxError):
    """An internal consistency condition failed; indicates a bug."""


class NotNormalizable(OscillaxError):
    """A factor product cannot be reordered into canonical form using only
    the admissible commutation relations."""


class ParamOutOfRange(OscillaxError, ValueError):
    """Generator or formula parameter outside its domain."""


class InvalidPsiPattern(OscillaxError, ValueError):
    """Presence pattern is not an admissible partial-chain choice."""


class ClassMismatch(OscillaxError, ValueError):
    """Family members do not share the required class tags."""


class Unpredictable(OscillaxError):
    """No closed-form exponent statement applies to the given class tags."""


class TrackMismatch(OscillaxError, ValueError):
    """Planar networks with different track counts cannot be concatenated."""
