"""Exact rational scalars and their text format.

The scalar type throughout the library is :class:`fractions.Fraction`,
which keeps values in canonical form (positive denominator, reduced).
This module owns the text grammar: integers, ``p/q`` fractions, and
finite decimals.  Decimals are converted exactly, never through a
binary float.  Floats themselves are rejected everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import MalformedNumber, ZeroDenominator

_INT_RE = re.compile(r"[+-]?\d+\Z")
_RATIO_RE = re.compile(r"([+-]?\d+)\s*/\s*(\d+)\Z")
_DECIMAL_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+)\Z")


def parse_rational(text: str) -> Fraction:
    """Parse an integer, ``p/q``, or finite decimal into an exact Fraction."""
    if not isinstance(text, str):
        raise MalformedNumber(f"expected text, got {type(text).__name__}")
    s = text.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _RATIO_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        return Fraction(num, den)
    if _DECIMAL_RE.match(s):
        # Fraction parses decimal strings exactly (no float intermediate).
        return Fraction(s)
    raise MalformedNumber(f"not an integer, fraction, or finite decimal: {text!r}")


def format_rational(value: Fraction) -> str:
    """Canonical text for a rational: ``p`` when integral, else ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def coerce_rational(value) -> Fraction:
    """Accept int, Fraction, or rational text.  Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedNumber("booleans are not rational scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise MalformedNumber(
            "float input is rejected; pass a finite decimal string instead"
        )
    raise MalformedNumber(f"cannot interpret {value!r} as a rational")
