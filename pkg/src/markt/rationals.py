"""Exact rational parsing and formatting helpers."""

from fractions import Fraction
import re

_RATIONAL = re.compile(r"^\s*(\d+(?:\.\d+)?|\d+\s*/\s*\d+)\s*$")


def parse_rational(text):
    """Parse ``"3"``, ``"0.25"`` or ``"3/8"`` into a :class:`Fraction`.

    Raises ``ValueError`` for anything else, including negative numbers.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL.match(str(text))
    if not m:
        raise ValueError(f"not a nonnegative rational: {text!r}")
    body = m.group(1).replace(" ", "")
    if "/" in body:
        num, den = body.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(body)


def parse_rational_list(text):
    """Comma-separated rationals, e.g. ``"3/8,3/8"``."""
    parts = [p for p in str(text).split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty rational list: {text!r}")
    return tuple(parse_rational(p) for p in parts)


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(value):
    """Coerce ints, Fractions and rational strings; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction or a 'p/q' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return parse_rational(value)
