"""Rational frequency scalars in units of pi.

Every frequency in this package is a `fractions.Fraction` q denoting the
real number q*pi.  In these units the 2*pi translation lattice is the even
integers and dilation by an integer a is plain multiplication, so all
breakpoints, translates and dilates of the objects built here stay rational.
"""

from __future__ import annotations

import re
from fractions import Fraction

QQ = Fraction

_RATIO_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_ratio(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact Fraction."""
    m = _RATIO_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_ratio(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(x) -> Fraction:
    """Coerce int/Fraction/ratio-string to Fraction (floats are rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_ratio(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")
