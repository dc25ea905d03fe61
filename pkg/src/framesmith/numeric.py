"""Outward-rounded interval arithmetic on exact rational endpoints.

Endpoints are Fractions, so +, -, * are rounding-free; widening happens only
where irrationals enter: square roots (integer isqrt at 2^-bits) and
cos/sin of rational multiples of pi (Taylor with an explicit remainder and
rational pi bounds from Machin's formula).  The working precision defaults
to 64 fractional bits and is overridden by the FRAMESMITH_PRECISION
environment variable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

DEFAULT_BITS = 64


def precision_bits() -> int:
    raw = os.environ.get("FRAMESMITH_PRECISION", "")
    try:
        bits = int(raw)
    except ValueError:
        bits = DEFAULT_BITS
    if not raw:
        bits = DEFAULT_BITS
    return max(8, min(bits, 4096))


@dataclass(frozen=True)
class FInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "FInterval":
        x = Fraction(x)
        return FInterval(x, x)

    def __add__(self, other: "FInterval") -> "FInterval":
        return FInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "FInterval") -> "FInterval":
        return FInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "FInterval":
        return FInterval(-self.hi, -self.lo)

    def __mul__(self, other: "FInterval") -> "FInterval":
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return FInterval(min(cands), max(cands))

    def scale(self, q) -> "FInterval":
        q = Fraction(q)
        if q >= 0:
            return FInterval(self.lo * q, self.hi * q)
        return FInterval(self.hi * q, self.lo * q)

    def square(self) -> "FInterval":
        if self.lo >= 0:
            return FInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return FInterval(self.hi * self.hi, self.lo * self.lo)
        return FInterval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sup_abs(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def definitely_positive(self) -> bool:
        return self.lo > 0

    def definitely_negative(self) -> bool:
        return self.hi < 0

    def definitely_le(self, other: "FInterval") -> bool:
        return self.hi <= other.lo

    def __float__(self) -> float:
        return float(self.mid())

    def __repr__(self) -> str:
        return f"FInterval({float(self.lo):.17g}, {float(self.hi):.17g})"


FInterval.ZERO = FInterval(Fraction(0), Fraction(0))


def sqrt_enclosure(q, bits: int | None = None) -> FInterval:
    """Rigorous enclosure of sqrt(q) for rational q >= 0, width <= 2^-bits."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return FInterval.ZERO
    bits = precision_bits() if bits is None else bits
    p, d = q.numerator, q.denominator
    # sqrt(p/d) = sqrt(p*d)/d; floor integer sqrt at scale 2^bits
    n = p * d
    s = math.isqrt(n << (2 * bits))
    scale = d << bits
    lo = Fraction(s, scale)
    hi = Fraction(s + 1, scale)
    return FInterval(lo, hi)


@lru_cache(maxsize=8)
def _pi_enclosure(bits: int) -> FInterval:
    """Machin: pi = 16*atan(1/5) - 4*atan(1/239), alternating-series bounds."""
    def atan_inv_bounds(n: int, terms: int) -> tuple[Fraction, Fraction]:
        total = Fraction(0)
        sign = 1
        k = 0
        while k < terms:
            total += Fraction(sign, (2 * k + 1) * n ** (2 * k + 1))
            sign = -sign
            k += 1
        tail = Fraction(1, (2 * terms + 1) * n ** (2 * terms + 1))
        if sign > 0:  # truncated before a positive term: value in [total, total+tail]
            return total, total + tail
        return total - tail, total

    need = bits + 16
    t5 = need // 4 + 4      # 5^(2k+1) ~ 2^(4.6k)
    t239 = need // 15 + 3
    lo5, hi5 = atan_inv_bounds(5, t5)
    lo239, hi239 = atan_inv_bounds(239, t239)
    return FInterval(16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239)


def pi_enclosure(bits: int | None = None) -> FInterval:
    return _pi_enclosure(precision_bits() if bits is None else bits)


def _cos_taylor(x: FInterval, bits: int) -> FInterval:
    # Lagrange remainder: |cos(x) - sum_{k<=K} (-1)^k x^{2k}/(2k)!|
    # <= sup|x|^{2K+2}/(2K+2)!, since all derivatives of cos are bounded by 1.
    xx = x.square()
    m = xx.hi
    total = FInterval.point(1)
    term = FInterval.point(1)
    mag = Fraction(1)  # m^k/(2k)! alongside term index k
    eps = Fraction(1, 1 << (bits + 8))
    k = 0
    while True:
        k += 1
        term = (term * xx).scale(Fraction(-1, (2 * k - 1) * (2 * k)))
        total = total + term
        mag = mag * m / ((2 * k - 1) * (2 * k))
        rem = mag * m / ((2 * k + 1) * (2 * k + 2))
        if rem < eps:
            return FInterval(total.lo - rem, total.hi + rem)


def cos_pi(q, bits: int | None = None) -> FInterval:
    """Enclosure of cos(q*pi) for rational q."""
    q = Fraction(q)
    bits = precision_bits() if bits is None else bits
    # reduce mod 2 into [-1, 1]
    q -= 2 * ((q + 1) // 2)
    half = Fraction(1, 2)
    if q == half or q == -half:
        return FInterval.ZERO
    if q == 0:
        return FInterval.point(1)
    if q == 1 or q == -1:
        return FInterval.point(-1)
    x = pi_enclosure(bits).scale(q)
    return _cos_taylor(x, bits)


def sin_pi(q, bits: int | None = None) -> FInterval:
    """Enclosure of sin(q*pi) = cos((q - 1/2)*pi)."""
    return cos_pi(Fraction(q) - Fraction(1, 2), bits)


@dataclass(frozen=True)
class CInterval:
    """Rectangular complex interval."""

    re: FInterval
    im: FInterval

    @staticmethod
    def point(re, im=0) -> "CInterval":
        return CInterval(FInterval.point(re), FInterval.point(im))

    @staticmethod
    def unit_phase(q, bits: int | None = None) -> "CInterval":
        """Enclosure of e^{i*pi*q} for rational q."""
        return CInterval(cos_pi(q, bits), sin_pi(q, bits))

    def __add__(self, other: "CInterval") -> "CInterval":
        return CInterval(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "CInterval") -> "CInterval":
        return CInterval(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)

    def scale(self, q) -> "CInterval":
        return CInterval(self.re.scale(q), self.im.scale(q))

    def scale_interval(self, f: FInterval) -> "CInterval":
        return CInterval(self.re * f, self.im * f)

    def conj(self) -> "CInterval":
        return CInterval(self.re, -self.im)

    def abs2(self) -> FInterval:
        return self.re.square() + self.im.square()


CINTERVAL_ZERO = CInterval(FInterval.ZERO, FInterval.ZERO)
