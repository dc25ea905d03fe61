"""Exactly-represented piecewise-linear functions and square-root profiles.

A PiecewiseLinear is a finite list of half-open pieces [lo, hi) carrying an
affine map alpha*x + beta with rational coefficients; the function is 0
outside its pieces.  Canonical form (sorted pieces, zero pieces dropped,
touching pieces with the same line merged) makes equality of canonical
objects coincide with pointwise equality away from a finite breakpoint set.

A SqrtProfile represents x -> sqrt(square(x)) * chi_domain(x).  The square
root is never expanded; everything downstream works with the exact square
and with (sign, radicand) fiber values.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import numpy as np

from .intervals import IntervalSet
from .rationals import as_fraction

Piece = Tuple[Fraction, Fraction, Fraction, Fraction]  # lo, hi, alpha, beta


def _canonical_pieces(pieces: Iterable[Piece]) -> Tuple[Piece, ...]:
    kept = [(lo, hi, a, b) for lo, hi, a, b in pieces
            if lo < hi and not (a == 0 and b == 0)]
    kept.sort()
    for i in range(1, len(kept)):
        if kept[i][0] < kept[i - 1][1]:
            raise ValueError(f"overlapping pieces at {kept[i][0]}")
    merged: list[Piece] = []
    for p in kept:
        if merged and merged[-1][1] == p[0] and merged[-1][2:] == p[2:]:
            merged[-1] = (merged[-1][0], p[1], p[2], p[3])
        else:
            merged.append(p)
    return tuple(merged)


@dataclass(frozen=True)
class PiecewiseLinear:
    pieces: Tuple[Piece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _canonical_pieces(self.pieces))
        object.__setattr__(self, "_los", [p[0] for p in self.pieces])

    @staticmethod
    def of(*pieces) -> "PiecewiseLinear":
        """Build from (lo, hi, alpha, beta) tuples of ints/Fractions/strings."""
        return PiecewiseLinear(tuple(
            (as_fraction(lo), as_fraction(hi), as_fraction(a), as_fraction(b))
            for lo, hi, a, b in pieces))

    @staticmethod
    def zero() -> "PiecewiseLinear":
        return PiecewiseLinear()

    @staticmethod
    def indicator(sets: IntervalSet) -> "PiecewiseLinear":
        return PiecewiseLinear(tuple(
            (lo, hi, Fraction(0), Fraction(1)) for lo, hi in sets.pieces))

    @staticmethod
    def constant(c, on: IntervalSet) -> "PiecewiseLinear":
        c = as_fraction(c)
        return PiecewiseLinear(tuple(
            (lo, hi, Fraction(0), c) for lo, hi in on.pieces))

    # -- evaluation -----------------------------------------------------

    def _piece_at(self, x: Fraction) -> Piece | None:
        i = bisect.bisect_right(self._los, x) - 1
        if i >= 0:
            lo, hi, a, b = self.pieces[i]
            if lo <= x < hi:
                return self.pieces[i]
        return None

    def eval(self, x) -> Fraction:
        x = as_fraction(x)
        p = self._piece_at(x)
        if p is None:
            return Fraction(0)
        return p[2] * x + p[3]

    def eval_left(self, x) -> Fraction:
        """One-sided limit from below at x (exact)."""
        x = as_fraction(x)
        i = bisect.bisect_right(self._los, x) - 1
        while i >= 0:
            lo, hi, a, b = self.pieces[i]
            if lo < x <= hi:
                return a * x + b
            if hi < x:
                return Fraction(0)
            i -= 1
        return Fraction(0)

    def eval_right(self, x) -> Fraction:
        """One-sided limit from above at x; equals eval() by half-openness."""
        return self.eval(x)

    def eval_float(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation (for quadrature/CSV only)."""
        out = np.zeros_like(xs, dtype=float)
        for lo, hi, a, b in self.pieces:
            m = (xs >= float(lo)) & (xs < float(hi))
            out[m] = float(a) * xs[m] + float(b)
        return out

    # -- structure ------------------------------------------------------

    def breakpoints(self) -> list[Fraction]:
        pts: list[Fraction] = []
        for lo, hi, _, _ in self.pieces:
            if not pts or pts[-1] != lo:
                pts.append(lo)
            pts.append(hi)
        return sorted(set(pts))

    def support(self) -> IntervalSet:
        """Essential support: the pieces carrying a not-identically-zero line
        (isolated interior zeros are measure zero and stay included)."""
        return IntervalSet(tuple((lo, hi) for lo, hi, _, _ in self.pieces))

    def is_zero(self) -> bool:
        return not self.pieces

    # -- algebra --------------------------------------------------------

    def _combine(self, other: "PiecewiseLinear", f) -> "PiecewiseLinear":
        cuts = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        out: list[Piece] = []
        for lo, hi in zip(cuts, cuts[1:]):
            p = self._piece_at(lo)
            q = other._piece_at(lo)
            a1, b1 = (p[2], p[3]) if p else (Fraction(0), Fraction(0))
            a2, b2 = (q[2], q[3]) if q else (Fraction(0), Fraction(0))
            a, b = f(a1, b1, a2, b2)
            out.append((lo, hi, a, b))
        return PiecewiseLinear(tuple(out))

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self._combine(other, lambda a1, b1, a2, b2: (a1 + a2, b1 + b2))

    def __sub__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self._combine(other, lambda a1, b1, a2, b2: (a1 - a2, b1 - b2))

    def __neg__(self) -> "PiecewiseLinear":
        return self.scale_value(-1)

    def scale_value(self, c) -> "PiecewiseLinear":
        c = as_fraction(c)
        return PiecewiseLinear(tuple(
            (lo, hi, a * c, b * c) for lo, hi, a, b in self.pieces))

    def compose_scale(self, c) -> "PiecewiseLinear":
        """g(x) = f(c*x) for rational c != 0."""
        c = as_fraction(c)
        if c == 0:
            raise ValueError("scale factor must be nonzero")
        out = []
        for lo, hi, a, b in self.pieces:
            if c > 0:
                out.append((lo / c, hi / c, a * c, b))
            else:
                # half-open boundary flips; keep [l, r) (measure-zero shift)
                out.append((hi / c, lo / c, a * c, b))
        return PiecewiseLinear(tuple(out))

    def compose_shift(self, t) -> "PiecewiseLinear":
        """g(x) = f(x + t)."""
        t = as_fraction(t)
        return PiecewiseLinear(tuple(
            (lo - t, hi - t, a, a * t + b) for lo, hi, a, b in self.pieces))

    def restrict(self, where: IntervalSet) -> "PiecewiseLinear":
        out = []
        for lo, hi, a, b in self.pieces:
            for wlo, whi in where.pieces:
                l, h = max(lo, wlo), min(hi, whi)
                if l < h:
                    out.append((l, h, a, b))
        return PiecewiseLinear(tuple(out))

    def max_zero(self) -> "PiecewiseLinear":
        """Pointwise max(f, 0), splitting pieces at interior sign changes."""
        out = []
        for lo, hi, a, b in self.pieces:
            vlo, vhi = a * lo + b, a * hi + b
            if vlo >= 0 and vhi >= 0:
                out.append((lo, hi, a, b))
            elif vlo <= 0 and vhi <= 0:
                continue
            else:
                root = -b / a
                if vlo > 0:
                    out.append((lo, root, a, b))
                else:
                    out.append((root, hi, a, b))
        return PiecewiseLinear(tuple(out))

    def nonneg(self) -> bool:
        """Exact: a piecewise-linear function is >= 0 iff it is >= 0 at every
        piece endpoint (outside pieces it is 0)."""
        return self.first_negative_witness() is None

    def first_negative_witness(self) -> Fraction | None:
        """A point where the function is negative, or None.  Linearity on each
        piece means checking the two endpoint values (limits) suffices."""
        for lo, hi, a, b in self.pieces:
            if a * lo + b < 0:
                return lo
            if a * hi + b < 0:
                # negative on (root, hi) where root is the interior zero
                root = -b / a
                return (root + hi) / 2
        return None

    def max_value(self) -> Fraction:
        """Exact maximum (attained at a piece endpoint or 0 outside)."""
        best = Fraction(0)
        for lo, hi, a, b in self.pieces:
            best = max(best, a * lo + b, a * hi + b)
        return best

    # -- integrals ------------------------------------------------------

    def integral(self) -> Fraction:
        total = Fraction(0)
        for lo, hi, a, b in self.pieces:
            total += a * (hi * hi - lo * lo) / 2 + b * (hi - lo)
        return total

    def zero_neighborhood(self) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
        """(left limit, right limit, clearance, max slope) describing f near 0.

        clearance = distance from 0 to the nearest breakpoint strictly inside
        the adjacent pieces; max slope = max |alpha| of the pieces touching 0.
        Returns None when 0 is outside the support closure on both sides.
        """
        left = self.eval_left(0)
        right = self.eval_right(0)
        clearance = None
        slope = Fraction(0)
        for lo, hi, a, b in self.pieces:
            if lo <= 0 < hi:  # piece carrying the right limit
                d = hi if lo == 0 else min(hi, -lo)
                clearance = d if clearance is None else min(clearance, d)
                slope = max(slope, abs(a))
            if lo < 0 <= hi:  # piece carrying the left limit
                d = -lo if hi == 0 else min(-lo, hi)
                clearance = d if clearance is None else min(clearance, d)
                slope = max(slope, abs(a))
        if clearance is None:
            return None
        return (left, right, clearance, slope)

    def __repr__(self) -> str:
        body = " ".join(f"[{lo},{hi}):{a}x+{b}" for lo, hi, a, b in self.pieces)
        return f"PiecewiseLinear({body})" if body else "PiecewiseLinear(0)"


def integrate_product(factors: Sequence[PiecewiseLinear]) -> Fraction:
    """Exact integral of a product of piecewise-linear functions."""
    if not factors:
        return Fraction(0)
    cuts: set[Fraction] = set()
    for f in factors:
        cuts.update(f.breakpoints())
    cuts_sorted = sorted(cuts)
    total = Fraction(0)
    for lo, hi in zip(cuts_sorted, cuts_sorted[1:]):
        poly = [Fraction(1)]
        dead = False
        for f in factors:
            p = f._piece_at(lo)
            if p is None:
                dead = True
                break
            a, b = p[2], p[3]
            new = [Fraction(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i] += c * b
                new[i + 1] += c * a
            poly = new
        if dead:
            continue
        for i, c in enumerate(poly):
            total += c * (hi ** (i + 1) - lo ** (i + 1)) / (i + 1)
    return total


@dataclass(frozen=True)
class SqrtProfile:
    """Nonnegative Fourier-domain profile sqrt(square) * chi_domain."""

    square: PiecewiseLinear
    domain: IntervalSet

    def __post_init__(self):
        sq = self.square.restrict(self.domain)
        witness = sq.first_negative_witness()
        if witness is not None:
            raise ValueError(f"square negative at {witness}")
        object.__setattr__(self, "square", sq)
        object.__setattr__(self, "domain", sq.support())

    @staticmethod
    def from_square(square: PiecewiseLinear, domain: IntervalSet | None = None) -> "SqrtProfile":
        return SqrtProfile(square, domain if domain is not None else square.support())

    @staticmethod
    def indicator(sets: IntervalSet) -> "SqrtProfile":
        return SqrtProfile(PiecewiseLinear.indicator(sets), sets)

    def abs2(self) -> PiecewiseLinear:
        return self.square

    def support(self) -> IntervalSet:
        return self.domain

    def value_sq(self, x) -> Fraction:
        """|profile(x)|^2, exact."""
        return self.square.eval(x)

    def value_float(self, x: float) -> float:
        v = self.square.eval_float(np.asarray([x], dtype=float))[0]
        return math.sqrt(v) if v > 0 else 0.0

    def eval_float(self, xs: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self.square.eval_float(xs), 0.0))

    def scale_amplitude_sq(self, c) -> "SqrtProfile":
        """Scale |profile|^2 by the rational c >= 0 (profile by sqrt(c))."""
        c = as_fraction(c)
        if c < 0:
            raise ValueError("amplitude-square factor must be >= 0")
        return SqrtProfile(self.square.scale_value(c), self.domain)

    def dilate_fourier(self, a: int) -> "SqrtProfile":
        """Fourier image of the L^2-normalized dilation:
        new profile(x) = |a|^{-1/2} * profile(x/a)."""
        if a == 0:
            raise ValueError("dilation must be nonzero")
        sq = self.square.compose_scale(Fraction(1, a)).scale_value(Fraction(1, abs(a)))
        return SqrtProfile(sq, self.domain.scale(a))

    def sqrt_singularities(self) -> list[Fraction]:
        """Points where the profile behaves like sqrt(|x - x0|) (square has a
        nonconstant piece vanishing at an endpoint): quadrature must grade there."""
        out = []
        for lo, hi, a, b in self.square.pieces:
            if a == 0:
                continue
            if a * lo + b == 0:
                out.append(lo)
            if a * hi + b == 0:
                out.append(hi)
        return out

    def is_indicator(self) -> bool:
        return all(a == 0 and b == 1 for _, _, a, b in self.square.pieces)
