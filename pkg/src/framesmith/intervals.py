"""Canonical finite unions of half-open rational intervals.

An IntervalSet is a sorted tuple of pairwise disjoint pieces [l, r) with
rational endpoints (in pi units).  Adjacent pieces are merged, so equal sets
have identical representations and byte-identical serializations.  All set
algebra is exact; boundary points follow the half-open convention, so
partitions have no double counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Tuple

from .rationals import as_fraction


def _canonicalize(pairs: Iterable[Tuple[Fraction, Fraction]]) -> Tuple[Tuple[Fraction, Fraction], ...]:
    pieces = sorted((lo, hi) for lo, hi in pairs if lo < hi)
    merged: list[list[Fraction]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint half-open intervals [l, r), canonical form."""

    pieces: Tuple[Tuple[Fraction, Fraction], ...] = ()

    @staticmethod
    def of(*pairs) -> "IntervalSet":
        """Build from (lo, hi) pairs given as ints/Fractions/ratio strings."""
        return IntervalSet(_canonicalize(
            (as_fraction(lo), as_fraction(hi)) for lo, hi in pairs))

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _canonicalize(self.pieces))

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __iter__(self) -> Iterator[Tuple[Fraction, Fraction]]:
        return iter(self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.pieces), Fraction(0))

    def hull(self) -> Tuple[Fraction, Fraction]:
        if not self.pieces:
            return (Fraction(0), Fraction(0))
        return (self.pieces[0][0], self.pieces[-1][1])

    def contains(self, x) -> bool:
        x = as_fraction(x)
        for lo, hi in self.pieces:
            if lo <= x < hi:
                return True
            if lo > x:
                break
        return False

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for alo, ahi in self.pieces:
            for blo, bhi in other.pieces:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(tuple(out))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for lo, hi in self.pieces:
            cur = lo
            for blo, bhi in other.pieces:
                if bhi <= cur:
                    continue
                if blo >= hi:
                    break
                if blo > cur:
                    out.append((cur, min(blo, hi)))
                cur = max(cur, bhi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(tuple(out))

    def translate(self, t) -> "IntervalSet":
        t = as_fraction(t)
        return IntervalSet(tuple((lo + t, hi + t) for lo, hi in self.pieces))

    def scale(self, c) -> "IntervalSet":
        """Image {c*x : x in S}.  For c < 0 the half-open boundary flips;
        the result keeps the [l, r) convention (measure-zero discrepancy)."""
        c = as_fraction(c)
        if c == 0:
            raise ValueError("scale factor must be nonzero")
        if c > 0:
            return IntervalSet(tuple((lo * c, hi * c) for lo, hi in self.pieces))
        return IntervalSet(tuple((hi * c, lo * c) for lo, hi in self.pieces))

    def dilate(self, a: int) -> "IntervalSet":
        """Image under multiplication by the integer dilation a."""
        return self.scale(Fraction(a))

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.difference(other).union(other.difference(self))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __repr__(self) -> str:
        body = " ".join(f"[{lo},{hi})" for lo, hi in self.pieces)
        return f"IntervalSet({body})" if body else "IntervalSet(empty)"


def union_all(sets: Sequence[IntervalSet]) -> IntervalSet:
    pieces: list[Tuple[Fraction, Fraction]] = []
    for s in sets:
        pieces.extend(s.pieces)
    return IntervalSet(tuple(pieces))


def overlay_counts(sets: Sequence[IntervalSet]) -> list[Tuple[Fraction, Fraction, int]]:
    """Piecewise-constant multiplicity of a family of interval sets.

    Returns (lo, hi, count) cells with count >= 1, sorted, non-overlapping.
    Exact sweep over the 2n endpoints.
    """
    events: list[Tuple[Fraction, int]] = []
    for s in sets:
        for lo, hi in s.pieces:
            events.append((lo, 1))
            events.append((hi, -1))
    if not events:
        return []
    events.sort(key=lambda e: (e[0], -e[1]))
    out: list[Tuple[Fraction, Fraction, int]] = []
    count = 0
    prev: Fraction | None = None
    for x, delta in events:
        if prev is not None and count > 0 and x > prev:
            if out and out[-1][2] == count and out[-1][1] == prev:
                out[-1] = (out[-1][0], x, count)
            else:
                out.append((prev, x, count))
        count += delta
        prev = x
    return out
