"""Folding into the fundamental domain [-pi, pi) and layered partitions.

The fundamental domain is [-1, 1) in pi units and the translation lattice is
the even integers.  per_multiplicity counts, exactly and piecewise,
how many points of a bounded interval set are congruent to each residue;
layered_partition peels the set into layers K_1..K_p that are each injective
modulo the lattice, assigning congruent representatives to layers in
ascending position order (deterministic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .intervals import IntervalSet
from .rationals import as_fraction

Chunk = Tuple[Fraction, Fraction, int]  # residue cell [lo, hi) carried by shift 2k


def fold_chunks(K: IntervalSet) -> List[Chunk]:
    """Split K at odd integers and map each chunk into [-1, 1) by an even
    translation; returns (residue_lo, residue_hi, k) with chunk = cell + 2k."""
    out: List[Chunk] = []
    for lo, hi in K.pieces:
        cur = lo
        while cur < hi:
            k = int((cur + 1) // 2)  # floor((cur+1)/2) puts cur - 2k in [-1, 1)
            cut = min(hi, Fraction(2 * k + 1))
            out.append((cur - 2 * k, cut - 2 * k, k))
            cur = cut
    out.sort()
    return out


@dataclass(frozen=True)
class FoldedMultiplicity:
    """Piecewise-constant integer multiplicity on [-1, 1); cells with count 0
    are omitted."""

    cells: Tuple[Tuple[Fraction, Fraction, int], ...]

    def max_value(self) -> int:
        return max((c for _, _, c in self.cells), default=0)

    def integral(self) -> Fraction:
        return sum((c * (hi - lo) for lo, hi, c in self.cells), Fraction(0))

    def value_at(self, x) -> int:
        x = as_fraction(x)
        for lo, hi, c in self.cells:
            if lo <= x < hi:
                return c
        return 0

    def level_set(self, i: int) -> IntervalSet:
        """{residues with multiplicity >= i} as an interval set."""
        return IntervalSet(tuple((lo, hi) for lo, hi, c in self.cells if c >= i))

    def bounded_by(self, bound: int) -> bool:
        return self.max_value() <= bound


def per_multiplicity(K: IntervalSet) -> FoldedMultiplicity:
    """Exact periodization multiplicity of chi_K on the fundamental domain."""
    chunks = fold_chunks(K)
    events: list[tuple[Fraction, int]] = []
    for lo, hi, _ in chunks:
        events.append((lo, 1))
        events.append((hi, -1))
    events.sort(key=lambda e: (e[0], -e[1]))
    cells: list[tuple[Fraction, Fraction, int]] = []
    count = 0
    prev: Fraction | None = None
    for x, d in events:
        if prev is not None and count > 0 and x > prev:
            if cells and cells[-1][2] == count and cells[-1][1] == prev:
                cells[-1] = (cells[-1][0], x, count)
            else:
                cells.append((prev, x, count))
        count += d
        prev = x
    return FoldedMultiplicity(tuple(cells))


def layered_partition(K: IntervalSet) -> List[IntervalSet]:
    """Partition K into layers K_1..K_p, pairwise disjoint with union K, each
    injective mod 2pi, K_i congruent to {multiplicity >= i} up to measure 0."""
    chunks = fold_chunks(K)
    if not chunks:
        return []
    boundaries = sorted({x for lo, hi, _ in chunks for x in (lo, hi)})
    layers: list[list[tuple[Fraction, Fraction]]] = []
    for clo, chi in zip(boundaries, boundaries[1:]):
        ks = sorted(k for lo, hi, k in chunks if lo <= clo and chi <= hi)
        for i, k in enumerate(ks):
            while len(layers) <= i:
                layers.append([])
            layers[i].append((clo + 2 * k, chi + 2 * k))
    return [IntervalSet(tuple(pieces)) for pieces in layers]
