"""Local trace calculus for shift-invariant spaces with bounded Fourier support.

Fibers T_per(phi)(xi) = (phi_hat(xi + 2k))_k are finitely supported because
profiles have bounded support; their entries are exact square roots
(k -> radicand).  Restricted and operator traces are computed from any
claimed NTF generator by the quadratic-form formulas; values are exact
SqrtSums, compared through outward-rounded intervals.

The dilated space D_a V is handled through its genuine generator set: the
|a| fractionally-translated dilates of each generator, whose Fourier
transforms carry unit phases e^{-i d xi / a}.  Those traces are enclosed with
rational-argument cos/sin intervals, keeping the coset-sum identity check
independent of the identity itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence as Seq, Tuple

from .intervals import IntervalSet, union_all
from .numeric import CInterval, FInterval, precision_bits
from .piecewise import PiecewiseLinear, SqrtProfile
from .rationals import as_fraction
from .roots import CSqrtSum, SqrtSum
from .sequences import CRat, Sequence, coset_op_adj

Fiber = Dict[int, Fraction]  # k -> radicand of the (nonnegative) entry


@dataclass(frozen=True)
class GeneratorSet:
    """Profiles interpreted as Fourier transforms of the generators of a
    shift-invariant space; assumed (not verified) to form an NTF generator."""

    profiles: Tuple[SqrtProfile, ...]
    dilation: int = 2

    def support_hull(self) -> Tuple[Fraction, Fraction]:
        sets = [p.support() for p in self.profiles]
        merged = union_all(sets) if sets else IntervalSet.empty()
        return merged.hull()

    def breakpoints(self) -> List[Fraction]:
        pts: set[Fraction] = set()
        for p in self.profiles:
            pts.update(p.square.breakpoints())
        return sorted(pts)


def fiber(profile: SqrtProfile, xi) -> Fiber:
    """Exact fiber of one profile: entry k has value sqrt(radicand)."""
    xi = as_fraction(xi)
    out: Fiber = {}
    for lo, hi, _, _ in profile.square.pieces:
        # xi + 2k in [lo, hi)  <=>  k in [(lo-xi)/2, (hi-xi)/2)
        k = -((xi - lo) // 2)  # ceil((lo-xi)/2)
        while lo <= xi + 2 * k < hi:
            r = profile.value_sq(xi + 2 * k)
            if r:
                out[int(k)] = r
            k += 1
    return out


def fiber_inner(f: Sequence, fib: Fiber) -> CSqrtSum:
    """<f | fiber> = sum_k f(k) * sqrt(r_k), split into exact re/im parts."""
    re = SqrtSum.zero()
    im = SqrtSum.zero()
    for k, v in f.entries.items():
        r = fib.get(k)
        if r is None:
            continue
        root = SqrtSum.sqrt_of(r)
        re = re + root.scale(v.re)
        im = im + root.scale(v.im)
    return CSqrtSum(re, im)


def restricted_trace(gen: GeneratorSet, f: Sequence, xi) -> SqrtSum:
    """tau_{V,f}(xi) = sum_phi |<f | T_per phi(xi)>|^2, exact."""
    total = SqrtSum.zero()
    for p in gen.profiles:
        total = total + fiber_inner(f, fiber(p, xi)).abs2()
    return total


def spectral_function(gen: GeneratorSet, xi) -> Fraction:
    """tau at delta_0: sum_phi |phi_hat(xi)|^2 (always rational)."""
    return sum((p.value_sq(xi) for p in gen.profiles), Fraction(0))


def dimension_function(gen: GeneratorSet, xi) -> Fraction:
    """Trace of the fiber Gramian: sum_phi ||T_per phi(xi)||^2."""
    total = Fraction(0)
    for p in gen.profiles:
        total += sum(fiber(p, xi).values(), Fraction(0))
    return total


# -- finite positive operators ---------------------------------------------


@dataclass(frozen=True)
class WindowOperator:
    """Real rational matrix acting on coordinates offset..offset+n-1,
    zero- or identity-padded outside the window."""

    offset: int
    rows: Tuple[Tuple[Fraction, ...], ...]
    pad: str = "zero"  # or "identity"

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("operator window must be square")
        if self.pad not in ("zero", "identity"):
            raise ValueError(f"unknown padding {self.pad!r}")

    @staticmethod
    def identity(offset: int, size: int) -> "WindowOperator":
        rows = tuple(tuple(Fraction(1 if i == j else 0) for j in range(size))
                     for i in range(size))
        return WindowOperator(offset, rows, pad="identity")

    @staticmethod
    def of(offset: int, rows, pad: str = "zero") -> "WindowOperator":
        return WindowOperator(offset, tuple(
            tuple(Fraction(x) for x in row) for row in rows), pad)

    def psd_witness(self) -> Tuple[Fraction, ...] | None:
        """None when the window block is symmetric PSD.  Otherwise a rational
        vector x with x^T T x < 0 (for a non-symmetric block, the offending
        e_i + e_j pair is returned as the rejection marker)."""
        n = len(self.rows)
        for i in range(n):
            for j in range(i + 1, n):
                if self.rows[i][j] != self.rows[j][i]:
                    x = [Fraction(0)] * n
                    x[i] = Fraction(1)
                    x[j] = Fraction(1)
                    return tuple(x)
        # symmetric congruence elimination; each step keeps the Schur
        # complement symmetric, and the current row of `trans` maps a failing
        # diagonal back to an original-coordinates witness
        m = [list(r) for r in self.rows]
        trans = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for i in range(n):
            d = m[i][i]
            if d < 0:
                return tuple(trans[i])
            if d == 0:
                for j in range(i + 1, n):
                    if m[i][j] != 0:
                        # 2x2 block [[0, b], [b, c]] is indefinite
                        b, c = m[i][j], m[j][j]
                        t = -(c + 1) / (2 * b)
                        return tuple(t * a + bb for a, bb in zip(trans[i], trans[j]))
                continue
            for j in range(i + 1, n):
                factor = m[j][i] / d
                if factor == 0:
                    continue
                for k in range(i + 1, n):
                    m[j][k] -= factor * m[i][k]
                m[j][i] = Fraction(0)
                trans[j] = [a - factor * b for a, b in zip(trans[j], trans[i])]
            for j in range(i + 1, n):
                m[i][j] = Fraction(0)
        return None


def operator_trace(gen: GeneratorSet, op: WindowOperator, xi) -> SqrtSum:
    """tau_{V,T}(xi) = sum_phi <T w | w> with w = T_per phi(xi)."""
    witness = op.psd_witness()
    if witness is not None:
        raise ValueError(f"operator not positive semidefinite; witness {witness}")
    n = len(op.rows)
    total = SqrtSum.zero()
    for p in gen.profiles:
        fib = fiber(p, xi)
        roots = {k: SqrtSum.sqrt_of(r) for k, r in fib.items()}
        for i in range(n):
            ki = op.offset + i
            if ki not in roots:
                continue
            for j in range(n):
                kj = op.offset + j
                if kj not in roots:
                    continue
                c = op.rows[i][j]
                if c:
                    total = total + (roots[ki] * roots[kj]).scale(c)
        if op.pad == "identity":
            for k, r in fib.items():
                if not op.offset <= k < op.offset + n:
                    total = total + SqrtSum.rational(r)
    return total


# -- dilated space ----------------------------------------------------------


def dilated_trace(gen: GeneratorSet, f: Sequence, xi,
                  bits: int | None = None) -> FInterval:
    """tau_{D_a V, f}(xi) from the genuine NTF generator of the dilated
    space: the |a| fractional translates of each dilated generator, with
    Fourier phases e^{-i d (.)/a}.  Certified enclosure."""
    xi = as_fraction(xi)
    a = gen.dilation
    bits = precision_bits() if bits is None else bits
    inv_a = Fraction(1, abs(a))
    total = FInterval.ZERO
    for p in gen.profiles:
        dom = p.support().scale(a)  # xi + 2k must land in a*domain
        ks: List[int] = []
        for lo, hi, in dom.pieces:
            k = -((xi - lo) // 2)
            while lo <= xi + 2 * k < hi:
                ks.append(int(k))
                k += 1
        for d in range(abs(a)):
            acc = CInterval.point(0)
            for k in ks:
                arg = (xi + 2 * k) / a
                r = p.value_sq(arg)
                if not r:
                    continue
                v = f.entries.get(k)
                if v is None:
                    continue
                mag = SqrtSum.sqrt_of(r * inv_a).enclosure(bits)
                phase = CInterval.unit_phase(Fraction(d) * arg, bits)
                term = phase.scale_interval(mag)
                acc = acc + CInterval(
                    term.re.scale(v.re) - term.im.scale(v.im),
                    term.re.scale(v.im) + term.im.scale(v.re))
            total = total + acc.abs2()
    return total


def dilation_coset_sum(gen: GeneratorSet, f: Sequence, xi) -> SqrtSum:
    """Right side of the dilation formula:
    sum_d tau_{V, D_d* f}((xi + 2d)/a), exact."""
    xi = as_fraction(xi)
    a = gen.dilation
    total = SqrtSum.zero()
    for d in range(abs(a)):
        fd = coset_op_adj(a, d, f)
        if fd.is_zero():
            continue
        total = total + restricted_trace(gen, fd, (xi + 2 * d) / Fraction(a))
    return total


@dataclass(frozen=True)
class GridRow:
    xi: Fraction
    discrepancy: Fraction  # certified upper bound on |lhs - rhs|


def dilation_trace_check(gen: GeneratorSet, f: Sequence, grid: Iterable,
                         bits: int | None = None) -> List[GridRow]:
    """Certified |tau_{D_aV,f}(xi) - sum_d tau_{V,D_d*f}((xi+2d)/a)| per point."""
    bits = precision_bits() if bits is None else bits
    rows = []
    for xi in grid:
        xi = as_fraction(xi)
        lhs = dilated_trace(gen, f, xi, bits)
        rhs = dilation_coset_sum(gen, f, xi).enclosure(bits)
        rows.append(GridRow(xi, (lhs - rhs).sup_abs()))
    return rows


# -- cross-generator consistency (NTF generator test) -----------------------


ALPHAS: Tuple[CRat, ...] = (CRat.of(0), CRat.of(1), CRat.of(0, 1))


@dataclass(frozen=True)
class GeneratorTestRow:
    xi: Fraction
    l: int
    alpha: CRat
    verdict: str           # pass | fail | uncertain
    residual: float


def ntf_generator_test(gen: GeneratorSet, reference: GeneratorSet,
                       grid: Iterable, l_window: int | None = None,
                       bits: int | None = None) -> List[GeneratorTestRow]:
    """Check sum_phi |phi_hat(xi) + conj(alpha) phi_hat(xi+2l)|^2 against the
    restricted trace at delta_0 + alpha*delta_l computed from the reference
    generator set of the same space, for alpha in {0, 1, i} and 0 < |l| <= L."""
    bits = precision_bits() if bits is None else bits
    if l_window is None:
        lo1, hi1 = gen.support_hull()
        lo2, hi2 = reference.support_hull()
        radius = max(abs(x) for x in (lo1, hi1, lo2, hi2)) or Fraction(1)
        l_window = int(radius) + 1
    rows: List[GeneratorTestRow] = []
    for xi in grid:
        xi = as_fraction(xi)
        fibers = [fiber(p, xi) for p in gen.profiles]
        ref_fibers = [fiber(p, xi) for p in reference.profiles]
        for l in range(-l_window, l_window + 1):
            if l == 0:
                continue
            for alpha in ALPHAS:
                lhs = SqrtSum.zero()
                for fib in fibers:
                    v0 = SqrtSum.sqrt_of(fib.get(0, Fraction(0)))
                    vl = SqrtSum.sqrt_of(fib.get(l, Fraction(0)))
                    val = CSqrtSum(v0 + vl.scale(alpha.re), vl.scale(-alpha.im))
                    lhs = lhs + val.abs2()
                f = Sequence.delta(0) + Sequence.delta(l, alpha)
                rhs = SqrtSum.zero()
                for fib in ref_fibers:
                    rhs = rhs + fiber_inner(f, fib).abs2()
                diff = lhs - rhs
                verdict = diff.sign_verdict(bits)
                status = "pass" if verdict == "zero" else (
                    "uncertain" if verdict == "uncertain" else "fail")
                rows.append(GeneratorTestRow(
                    xi, l, alpha, status, abs(float(diff.enclosure(bits).mid()))))
    return rows


# -- scaling/wavelet series identity ----------------------------------------


@dataclass(frozen=True)
class SeriesRow:
    xi: Fraction
    s: int
    residual: SqrtSum

    def verdict(self, bits: int | None = None) -> str:
        v = self.residual.sign_verdict(bits)
        return "pass" if v == "zero" else ("uncertain" if v == "uncertain" else "fail")


def pair_sum(profiles: Seq[SqrtProfile], x, y) -> SqrtSum:
    """sum_p p_hat(x) * p_hat(y), exact."""
    total = SqrtSum.zero()
    for p in profiles:
        rx = p.value_sq(x)
        if not rx:
            continue
        ry = p.value_sq(y)
        if not ry:
            continue
        total = total + SqrtSum.sqrt_of(rx) * SqrtSum.sqrt_of(ry)
    return total


def series_identity_check(phi_gen: GeneratorSet, psi_gen: GeneratorSet,
                          s: int, grid: Iterable,
                          j_max: int | None = None) -> List[SeriesRow]:
    """Residual of
    sum_{j>=1} sum_psi psi_hat(a^j xi) conj(psi_hat(a^j (xi+2s)))
      = sum_phi phi_hat(xi) conj(phi_hat(xi+2s)),
    exact: bounded supports make the j-sum finite."""
    a = psi_gen.dilation
    lo, hi = psi_gen.support_hull()
    radius = max(abs(lo), abs(hi))
    rows: List[SeriesRow] = []
    for xi in grid:
        xi = as_fraction(xi)
        left = SqrtSum.zero()
        j = 1
        while True:
            scale = Fraction(a) ** j
            x, y = scale * xi, scale * (xi + 2 * s)
            inside = (xi != 0 and abs(x) <= radius) or \
                     (xi + 2 * s != 0 and abs(y) <= radius)
            if not inside:
                break
            left = left + pair_sum(psi_gen.profiles, x, y)
            if j_max is not None and j >= j_max:
                break
            j += 1
        right = pair_sum(phi_gen.profiles, xi, xi + 2 * s)
        rows.append(SeriesRow(xi, s, left - right))
    return rows


# -- additivity / monotonicity ----------------------------------------------


@dataclass(frozen=True)
class SplitRow:
    xi: Fraction
    additivity_gap: Fraction   # certified bound on |tau_{V1} - tau_{V0} - tau_{W0}|
    monotone_margin: Fraction  # certified lower bound on tau_{V1} - tau_{V0}


def trace_split_check(phi_gen: GeneratorSet, psi_gen: GeneratorSet,
                      f: Sequence, grid: Iterable,
                      bits: int | None = None) -> List[SplitRow]:
    """tau_{V_1,f} = tau_{V_0,f} + tau_{W_0,f} and tau_{V_0,f} <= tau_{V_1,f},
    with the left side computed from the dilated scaling generator set."""
    bits = precision_bits() if bits is None else bits
    rows = []
    for xi in grid:
        xi = as_fraction(xi)
        v1 = dilated_trace(phi_gen, f, xi, bits)
        v0 = restricted_trace(phi_gen, f, xi).enclosure(bits)
        w0 = restricted_trace(psi_gen, f, xi).enclosure(bits)
        gap = (v1 - v0 - w0).sup_abs()
        margin = (v1 - v0).lo
        rows.append(SplitRow(xi, gap, margin))
    return rows


# -- verification grid policy ------------------------------------------------


GRID_SEED = 0x5EED
_GRID_DEN = 5040


def default_grid(breakpoints: Seq[Fraction], hull: Tuple[Fraction, Fraction],
                 n_random: int = 97, seed: int = GRID_SEED,
                 exclude: Iterable[Fraction] = ()) -> List[Fraction]:
    """Midpoints of every breakpoint gap plus seeded pseudo-random rationals
    in the hull; 0 and all breakpoints are excluded (measure-zero points)."""
    pts = sorted(set(breakpoints))
    banned = set(pts) | {Fraction(0)} | {as_fraction(e) for e in exclude}
    grid: list[Fraction] = []
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        if mid not in banned:
            grid.append(mid)
    lo, hi = hull
    if hi <= lo:
        lo, hi = Fraction(-1), Fraction(1)
    rng = random.Random(seed)
    span = hi - lo
    tries = 0
    added = 0
    while added < n_random and tries < 50 * n_random:
        tries += 1
        q = lo + span * Fraction(rng.randrange(1, _GRID_DEN), _GRID_DEN)
        if q in banned or q in grid:
            continue
        grid.append(q)
        added += 1
    return sorted(set(grid))


def grid_of_size(hull: Tuple[Fraction, Fraction], n: int,
                 seed: int = GRID_SEED,
                 exclude: Iterable[Fraction] = ()) -> List[Fraction]:
    """Exactly n distinct seeded rationals in the hull, excluding 0 and the
    given measure-zero points."""
    lo, hi = hull
    if hi <= lo:
        lo, hi = Fraction(-1), Fraction(1)
    banned = {Fraction(0)} | {as_fraction(e) for e in exclude}
    rng = random.Random(seed)
    span = hi - lo
    out: list[Fraction] = []
    seen = set()
    while len(out) < n:
        q = lo + span * Fraction(rng.randrange(1, _GRID_DEN * 64), _GRID_DEN * 64)
        if q in banned or q in seen:
            continue
        seen.add(q)
        out.append(q)
    return sorted(out)
