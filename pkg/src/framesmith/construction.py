"""Construction of NTF wavelet families from admissible spectral profiles.

The pipeline: an admissible sigma (nonnegative, bounded support, decreasing
along dilation orbits, one-sided limits 1 at 0) yields scaling profiles
phi_k = sqrt(sigma) on the translated fundamental windows and wavelet
profiles psi_i with |psi_i|^2 = sigma(./a) - sigma on the layers of a
partition of that difference's support, each layer injective mod 2pi.
The wavelet-set pipeline runs the same construction from sigma = chi_E where
E is the exact fixpoint closure of a seed set under division by a.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .folding import layered_partition, per_multiplicity
from .intervals import IntervalSet, union_all
from .piecewise import PiecewiseLinear, SqrtProfile
from .rationals import as_fraction
from .trace import GeneratorSet


@dataclass(frozen=True)
class SpectralSpec:
    """A candidate spectral profile with its integer dilation (|a| >= 2)."""

    sigma: PiecewiseLinear
    dilation: int = 2

    def __post_init__(self):
        if abs(self.dilation) < 2:
            raise ValueError("dilation must satisfy |a| >= 2")

    def two_scale_gain(self) -> PiecewiseLinear:
        """sigma(xi/a) - sigma(xi): the mass the next scale adds."""
        return self.sigma.compose_scale(Fraction(1, self.dilation)) - self.sigma


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    witness: Optional[Fraction] = None
    detail: str = ""


@dataclass(frozen=True)
class AdmissibilityReport:
    conditions: Tuple[Condition, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def first_failure(self) -> Optional[Condition]:
        for c in self.conditions:
            if not c.passed:
                return c
        return None


def admissibility_check(spec: SpectralSpec) -> AdmissibilityReport:
    """Exact check of the five spectral-profile conditions.  The two limit
    conditions are decided structurally: bounded support makes the outward
    limit 0, and the inward limit is the pair of one-sided limits at 0."""
    sigma, a = spec.sigma, spec.dilation
    conds: List[Condition] = []

    neg = sigma.first_negative_witness()
    conds.append(Condition(
        "nonnegative_integrable", neg is None, neg,
        "sigma >= 0 and bounded support (piecewise linear is integrable)"))

    diff = sigma - sigma.compose_scale(a)
    wit = diff.first_negative_witness()
    conds.append(Condition(
        "dilation_monotone", wit is None, wit,
        "sigma(a*xi) <= sigma(xi) everywhere"))

    gain = spec.two_scale_gain()
    K = gain.support()
    p = per_multiplicity(K).max_value()
    conds.append(Condition(
        "bounded_folding", True, None,
        f"gain support folds with multiplicity p = {p} (bounded set)"))

    nbhd = sigma.zero_neighborhood()
    if nbhd is None:
        conds.append(Condition(
            "unit_limit_inward", False, Fraction(0),
            "support does not reach 0; both one-sided limits are 0"))
    else:
        left, right, _, _ = nbhd
        ok = left == 1 and right == 1
        side = "left" if left != 1 else "right"
        bad = left if left != 1 else right
        conds.append(Condition(
            "unit_limit_inward", ok, None if ok else Fraction(0),
            "one-sided limits at 0 are both 1" if ok
            else f"{side} limit at 0 is {bad}"))

    conds.append(Condition(
        "vanishing_outward", True, None,
        "bounded support forces sigma(a^J xi) = 0 for large J at every xi != 0"))

    return AdmissibilityReport(tuple(conds))


def require_admissible(spec: SpectralSpec) -> None:
    report = admissibility_check(spec)
    if not report.passed:
        bad = report.first_failure()
        raise ValueError(
            f"spectral profile not admissible: {bad.name} fails"
            + (f" at xi = {bad.witness}" if bad.witness is not None else "")
            + (f" ({bad.detail})" if bad.detail else ""))


@dataclass(frozen=True)
class ScalingFamily:
    """phi_k = sqrt(sigma) on the window [-1, 1) + 2k, finitely many nonzero."""

    phis: Dict[int, SqrtProfile]
    sigma: PiecewiseLinear
    dilation: int

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(tuple(self.phis[k] for k in sorted(self.phis)),
                            self.dilation)

    def validate(self) -> None:
        total = PiecewiseLinear.zero()
        for k, phi in self.phis.items():
            window = IntervalSet.of((2 * k - 1, 2 * k + 1))
            if phi.support().difference(window):
                raise ValueError(f"scaling profile {k} leaks outside its window")
            total = total + phi.abs2()
        if total != self.sigma:
            raise ValueError("scaling squares do not sum to sigma")


@dataclass(frozen=True)
class WaveletFamily:
    """Wavelet profiles with |psi_i|^2 = two-scale gain on layer K_i."""

    psis: Tuple[SqrtProfile, ...]
    partition: Tuple[IntervalSet, ...]
    sigma: PiecewiseLinear
    dilation: int

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(self.psis, self.dilation)

    def gain(self) -> PiecewiseLinear:
        return SpectralSpec(self.sigma, self.dilation).two_scale_gain()

    def validate(self) -> None:
        if len(self.psis) != len(self.partition):
            raise ValueError("wavelet/partition length mismatch")
        total = PiecewiseLinear.zero()
        for psi, layer in zip(self.psis, self.partition):
            if psi.support().difference(layer):
                raise ValueError("wavelet support leaks outside its layer")
            if per_multiplicity(layer).max_value() > 1:
                raise ValueError("partition layer not injective mod 2pi")
            total = total + psi.abs2()
        if total != self.gain():
            raise ValueError("wavelet squares do not telescope to the gain")


def build_scaling(spec: SpectralSpec, check: bool = True) -> ScalingFamily:
    if check:
        require_admissible(spec)
    lo, hi = spec.sigma.support().hull()
    phis: Dict[int, SqrtProfile] = {}
    k_min = int(-((1 - lo) // 2))   # ceil((lo-1)/2)
    k_max = int((hi + 1) // 2)
    for k in range(k_min, k_max + 1):
        window = IntervalSet.of((2 * k - 1, 2 * k + 1))
        sq = spec.sigma.restrict(window)
        if sq.is_zero():
            continue
        phis[k] = SqrtProfile(sq, window)
    return ScalingFamily(phis, spec.sigma, spec.dilation)


def build_wavelets(spec: SpectralSpec, partition: str = "greedy",
                   check: bool = True) -> WaveletFamily:
    """Layer the two-scale gain and take square roots.  partition="greedy"
    peels multiplicity layers; "windows" intersects with the translated
    fundamental windows (may produce more layers than the minimum p)."""
    if check:
        require_admissible(spec)
    gain = spec.two_scale_gain()
    K = gain.support()
    if partition == "greedy":
        layers = layered_partition(K)
    elif partition == "windows":
        layers = []
        lo, hi = K.hull()
        l_min = int(-((1 - lo) // 2))
        l_max = int((hi + 1) // 2)
        for l in range(l_min, l_max + 1):
            piece = K.intersect(IntervalSet.of((2 * l - 1, 2 * l + 1)))
            if piece:
                layers.append(piece)
    else:
        raise ValueError(f"unknown partition rule {partition!r}")
    psis: List[SqrtProfile] = []
    kept: List[IntervalSet] = []
    for layer in layers:
        sq = gain.restrict(layer)
        if sq.is_zero():
            continue
        psis.append(SqrtProfile(sq, layer))
        kept.append(layer)
    fam = WaveletFamily(tuple(psis), tuple(kept), spec.sigma, spec.dilation)
    fam.validate()
    return fam


def build_family(spec: SpectralSpec, partition: str = "greedy"
                 ) -> Tuple[ScalingFamily, WaveletFamily]:
    require_admissible(spec)
    return (build_scaling(spec, check=False),
            build_wavelets(spec, partition, check=False))


# -- wavelet-set pipeline ----------------------------------------------------


class ClosureDidNotStabilize(RuntimeError):
    """Raised when the union of contracted copies keeps spawning pieces near 0."""

    def __init__(self, partial: IntervalSet, budget: int):
        super().__init__(
            f"union of contracted copies did not stabilize within {budget} "
            f"iterations (non-terminating near 0); partial union has "
            f"{len(partial.pieces)} pieces")
        self.partial = partial


def _zero_fills(U: IntervalSet, side: int) -> List[IntervalSet]:
    """Candidates closing the gap at 0: fill [0, lo) up to each positive
    piece start (side +1) or [hi, 0) down from each negative piece end
    (side -1), swallowing any smaller fragments in between."""
    fills: List[IntervalSet] = []
    if side > 0:
        for lo, _ in U.pieces:
            if lo > 0:
                fills.append(IntervalSet.of((0, lo)))
    else:
        for _, hi in U.pieces:
            if hi < 0:
                fills.append(IntervalSet.of((hi, 0)))
    return fills


def waveletset_closure(E: IntervalSet, a: int, budget: int = 64) -> IntervalSet:
    """Exact union of E/a^j over j >= 1, up to the measure-zero point {0}.

    Iterates U <- (E union U)/a and tests candidate fixpoints, including the
    candidates with the gap at 0 closed.  Any bounded fixpoint of the
    monotone map agrees with the true union up to {0}, so a verified
    candidate is exact almost everywhere.
    """
    inv = Fraction(1, a)
    step = lambda X: E.union(X).scale(inv)
    U = IntervalSet.empty()
    for _ in range(budget):
        U = step(U)
        for cand in _closure_candidates(U):
            if step(cand) == cand:
                return cand
    raise ClosureDidNotStabilize(U, budget)


def _closure_candidates(U: IntervalSet) -> List[IntervalSet]:
    pos = [IntervalSet.empty()] + _zero_fills(U, +1)
    neg = [IntervalSet.empty()] + _zero_fills(U, -1)
    out: List[IntervalSet] = []
    seen: set = set()
    for p in pos:
        for q in neg:
            cand = U.union(p).union(q)
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
    return out


def waveletset_sigma(E: IntervalSet, a: int, budget: int = 64) -> PiecewiseLinear:
    """Spectral profile chi of the closure of the wavelet set E (Fourier
    supports of the target family) under contraction by a."""
    return PiecewiseLinear.indicator(waveletset_closure(E, a, budget))


@dataclass(frozen=True)
class SeedClassification:
    verdict: str  # not_admissible | ntf | orthonormal
    reason: str
    fold_max: int = 0


def classify_waveletset_seed(E: IntervalSet, a: int) -> SeedClassification:
    """Classify sigma = chi_E as a wavelet-set seed, exactly.

    Requires E bounded (structural), E inside its own dilate, a punctured
    neighborhood of 0, and then reads the folding multiplicity of aE \\ E:
    identically 1 gives an orthonormal wavelet set, bounded multiplicity a
    normalized-tight-frame family.
    """
    if E.is_empty():
        return SeedClassification("not_admissible", "empty seed")
    stray = E.difference(E.dilate(a))
    if stray:
        lo, hi = stray.pieces[0]
        return SeedClassification(
            "not_admissible",
            f"seed not contained in its dilate: [{lo},{hi}) sticks out")
    if not any(lo < 0 < hi for lo, hi in E.pieces):
        return SeedClassification(
            "not_admissible", "no punctured neighborhood of 0 inside the seed")
    W = E.dilate(a).difference(E)
    mult = per_multiplicity(W)
    p = mult.max_value()
    covered = sum(((hi - lo) for lo, hi, c in mult.cells if c == 1), Fraction(0))
    if p <= 1 and covered == 2:
        return SeedClassification(
            "orthonormal", "fold of aE minus E covers the fundamental domain "
            "exactly once", p)
    return SeedClassification(
        "ntf", f"fold of aE minus E has multiplicity up to {p} "
        f"and covers measure {covered} of 2", p)


# -- built-in examples -------------------------------------------------------


def example_pwl(A, B, dilation: int = 2) -> SpectralSpec:
    """Tent spectral profile: 1 at 0, linear down to 0 at -A and +B (pi units)."""
    A, B = as_fraction(A), as_fraction(B)
    if A <= 0 or B <= 0:
        raise ValueError("tent half-widths must be positive")
    sigma = PiecewiseLinear.of(
        (-A, 0, Fraction(1) / A, 1),
        (0, B, -Fraction(1) / B, 1))
    return SpectralSpec(sigma, dilation)


def example_shannon() -> SpectralSpec:
    return SpectralSpec(PiecewiseLinear.indicator(IntervalSet.of((-1, 1))), 2)


JOURNE_WAVELET_SET = IntervalSet.of(
    (Fraction(-32, 7), -4), (-1, Fraction(-4, 7)),
    (Fraction(4, 7), 1), (4, Fraction(32, 7)))


def example_journe() -> SpectralSpec:
    return SpectralSpec(waveletset_sigma(JOURNE_WAVELET_SET, 2), 2)


def example_by_name(name: str) -> SpectralSpec:
    """Parse built-in generator names: shannon | journe | pwl:a=1/2,b=1/2."""
    if name == "shannon":
        return example_shannon()
    if name == "journe":
        return example_journe()
    if name.startswith("pwl:"):
        params = {}
        for item in name[4:].split(","):
            key, _, value = item.partition("=")
            params[key.strip()] = as_fraction(value.strip())
        return example_pwl(params.get("a", Fraction(1, 2)),
                           params.get("b", Fraction(1, 2)))
    raise ValueError(f"unknown example {name!r}")


def random_admissible_spec(rng: random.Random, dilation: int | None = None
                           ) -> SpectralSpec:
    """Random radially nonincreasing tent-like profile: admissible by
    construction (|xi'| >= |xi| forces sigma(xi') <= sigma(xi))."""
    a = dilation if dilation is not None else rng.choice((2, 3))

    def one_side() -> List[Tuple[Fraction, Fraction]]:
        n = rng.randint(1, 4)
        xs = sorted(Fraction(rng.randint(1, 64), 16) for _ in range(n))
        xs = sorted(set(xs))
        vals = sorted((Fraction(rng.randint(0, 15), 16) for _ in xs), reverse=True)
        vals[-1] = Fraction(0)
        return list(zip(xs, vals))

    def side_pieces(knots, sign) -> List[Tuple[Fraction, Fraction, Fraction, Fraction]]:
        pieces = []
        prev_x, prev_v = Fraction(0), Fraction(1)
        for x, v in knots:
            alpha = (v - prev_v) / (sign * x - sign * prev_x)
            beta = prev_v - alpha * sign * prev_x
            lo, hi = (sign * prev_x, sign * x) if sign > 0 else (sign * x, sign * prev_x)
            pieces.append((lo, hi, alpha, beta))
            prev_x, prev_v = x, v
        return pieces

    right = side_pieces(one_side(), +1)
    left = side_pieces(one_side(), -1)
    sigma = PiecewiseLinear(tuple(left + right))
    return SpectralSpec(sigma, a)
