"""Desk-scale Parseval check: affine-system coefficients by quadrature.

Coefficients <f, D^j T_k psi> are computed in the Fourier domain:
    (1/2) |a|^{-j/2} int f_hat(u) psi_hat(a^{-j} u) e^{i pi k a^{-j} u} du
(pi units: the real frequency is u*pi, which contributes the 1/2 and puts pi
into the phase).  The k-sweep per scale is vectorized through the quadrature
engine; truncation is justified by explicit numeric tail sums plus the exact
per-scale energy integral used as the out-of-range estimate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from .construction import WaveletFamily
from .intervals import IntervalSet
from .piecewise import PiecewiseLinear, SqrtProfile, integrate_product
from .quadrature import Factor, QuadPlan, oscillatory_integrals
from .rationals import as_fraction, format_ratio

_SIGNAL_RE = re.compile(r"^(tent|chi):\[\s*([^,\]]+)\s*,\s*([^,\]]+)\s*\)$")


@dataclass(frozen=True)
class TestSignal:
    """A signal given by its compactly supported piecewise-linear transform."""

    __test__ = False  # not a pytest case despite the name

    hat: PiecewiseLinear
    label: str = ""

    def norm2(self) -> Fraction:
        """||f||^2 = (2 pi)^{-1} int |f_hat|^2, exact (pi units give the 1/2)."""
        return integrate_product([self.hat, self.hat]) / 2

    @staticmethod
    def tent(lo, hi, label: str = "") -> "TestSignal":
        """Peak 1 at the midpoint, 0 at both ends."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        mid = (lo + hi) / 2
        rise_a = Fraction(1) / (mid - lo)
        fall_a = Fraction(-1) / (hi - mid)
        pieces = PiecewiseLinear.of((lo, mid, rise_a, -rise_a * lo),
                                    (mid, hi, fall_a, -fall_a * hi))
        return TestSignal(pieces, label or f"tent:[{format_ratio(lo)},{format_ratio(hi)})")

    @staticmethod
    def indicator(lo, hi, label: str = "") -> "TestSignal":
        lo, hi = as_fraction(lo), as_fraction(hi)
        return TestSignal(PiecewiseLinear.indicator(IntervalSet.of((lo, hi))),
                          label or f"chi:[{format_ratio(lo)},{format_ratio(hi)})")

    @staticmethod
    def parse(text: str) -> "TestSignal":
        m = _SIGNAL_RE.match(text.strip())
        if not m:
            raise ValueError(f"signal grammar is tent:[lo,hi) or chi:[lo,hi), got {text!r}")
        kind, lo, hi = m.group(1), as_fraction(m.group(2)), as_fraction(m.group(3))
        if hi <= lo:
            raise ValueError("empty signal support")
        return TestSignal.tent(lo, hi) if kind == "tent" else TestSignal.indicator(lo, hi)


def _scaled_square(psi: SqrtProfile, a: int, j: int) -> PiecewiseLinear:
    """|psi_hat|^2(a^{-j} u) as a function of u, exact."""
    return psi.square.compose_scale(Fraction(a) ** (-j))


def _scale_factors(f: TestSignal, psi: SqrtProfile, a: int, j: int
                   ) -> Tuple[List[Factor], float, float]:
    """Integrand factors, frequency unit, and amplitude for one scale."""
    factors = [Factor(f.hat, is_sqrt=False),
               Factor(_scaled_square(psi, a, j), is_sqrt=True)]
    freq_unit = math.pi * float(Fraction(a) ** (-j))
    amplitude = 0.5 * abs(float(Fraction(a) ** j)) ** -0.5
    return factors, freq_unit, amplitude


def coefficients_for_scale(f: TestSignal, psi: SqrtProfile, a: int, j: int,
                           ks: np.ndarray) -> np.ndarray:
    """<f, D^j T_k psi> for every k in ks (complex array)."""
    factors, freq_unit, amplitude = _scale_factors(f, psi, a, j)
    vals = oscillatory_integrals(factors, np.asarray(ks, dtype=float) * freq_unit)
    return amplitude * vals


def coefficient(f: TestSignal, psi: SqrtProfile, j: int, k: int, a: int = 2
                ) -> complex:
    """Single affine-system coefficient; exact 0 when supports miss."""
    support = f.hat.support().intersect(psi.domain.scale(Fraction(a) ** j))
    if support.is_empty():
        return 0.0 + 0.0j
    return complex(coefficients_for_scale(f, psi, a, j, np.array([k]))[0])


def per_scale_energy_exact(f: TestSignal, psi: SqrtProfile, a: int, j: int
                           ) -> Fraction:
    """sum_k |<f, D^j T_k psi>|^2 in closed form:
    (1/2) int |f_hat(u)|^2 |psi_hat|^2(a^{-j} u) du, exact.

    Valid because the profile's support is injective mod 2 pi, making the
    modulates an orthonormal family on it (used as an oracle and for
    out-of-range tail estimates, never as the measured energy)."""
    return integrate_product([f.hat, f.hat, _scaled_square(psi, a, j)]) / 2


@dataclass
class ScaleEnergy:
    j: int
    computed: float = 0.0
    k_used: int = 0
    k_tail: float = 0.0


@dataclass
class EnergyReport:
    ratio: float
    tail_estimate: float
    norm2: Fraction
    scales: List[ScaleEnergy] = field(default_factory=list)
    inconclusive: bool = False
    detail: str = ""

    def to_jsonable(self) -> dict:
        return {
            "ratio": self.ratio,
            "tail_estimate": self.tail_estimate,
            "norm2": format_ratio(self.norm2),
            "inconclusive": self.inconclusive,
            "detail": self.detail,
            "scales": [
                {"j": s.j, "energy": s.computed, "k_used": s.k_used,
                 "k_tail": s.k_tail}
                for s in self.scales],
        }


_K_BLOCK = 64


def frame_energy(f: TestSignal, family: WaveletFamily,
                 j_min: int = -8, j_max: int = 8,
                 k_tail_target: float = 1e-6,
                 k_budget: int = 1 << 21) -> EnergyReport:
    """Accumulate sum |<f, D^j T_k psi>|^2 / ||f||^2 over the scale range.

    Per (psi, j) the k sweep grows in blocks until the block energy and a
    conservative extrapolated remainder drop below the target fraction of
    ||f||^2; the remainder and the exact per-scale energies outside the j
    range are reported as tail_estimate.  Exhausting k_budget first marks the
    report inconclusive.
    """
    norm2 = f.norm2()
    if norm2 == 0:
        raise ValueError("zero test signal")
    norm2f = float(norm2)
    a = family.dilation
    report = EnergyReport(0.0, 0.0, norm2)
    total = 0.0
    active = []
    for j in range(j_min, j_max + 1):
        for psi in family.psis:
            if not f.hat.support().intersect(psi.domain.scale(Fraction(a) ** j)).is_empty():
                active.append((j, psi))
    # per-scale tail contract: each (j, psi) sweep stops below this energy
    per_target = k_tail_target * norm2f
    scales: Dict[int, ScaleEnergy] = {j: ScaleEnergy(j) for j in range(j_min, j_max + 1)}
    for j, psi in active:
        scale = scales[j]
        factors, freq_unit, amplitude = _scale_factors(f, psi, a, j)
        k_cap = 4 * _K_BLOCK
        plan = QuadPlan(factors, freq_unit * k_cap)
        k_hi = -1
        block = _K_BLOCK
        while True:
            ks = np.arange(k_hi + 1, k_hi + 1 + block)
            if ks[-1] > k_cap:
                k_cap = int(4 * ks[-1])
                plan = QuadPlan(factors, freq_unit * k_cap)
            vals = amplitude * plan.integrate(ks * freq_unit)
            # real factors: coeff(-k) = conj(coeff(k)), so fold negative k in
            weights = np.where(ks == 0, 1.0, 2.0)
            block_energy = float(np.sum(weights * np.abs(vals) ** 2))
            scale.computed += block_energy
            total += block_energy
            k_hi = int(ks[-1])
            scale.k_used = max(scale.k_used, k_hi)
            # remainder if |coeff|^2 decays no slower than 1/k^2 from here
            tail_est = block_energy * k_hi / block
            if block_energy < per_target and tail_est < per_target:
                scale.k_tail += tail_est
                report.tail_estimate += tail_est
                break
            if 2 * k_hi >= k_budget:
                report.inconclusive = True
                report.detail += (f"k budget exhausted at scale {j} "
                                  f"(tail estimate {tail_est:.3g});")
                scale.k_tail += tail_est
                report.tail_estimate += tail_est
                break
            block = min(block * 2, 16384)
    report.scales.extend(scales[j] for j in range(j_min, j_max + 1))
    # exact per-scale energies outside the computed j range (tail estimate)
    for j in list(range(j_min - 40, j_min)) + list(range(j_max + 1, j_max + 41)):
        for psi in family.psis:
            report.tail_estimate += float(per_scale_energy_exact(f, psi, a, j))
    report.ratio = total / norm2f
    return report


def cross_inner_product(psi: SqrtProfile, psi_other: SqrtProfile, a: int,
                        scale_gap: int, k: int) -> complex:
    """<psi, D^{scale_gap} T_k psi_other> via the same Fourier quadrature."""
    sq_other = psi_other.square.compose_scale(Fraction(a) ** (-scale_gap))
    factors = [Factor(psi.square, is_sqrt=True), Factor(sq_other, is_sqrt=True)]
    freq = math.pi * float(Fraction(a) ** (-scale_gap)) * k
    val = oscillatory_integrals(factors, np.array([freq]))[0]
    return 0.5 * abs(float(Fraction(a) ** scale_gap)) ** -0.5 * complex(val)
