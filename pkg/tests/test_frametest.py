import math
from fractions import Fraction as F

import numpy as np
import pytest

from framesmith.construction import WaveletFamily, build_family, example_pwl, \
    example_shannon
from framesmith.frametest import (TestSignal, coefficient,
                                  coefficients_for_scale, frame_energy,
                                  per_scale_energy_exact, cross_inner_product)
from framesmith.quadrature import Factor, riemann_oracle


@pytest.fixture(scope="module")
def shannon():
    return build_family(example_shannon())


@pytest.fixture(scope="module")
def worked_half():
    return build_family(example_pwl(F(1, 2), F(1, 2)))


class TestSignals:
    def test_norms(self):
        assert TestSignal.indicator(1, 2).norm2() == F(1, 2)
        assert TestSignal.tent(-1, 1).norm2() == F(1, 3)

    def test_parse_grammar(self):
        s = TestSignal.parse("tent:[-1,1)")
        assert s.hat.eval(0) == 1
        c = TestSignal.parse("chi:[1/2,3/4)")
        assert c.hat.eval(F(5, 8)) == 1
        with pytest.raises(ValueError):
            TestSignal.parse("box(0,1)")
        with pytest.raises(ValueError):
            TestSignal.parse("tent:[1,1)")


class TestCoefficient:
    def test_shannon_dc_coefficient(self, shannon):
        f = TestSignal.indicator(1, 2)
        assert coefficient(f, shannon[1].psis[0], 0, 0) == pytest.approx(0.5, abs=1e-12)

    def test_disjoint_supports_exact_zero(self, shannon):
        f = TestSignal.indicator(1, 2)
        assert coefficient(f, shannon[1].psis[0], 5, 0) == 0

    def test_against_brute_force_riemann(self, worked_half):
        eta = worked_half[1].psis[0]
        tent = TestSignal.tent(-1, 1)
        factors = [Factor(tent.hat), Factor(eta.square, is_sqrt=True)]
        for j, k in ((0, 0), (0, 3), (0, 11), (-1, 4)):
            sq = eta.square.compose_scale(F(2) ** (-j))
            fac = [Factor(tent.hat), Factor(sq, is_sqrt=True)]
            oracle = 0.5 * (2.0 ** (-j / 2)) * riemann_oracle(
                fac, math.pi * k * 2.0 ** (-j))
            got = coefficient(tent, eta, j, k)
            assert abs(got - oracle) < 1e-6

    def test_oscillatory_phase_convention(self, shannon):
        # chi_[1,2) against the Shannon profile: closed form
        # (1/2) int_1^2 e^{i pi k u} du
        f = TestSignal.indicator(1, 2)
        for k in (1, 2, 5):
            want = (np.exp(2j * math.pi * k) - np.exp(1j * math.pi * k)) \
                / (2j * math.pi * k)
            got = coefficient(f, shannon[1].psis[0], 0, k)
            assert abs(got - want) < 1e-12


class TestPerScaleEnergy:
    def test_matches_k_sum(self, worked_half):
        eta = worked_half[1].psis[0]
        tent = TestSignal.tent(-1, 1)
        exact = float(per_scale_energy_exact(tent, eta, 2, 0))
        ks = np.arange(-800, 801)
        vals = coefficients_for_scale(tent, eta, 2, 0, ks)
        assert abs(exact - float(np.sum(np.abs(vals) ** 2))) < 1e-6

    def test_shannon_geometry(self, shannon):
        f = TestSignal.indicator(1, 2)
        psi = shannon[1].psis[0]
        assert per_scale_energy_exact(f, psi, 2, 0) == F(1, 2)
        assert per_scale_energy_exact(f, psi, 2, 1) == 0


class TestFrameEnergy:
    def test_shannon_ratio_tight(self, shannon):
        f = TestSignal.indicator(1, 2)
        rep = frame_energy(f, shannon[1], j_min=-4, j_max=4,
                           k_tail_target=2e-7, k_budget=1 << 23)
        assert not rep.inconclusive
        assert abs(rep.ratio - 1.0) <= 1e-6

    def test_worked_family_ratio(self, worked_half):
        tent = TestSignal.tent(-1, 1)
        rep = frame_energy(tent, worked_half[1], j_min=-14, j_max=8)
        assert not rep.inconclusive
        assert abs(rep.ratio - 1.0) <= 3e-3

    def test_halved_profile_quarters_energy(self, worked_half):
        wavelets = worked_half[1]
        halved = WaveletFamily(
            tuple(p.scale_amplitude_sq(F(1, 4)) for p in wavelets.psis),
            wavelets.partition, wavelets.sigma, wavelets.dilation)
        tent = TestSignal.tent(-1, 1)
        rep = frame_energy(tent, halved, j_min=-14, j_max=8)
        assert abs(rep.ratio - 0.25) <= 2e-3

    def test_zero_signal_rejected(self, shannon):
        zero = TestSignal(TestSignal.tent(-1, 1).hat.scale_value(0))
        with pytest.raises(ValueError, match="zero"):
            frame_energy(zero, shannon[1])

    def test_energy_monotone_in_scale_range(self, worked_half):
        tent = TestSignal.tent(-1, 1)
        narrow = frame_energy(tent, worked_half[1], j_min=-4, j_max=2)
        wide = frame_energy(tent, worked_half[1], j_min=-8, j_max=4)
        assert wide.ratio >= narrow.ratio - 1e-12
        assert all(s.computed >= 0 for s in wide.scales)

    def test_budget_exhaustion_is_inconclusive(self, shannon):
        f = TestSignal.indicator(1, 2)
        rep = frame_energy(f, shannon[1], j_min=0, j_max=0,
                           k_tail_target=1e-9, k_budget=256)
        assert rep.inconclusive
        assert rep.detail

    def test_scaling_covariance(self, worked_half):
        # f_hat(a xi) with the j-range shifted by one gives the same ratio
        tent = TestSignal.tent(-1, 1)
        squeezed = TestSignal(tent.hat.compose_scale(2))
        a_rep = frame_energy(tent, worked_half[1], j_min=-9, j_max=5)
        b_rep = frame_energy(squeezed, worked_half[1], j_min=-10, j_max=4)
        assert abs(a_rep.ratio - b_rep.ratio) < 2e-4


def test_cross_inner_product_shannon_orthogonal(shannon):
    psi = shannon[1].psis[0]
    for k in range(-3, 4):
        assert abs(cross_inner_product(psi, psi, 2, 1, k)) < 1e-9


def test_cross_inner_product_overlap_nonzero(worked_half):
    eta = worked_half[1].psis[0]
    vals = [abs(cross_inner_product(eta, eta, 2, 1, k)) for k in range(-4, 5)]
    assert max(vals) > 1e-2
