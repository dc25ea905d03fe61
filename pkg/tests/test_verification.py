import random
from fractions import Fraction as F

import pytest

from framesmith.construction import (JOURNE_WAVELET_SET, ScalingFamily,
                                     SpectralSpec, WaveletFamily, build_family,
                                     build_wavelets, classify_waveletset_seed,
                                     example_journe, example_pwl,
                                     example_shannon, random_admissible_spec,
                                     waveletset_sigma)
from framesmith.intervals import IntervalSet
from framesmith.trace import grid_of_size
from framesmith.verification import (check_decay, check_density,
                                     check_ntf_multiwavelet,
                                     check_semiorthogonal, check_split,
                                     check_sufficiency,
                                     check_wavelet_set_tiling)


@pytest.fixture(scope="module")
def shannon():
    return build_family(example_shannon())


@pytest.fixture(scope="module")
def worked_half():
    return build_family(example_pwl(F(1, 2), F(1, 2)))


def corrupt(family: WaveletFamily, factor=F(10201, 10000)) -> WaveletFamily:
    psis = (family.psis[0].scale_amplitude_sq(factor),) + family.psis[1:]
    return WaveletFamily(psis, family.partition, family.sigma, family.dilation)


class TestNtfCheck:
    def test_shannon_exact_zero_tail(self, shannon):
        report = check_ntf_multiwavelet(shannon[1])
        assert report.status == "pass"
        norm_row = next(c for c in report.checks if c.name == "norm_sum")
        assert norm_row.tail_bound == 0

    def test_worked_family_tail_below_target(self, worked_half):
        report = check_ntf_multiwavelet(worked_half[1])
        assert report.status == "pass"
        norm_row = next(c for c in report.checks if c.name == "norm_sum")
        assert norm_row.tail_bound < F(1, 10 ** 9)

    def test_corrupted_family_fails_with_witness(self, worked_half):
        report = check_ntf_multiwavelet(corrupt(worked_half[1]))
        assert report.status == "fail"
        fails = [c for c in report.checks if c.status == "fail"]
        assert any(c.witness for c in fails)

    def test_numeric_mode_certifies_geometric_tail(self, worked_half):
        report = check_ntf_multiwavelet(worked_half[1], mode="numeric")
        assert report.status == "pass"

    def test_numeric_mode_divergence_detected(self, shannon):
        # squares not vanishing at 0 make the scale series diverge
        fat = WaveletFamily(
            (shannon[1].psis[0],
             __import__("framesmith.piecewise", fromlist=["SqrtProfile"])
             .SqrtProfile.indicator(IntervalSet.of((F(-1, 4), F(1, 4)))),),
            shannon[1].partition + (IntervalSet.of((F(-1, 4), F(1, 4))),),
            shannon[1].sigma, 2)
        report = check_ntf_multiwavelet(fat, mode="numeric")
        assert report.status == "fail"


class TestSplitChecks:
    def test_constructed_pairs_pass(self, shannon, worked_half):
        for scaling, wavelets in (shannon, worked_half):
            assert check_split(scaling, wavelets).status == "pass"

    def test_mismatched_pair_fails_at_zero_shift(self, shannon, worked_half):
        report = check_split(shannon[0], worked_half[1])
        assert report.status == "fail"
        first = next(c for c in report.checks if c.status == "fail")
        assert first.name == "two_scale_split[s=0]"
        assert first.witness is not None

    def test_decay_reports_exit_indices(self, worked_half):
        report = check_decay(*worked_half)
        assert report.status == "pass"
        assert any(c.name == "outward_decay" for c in report.checks)

    def test_sufficiency_passes_and_implies_ntf(self, shannon, worked_half):
        for scaling, wavelets in (shannon, worked_half):
            report = check_sufficiency(scaling, wavelets)
            assert report.status == "pass"
            assert any(c.name == "meta_ntf_follows" for c in report.checks)

    def test_halved_sigma_fails_inward_limit(self, worked_half):
        scaling, wavelets = worked_half
        halved = ScalingFamily(
            {k: p.scale_amplitude_sq(F(1, 2)) for k, p in scaling.phis.items()},
            scaling.sigma.scale_value(F(1, 2)), scaling.dilation)
        report = check_sufficiency(halved, wavelets)
        assert report.status == "fail"
        assert any(c.name == "inward_limit_one" and c.status == "fail"
                   for c in report.checks)

    def test_empty_wavelets_fail_zero_shift(self, shannon):
        empty = WaveletFamily((), (), shannon[1].sigma, 2)
        report = check_split(shannon[0], empty)
        first = next(c for c in report.checks if c.status == "fail")
        assert first.name == "two_scale_split[s=0]"


class TestDensity:
    def test_worked_family_strictly_increases(self, worked_half):
        report = check_density(worked_half[0])
        assert report.status == "pass"

    def test_shannon_reaches_one_exactly(self, shannon):
        assert check_density(shannon[0]).status == "pass"

    def test_narrow_indicator_seed(self):
        # chi on [-1/4, 1/4) is admissible and dense; cross-checked reports
        from framesmith.construction import admissibility_check, build_scaling
        from framesmith.piecewise import PiecewiseLinear
        spec = SpectralSpec(
            PiecewiseLinear.indicator(IntervalSet.of((F(-1, 4), F(1, 4)))), 2)
        assert admissibility_check(spec).passed
        fam = build_scaling(spec)
        assert check_density(fam).status == "pass"


class TestWaveletSetTiling:
    def test_shannon_set(self):
        report = check_wavelet_set_tiling(
            [IntervalSet.of((-2, -1), (1, 2))], 2, F(64), 24)
        assert report.status == "pass"

    def test_journe_set(self):
        report = check_wavelet_set_tiling([JOURNE_WAVELET_SET], 2, F(64), 24)
        assert report.status == "pass"

    def test_perturbed_shannon_fails_exactly(self):
        report = check_wavelet_set_tiling(
            [IntervalSet.of((-2, -1), (1, F(21, 10)))], 2, F(64), 24)
        assert report.status == "fail"
        fails = [c for c in report.checks if c.status == "fail"]
        assert fails and all(c.witness for c in fails)

    def test_mutual_overlap_detected(self):
        report = check_wavelet_set_tiling(
            [IntervalSet.of((1, 2)), IntervalSet.of((F(3, 2), 3))], 2, F(8), 8)
        assert any(c.name == "mutual_disjoint" and c.status == "fail"
                   for c in report.checks)

    def test_multi_piece_orthonormal_split(self):
        # splitting the Shannon wavelet set into its two pieces still tiles
        report = check_wavelet_set_tiling(
            [IntervalSet.of((-2, -1)), IntervalSet.of((1, 2))], 2, F(32), 20)
        assert report.status == "pass"


class TestSemiOrthogonality:
    def test_wavelet_sets_always_certified(self, shannon):
        assert check_semiorthogonal(shannon[1]).status == "pass"
        journe = build_wavelets(example_journe())
        assert check_semiorthogonal(journe).status == "pass"

    def test_overlapping_tent_profile_fails_with_nonzero_witness(self, worked_half):
        report = check_semiorthogonal(worked_half[1])
        assert report.status == "fail"
        row = next(c for c in report.checks if c.status == "fail")
        assert row.witness["max_cross_inner"] > 1e-3

    def test_empty_family_trivially_passes(self, shannon):
        empty = WaveletFamily((), (), shannon[1].sigma, 2)
        assert check_semiorthogonal(empty).status == "pass"


class TestSoundnessChain:
    def test_random_admissible_pipeline(self):
        rng = random.Random(2024)
        for _ in range(12):
            spec = random_admissible_spec(rng)
            scaling, wavelets = build_family(spec)
            grid = grid_of_size(scaling.generator_set().support_hull(), 25,
                                seed=rng.randint(0, 10 ** 6))
            assert check_sufficiency(scaling, wavelets, grid).status == "pass"
            assert check_ntf_multiwavelet(wavelets, grid=grid).status == "pass"

    def test_orthonormal_seed_round_trip(self):
        seed = IntervalSet.of((-1, 1))
        assert classify_waveletset_seed(seed, 2).verdict == "orthonormal"
        fam = build_wavelets(SpectralSpec(waveletset_sigma(seed, 2), 2))
        sets = [p.support() for p in fam.psis]
        assert check_wavelet_set_tiling(sets, 2, F(32), 20).status == "pass"
