import random
from fractions import Fraction as F

import pytest

from framesmith.construction import build_family, example_pwl, example_shannon
from framesmith.intervals import IntervalSet
from framesmith.piecewise import SqrtProfile
from framesmith.roots import SqrtSum
from framesmith.sequences import CRat, Sequence, coset_op, coset_op_adj
from framesmith.trace import (GeneratorSet, WindowOperator, default_grid,
                              dilated_trace, dilation_coset_sum,
                              dilation_trace_check, dimension_function, fiber,
                              grid_of_size, ntf_generator_test, operator_trace,
                              restricted_trace, series_identity_check,
                              spectral_function, trace_split_check)

TWO_POW_40 = F(1, 2 ** 40)


@pytest.fixture(scope="module")
def shannon():
    return build_family(example_shannon())


@pytest.fixture(scope="module")
def worked():
    # half-widths pi (1 in pi units): sigma(1/2) = 1/2
    return build_family(example_pwl(1, 1))


class TestFiber:
    def test_indicator_window_hits(self):
        chi = SqrtProfile.indicator(IntervalSet.of((-1, 1)))
        assert fiber(chi, F(1, 2)) == {0: F(1)}
        assert fiber(chi, F(3, 2)) == {-1: F(1)}

    def test_sqrt_entry(self, worked):
        scaling, _ = worked
        fib = fiber(scaling.phis[0], F(1, 2))
        assert fib == {0: F(1, 2)}  # value is sqrt(1/2), stored as radicand

    def test_wide_indicator_two_entries(self):
        wide = SqrtProfile.indicator(IntervalSet.of((-1, 3)))
        assert fiber(wide, F(1, 2)) == {0: F(1), 1: F(1)}


class TestRestrictedTrace:
    def test_shannon_values(self, shannon):
        gen = shannon[0].generator_set()
        xi = F(1, 2)
        assert restricted_trace(gen, Sequence.delta(0), xi).rational_value() == 1
        assert restricted_trace(gen, Sequence.delta(1), xi).is_zero()
        both = Sequence.delta(0) + Sequence.delta(1)
        assert restricted_trace(gen, both, xi).rational_value() == 1

    def test_spectral_specialization(self, worked):
        gen = worked[0].generator_set()
        rng = random.Random(8)
        for _ in range(100):
            xi = F(rng.randint(-64, 64), 32)
            assert restricted_trace(gen, Sequence.delta(0), xi).rational_value() \
                == spectral_function(gen, xi)

    def test_dim_equals_sum_over_deltas(self, worked):
        gen = worked[0].generator_set()
        for xi in (F(1, 3), F(-2, 5), F(7, 9)):
            total = F(0)
            for k in range(-4, 5):
                total += restricted_trace(gen, Sequence.delta(k), xi).rational_value()
            assert total == dimension_function(gen, xi)


class TestOperatorTrace:
    def test_identity_gives_dimension(self, shannon):
        gen = shannon[0].generator_set()
        T = WindowOperator.identity(-3, 7)
        assert operator_trace(gen, T, F(1, 2)).rational_value() == 1

    def test_zero_operator(self, shannon):
        gen = shannon[0].generator_set()
        T = WindowOperator.of(0, [[0]])
        assert operator_trace(gen, T, F(1, 2)).is_zero()

    def test_two_dimensional_fiber(self):
        gen = GeneratorSet((SqrtProfile.indicator(IntervalSet.of((-1, 3))),), 2)
        T = WindowOperator.identity(-2, 6)
        assert operator_trace(gen, T, F(1, 2)).rational_value() == 2
        assert dimension_function(gen, F(1, 2)) == 2

    def test_psd_rejection_carries_quadratic_witness(self, shannon):
        gen = shannon[0].generator_set()
        T = WindowOperator.of(0, [[1, 2], [2, 1]])  # eigenvalues 3, -1
        witness = T.psd_witness()
        assert witness is not None
        # x^T T x < 0 for the returned vector
        n = len(witness)
        val = sum(witness[i] * T.rows[i][j] * witness[j]
                  for i in range(n) for j in range(n))
        assert val < 0
        with pytest.raises(ValueError, match="positive semidefinite"):
            operator_trace(gen, T, F(1, 2))

    def test_psd_accepts_gram_matrix(self):
        T = WindowOperator.of(0, [[2, 1], [1, 1]])
        assert T.psd_witness() is None


class TestCosetOperators:
    def test_definition_examples(self):
        d0 = Sequence.delta(0)
        assert coset_op(2, 0, d0) == Sequence.delta(0)
        assert coset_op(2, 1, d0) == Sequence.delta(1)
        assert coset_op_adj(2, 0, d0) == Sequence.delta(0)
        assert coset_op_adj(2, 1, d0).is_zero()
        assert coset_op(3, 2, Sequence.delta(1)) == Sequence.delta(5)

    def test_adjoint_pairing(self):
        rng = random.Random(12)
        for _ in range(200):
            a = rng.choice((2, 3, 5))
            d = rng.randrange(a)
            alpha = Sequence({rng.randint(-6, 6): CRat.of(rng.randint(-3, 3),
                                                          rng.randint(-3, 3))
                              for _ in range(rng.randint(1, 4))})
            beta = Sequence({rng.randint(-12, 12): CRat.of(rng.randint(-3, 3),
                                                           rng.randint(-3, 3))
                             for _ in range(rng.randint(1, 4))})
            lhs = coset_op(a, d, alpha).inner(beta)
            rhs = alpha.inner(coset_op_adj(a, d, beta))
            assert lhs == rhs

    def test_coset_resolution_of_identity(self):
        rng = random.Random(77)
        for _ in range(1000):
            a = rng.choice((2, 3))
            f = Sequence({rng.randint(-8, 8): CRat.of(rng.randint(-4, 4),
                                                      rng.randint(-4, 4))
                          for _ in range(rng.randint(1, 5))})
            total = Sequence({})
            for d in range(a):
                total = total + coset_op(a, d, coset_op_adj(a, d, f))
            assert total == f


class TestDilationFormula:
    def test_shannon_delta0_reduces_to_half_scale(self, shannon):
        gen = shannon[0].generator_set()
        for xi in (F(1, 2), F(3, 2), F(-5, 4)):
            lhs = dilated_trace(gen, Sequence.delta(0), xi)
            # chi_[-2,2): sigma(xi/2)
            expected = shannon[0].sigma.eval(xi / 2)
            assert lhs.lo <= expected <= lhs.hi
            rhs = dilation_coset_sum(gen, Sequence.delta(0), xi)
            assert rhs.rational_value() == expected

    def test_zero_sequence(self, shannon):
        gen = shannon[0].generator_set()
        zero = Sequence({})
        assert dilated_trace(gen, zero, F(1, 3)).hi == 0
        assert dilation_coset_sum(gen, zero, F(1, 3)).is_zero()

    def test_discrepancy_below_2_pow_40(self, shannon, worked):
        f = Sequence.delta(0) + Sequence.delta(1, CRat.of(0, 1))
        for fam in (shannon, worked):
            gen = fam[0].generator_set()
            grid = grid_of_size(gen.support_hull(), 25)
            rows = dilation_trace_check(gen, f, grid)
            assert max(r.discrepancy for r in rows) < TWO_POW_40


class TestGeneratorConsistency:
    def test_same_generator_trivially_passes(self, shannon):
        gen = shannon[0].generator_set()
        grid = grid_of_size((F(-1), F(1)), 10)
        rows = ntf_generator_test(gen, gen, grid)
        assert all(r.verdict == "pass" for r in rows)

    def test_split_generator_same_space_passes(self):
        whole = GeneratorSet((SqrtProfile.indicator(IntervalSet.of((-1, 1))),), 2)
        halves = GeneratorSet((SqrtProfile.indicator(IntervalSet.of((-1, 0))),
                               SqrtProfile.indicator(IntervalSet.of((0, 1)))), 2)
        grid = grid_of_size((F(-1), F(1)), 15)
        rows = ntf_generator_test(whole, halves, grid)
        assert all(r.verdict == "pass" for r in rows)

    def test_different_space_fails(self):
        whole = GeneratorSet((SqrtProfile.indicator(IntervalSet.of((-1, 1))),), 2)
        bigger = GeneratorSet((SqrtProfile.indicator(IntervalSet.of((-1, 2))),), 2)
        grid = grid_of_size((F(-1), F(2)), 15)
        rows = ntf_generator_test(whole, bigger, grid)
        assert any(r.verdict == "fail" for r in rows)


class TestSeriesIdentity:
    def test_shannon_point(self, shannon):
        phi, psi = shannon[0].generator_set(), shannon[1].generator_set()
        rows = series_identity_check(phi, psi, 0, [F(1, 2)])
        assert rows[0].residual.is_zero()

    def test_disjoint_shift(self, shannon):
        phi, psi = shannon[0].generator_set(), shannon[1].generator_set()
        grid = grid_of_size((F(-2), F(2)), 20)
        for s in (1, -1, 2):
            rows = series_identity_check(phi, psi, s, grid)
            assert all(r.residual.is_zero() for r in rows)

    def test_worked_family_exact(self, worked):
        phi, psi = worked[0].generator_set(), worked[1].generator_set()
        grid = grid_of_size((F(-1), F(1)), 30)
        for s in range(-2, 3):
            rows = series_identity_check(phi, psi, s, grid)
            for r in rows:
                assert r.residual.enclosure().sup_abs() < TWO_POW_40


class TestTraceSplit:
    def test_additivity_and_monotonicity(self, worked):
        phi, psi = worked[0].generator_set(), worked[1].generator_set()
        grid = grid_of_size(phi.support_hull(), 15)
        for f in (Sequence.delta(0), Sequence.delta(0) + Sequence.delta(1),
                  Sequence.delta(0) + Sequence.delta(2, CRat.of(0, 1))):
            rows = trace_split_check(phi, psi, f, grid)
            assert max(r.additivity_gap for r in rows) < TWO_POW_40
            assert min(r.monotone_margin for r in rows) > -TWO_POW_40


def test_default_grid_excludes_breakpoints_and_zero():
    grid = default_grid([F(-1), F(0), F(1)], (F(-1), F(1)), n_random=20)
    assert F(0) not in grid
    assert F(1) not in grid
    assert all(F(-1) < x < F(1) for x in grid)
    again = default_grid([F(-1), F(0), F(1)], (F(-1), F(1)), n_random=20)
    assert grid == again  # seeded determinism
