import math
import random
from fractions import Fraction as F

import pytest

from framesmith.numeric import (CInterval, FInterval, cos_pi, pi_enclosure,
                                precision_bits, sin_pi, sqrt_enclosure)
from framesmith.roots import CSqrtSum, SqrtSum, _split_square


def test_precision_env_override(monkeypatch):
    monkeypatch.delenv("FRAMESMITH_PRECISION", raising=False)
    assert precision_bits() == 64
    monkeypatch.setenv("FRAMESMITH_PRECISION", "96")
    assert precision_bits() == 96


def test_pi_enclosure_tight_and_correct():
    pi = pi_enclosure(64)
    assert float(pi.width()) < 2 ** -64
    # the enclosure is far tighter than the double of math.pi
    assert abs(float(pi.mid()) - math.pi) < 1e-15
    # classic rational bounds
    assert F(223, 71) < pi.lo and pi.hi < F(22, 7)
    # Archimedes-grade digits: the enclosure pins 50 decimals
    fifty = F(31415926535897932384626433832795028841971693993751, 10 ** 49)
    assert pi.lo < fifty < pi.hi


def test_sqrt_enclosure_contains_truth():
    rng = random.Random(1)
    for _ in range(300):
        q = F(rng.randint(0, 10 ** 6), rng.randint(1, 10 ** 4))
        enc = sqrt_enclosure(q)
        assert enc.width() <= F(1, 2 ** 64)
        assert enc.lo * enc.lo <= q <= enc.hi * enc.hi
    with pytest.raises(ValueError):
        sqrt_enclosure(-1)


def test_cos_sin_against_float_libm():
    rng = random.Random(7)
    for _ in range(300):
        q = F(rng.randint(-4000, 4000), rng.randint(1, 97))
        c, s = cos_pi(q), sin_pi(q)
        assert float(c.width()) < 1e-18 and float(s.width()) < 1e-18
        # containment up to libm's own rounding
        assert abs(float(c.mid()) - math.cos(math.pi * float(q))) < 1e-12
        assert abs(float(s.mid()) - math.sin(math.pi * float(q))) < 1e-12
    assert cos_pi(F(1, 2)) == FInterval.ZERO
    assert cos_pi(0).lo == 1
    assert cos_pi(1).hi == -1
    assert sin_pi(F(1, 2)).lo == 1


def test_interval_arithmetic_basics():
    a = FInterval(F(1), F(2))
    b = FInterval(F(-1), F(3))
    assert (a + b).lo == 0 and (a + b).hi == 5
    assert (a * b).lo == -2 and (a * b).hi == 6
    assert b.square().lo == 0 and b.square().hi == 9
    assert (-a).hi == -1
    assert a.definitely_positive() and not b.definitely_positive()
    assert FInterval(F(-2), F(-1)).definitely_negative()


def test_unit_phase_modulus_one():
    z = CInterval.unit_phase(F(2, 3))
    m = z.abs2()
    assert m.lo <= 1 <= m.hi
    assert float(m.width()) < 1e-17


class TestSqrtSum:
    def test_structural_cancellation(self):
        assert (SqrtSum.sqrt_of(8) - SqrtSum.sqrt_of(2).scale(2)).is_zero()
        assert (SqrtSum.sqrt_of(F(1, 2)) - SqrtSum.sqrt_of(2).scale(F(1, 2))).is_zero()

    def test_products(self):
        half = SqrtSum.sqrt_of(F(1, 2))
        assert (half * half).rational_value() == F(1, 2)
        x = SqrtSum.sqrt_of(2) + SqrtSum.sqrt_of(3)
        sq = x * x
        assert sq.terms == {1: F(5), 6: F(2)}

    def test_enclosure_matches_float(self):
        rng = random.Random(3)
        for _ in range(200):
            q = F(rng.randint(0, 400), rng.randint(1, 40))
            c = F(rng.randint(-9, 9), rng.randint(1, 7))
            v = SqrtSum.sqrt_of(q).scale(c) + SqrtSum.rational(F(1, 3))
            got = float(v)
            want = float(c) * math.sqrt(float(q)) + 1 / 3
            assert abs(got - want) < 1e-9

    def test_sign_verdicts(self):
        assert SqrtSum.zero().sign_verdict() == "zero"
        assert SqrtSum.sqrt_of(2).sign_verdict() == "positive"
        assert (-SqrtSum.sqrt_of(2)).sign_verdict() == "negative"
        tiny = SqrtSum.sqrt_of(2) - SqrtSum.rational(F(665857, 470832))
        # sqrt(2) vs a continued-fraction convergent: tiny but nonzero
        assert tiny.sign_verdict() in ("positive", "negative")

    def test_uncertain_when_radicand_canonicalization_saturates(self):
        # (p*q)^2 * r with primes beyond the trial-division bound hides a
        # square factor; equality then falls to intervals and stays open
        p = 4099  # prime > 4096
        hidden = SqrtSum.sqrt_of(p * p * 4219)
        plain = SqrtSum.sqrt_of(4219).scale(p)
        assert (hidden - plain).sign_verdict() == "uncertain"

    def test_split_square(self):
        assert _split_square(8) == (2, 2)
        assert _split_square(36) == (6, 1)
        assert _split_square(1) == (1, 1)
        assert _split_square(2 * 3 * 5 * 7) == (1, 210)


def test_complex_sqrt_sum_abs2():
    v = CSqrtSum(SqrtSum.sqrt_of(2), SqrtSum.sqrt_of(3))
    assert v.abs2().rational_value() == 5
    w = v.scale_complex(0, 1)  # multiply by i
    assert w.re == -SqrtSum.sqrt_of(3)
    assert w.abs2().rational_value() == 5
