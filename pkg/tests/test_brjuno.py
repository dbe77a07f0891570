from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from upsilab import (
    PrecisionCtx,
    Rational,
    TailAssumption,
    brjuno_eval,
    brjuno_periodic,
    classical_expand,
    functional_residual,
    make_surd,
    mcf_expand,
    sample_high_type,
    y_gap,
)
from upsilab.errors import BadParams, TerminatedInput


def oracle_sqrt2():
    # Y_{1/2}(sqrt2 - 1) = log(1 + sqrt2)/(2 - sqrt2): the residues are
    # constant so the sum is geometric
    with mpmath.workprec(160):
        return mpmath.log(1 + mpmath.sqrt(2)) / (2 - mpmath.sqrt(2))


def oracle_golden_modified():
    # Y_{1/2}((sqrt5-1)/2) = log((3+sqrt5)/2) / (1 - (3-sqrt5)/2)
    with mpmath.workprec(160):
        return mpmath.log((3 + mpmath.sqrt(5)) / 2) / (1 - (3 - mpmath.sqrt(5)) / 2)


def oracle_golden_classical():
    # Y_1(g) = log(1/g)/(1 - g), g the golden fraction
    with mpmath.workprec(160):
        g = (mpmath.sqrt(5) - 1) / 2
        return mpmath.log(1 / g) / (1 - g)


class TestClosedForms:
    def test_sqrt2_enclosure(self, sqrt2m1):
        r = brjuno_eval(mcf_expand(sqrt2m1, 40), TailAssumption(2))
        truth = oracle_sqrt2()
        assert r.value <= truth <= r.value + r.tail_bound
        assert r.tail_bound < 1e-12

    def test_golden_modified(self, golden):
        r = brjuno_eval(mcf_expand(golden, 40), TailAssumption(3))
        truth = oracle_golden_modified()
        assert r.value <= truth <= r.value + r.tail_bound
        assert r.tail_bound < 1e-12

    def test_golden_classical(self, golden):
        r = brjuno_eval(classical_expand(golden, 90), TailAssumption(2))
        truth = oracle_golden_classical()
        assert r.value <= truth <= r.value + r.tail_bound
        assert abs(r.value - truth) < 1e-12

    def test_periodic_matches_eval_at_every_depth(self, sqrt2m1):
        exact = brjuno_periodic(0, [], [(2, 1)])
        for depth in (1, 3, 10, 25):
            r = brjuno_eval(mcf_expand(sqrt2m1, depth), TailAssumption(2))
            assert r.value <= exact.value <= r.value + r.tail_bound

    def test_periodic_with_preperiod(self):
        # one functional-equation step: Y = log(1/a0) + a0 Y(tail)
        res = brjuno_periodic(0, [(5, 1)], [(2, 1)])
        with mpmath.workprec(160):
            a0 = 1 / (5 + mpmath.sqrt(2) - 1)
            expect = mpmath.log(1 / a0) + a0 * oracle_sqrt2()
        assert abs(res.value - expect) < 1e-30
        assert res.tail_bound == 0

    def test_periodic_value_vs_sampled_eval(self):
        res = brjuno_periodic(0, [(4, 1), (3, -1)], [(5, 1), (3, 1)])
        from upsilab.numeric_kernel import SymbolStream

        stream = SymbolStream(0, ((4, 1), (3, -1)), ((5, 1), (3, 1)))
        e = mcf_expand(stream.to_exact(), 60)
        r = brjuno_eval(e, TailAssumption(5))
        assert r.value <= res.value <= r.value + r.tail_bound


class TestTailBounds:
    def test_monotone_decreasing(self, golden):
        prev = mpf("inf")
        for depth in (5, 10, 20, 40):
            r = brjuno_eval(mcf_expand(golden, depth), TailAssumption(3))
            assert r.tail_bound < prev
            prev = r.tail_bound

    def test_dyadic_envelope(self):
        # tail <= 2^(1-depth) log(a_max + 1) since every residue <= 1/2
        for seed in range(5):
            _, e = sample_high_type(3, 6, 25, seed=seed)
            r = brjuno_eval(e, TailAssumption(6))
            assert r.tail_bound <= mpf(2) ** (1 - 25) * mpmath.log(7) * (1 + mpf(1e-20))

    def test_unbounded_assumption_gives_infinite_tail(self, golden):
        r = brjuno_eval(mcf_expand(golden, 10))
        assert r.tail_bound == mpf("inf")
        assert mpmath.isfinite(r.value)

    def test_observed_entry_above_bound_rejected(self):
        v, e = sample_high_type(3, 9, 10, seed=3)
        if max(s.a for s in e.symbols) > 5:
            with pytest.raises(BadParams):
                brjuno_eval(e, TailAssumption(5))

    def test_finiteness_on_bounded_samples(self):
        # bounded-entry high-type numbers are Brjuno
        for seed in range(10):
            _, e = sample_high_type(3, 9, 30, seed=seed)
            r = brjuno_eval(e, TailAssumption(9))
            assert mpmath.isfinite(r.value + r.tail_bound)


class TestSymmetries:
    def test_shift_and_reflection_exact(self, golden):
        # Y(alpha + 1) = Y(alpha) and Y(-alpha) = Y(alpha) hold exactly
        # at the expansion level: the residue streams coincide
        ta = TailAssumption(3)
        base = brjuno_eval(mcf_expand(golden, 30), ta)
        shifted = brjuno_eval(mcf_expand(make_surd(1, 1, 2, 5), 30), ta)
        negated = brjuno_eval(mcf_expand(golden.neg(), 30), ta)
        assert base.value == shifted.value == negated.value

    def test_functional_residual_self_similar(self, sqrt2m1):
        res = functional_residual(sqrt2m1, 40, PrecisionCtx(128))
        assert res < mpf(2) ** -100

    def test_functional_residual_below_tails(self, golden):
        res = functional_residual(golden, 40)
        r1 = brjuno_eval(mcf_expand(golden, 41), TailAssumption(3))
        assert res <= r1.tail_bound * 2 + mpf(2) ** -100

    def test_functional_residual_random_samples(self):
        for seed in range(5):
            v, _ = sample_high_type(3, 6, 10, seed=seed)
            assert functional_residual(v, 30) < mpf(2) ** -80

    def test_rational_rejected(self):
        with pytest.raises(TerminatedInput):
            functional_residual(Rational(Fraction(3, 10)), 10)


class TestRationalInputs:
    def test_terminated_flag(self):
        r = brjuno_eval(mcf_expand(Rational(Fraction(1, 3)), 10))
        assert r.terminated
        assert r.tail_bound == mpf("inf")

    def test_integer_input(self):
        r = brjuno_eval(mcf_expand(Rational(Fraction(4)), 10))
        assert r.terminated and r.value == 0


class TestYGap:
    def test_golden_gap(self, golden):
        gap, err = y_gap(golden, 60, TailAssumption(3))
        expect = oracle_golden_classical() - oracle_golden_modified()
        assert abs(gap - expect) <= err + mpf(1e-20)
        assert abs(float(gap) - (-0.29740527)) < 1e-6

    def test_sqrt2_zero_gap(self, sqrt2m1):
        # both algorithms produce the identical residue stream
        gap, err = y_gap(sqrt2m1, 40, TailAssumption(2))
        assert abs(gap) <= err

    def test_rational_rejected(self):
        with pytest.raises(TerminatedInput):
            y_gap(Rational(Fraction(1, 5)), 10)

    def test_gap_range_recorded_on_samples(self):
        sup = 0.0
        for seed in range(20):
            v, _ = sample_high_type(3, 6, 12, seed=seed)
            gap, err = y_gap(v, 40, TailAssumption(8))
            assert mpmath.isfinite(gap)
            sup = max(sup, abs(float(gap)))
        assert sup < 10  # sanity scale; the empirical range is reported


def test_periodic_requires_period():
    with pytest.raises(BadParams):
        brjuno_periodic(0, [(3, 1)], [])
