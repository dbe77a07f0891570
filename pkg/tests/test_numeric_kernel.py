import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from upsilab import (
    BigBall,
    PrecisionCtx,
    QuadSurd,
    Rational,
    SymbolStream,
    d_log,
    make_surd,
    nearest_residue,
    parse_alpha,
    refine,
)
from upsilab.errors import AmbiguousBall, BadParams, NotRefinable, OutOfRange
from upsilab.numeric_kernel import dlog_holder_constant, format_alpha, value_as_mpf


class TestNearestResidue:
    def test_three_quarters(self):
        a, r = nearest_residue(Rational(Fraction(3, 4)))
        assert (a, r.value) == (1, Fraction(-1, 4))

    def test_exactly_half_rounds_up(self):
        # the interval [a - 1/2, a + 1/2) is closed on the left
        a, r = nearest_residue(Rational(Fraction(1, 2)))
        assert (a, r.value) == (1, Fraction(-1, 2))

    def test_sqrt2_minus_1_exact(self, sqrt2m1):
        a, r = nearest_residue(sqrt2m1)
        assert a == 0 and r == sqrt2m1

    def test_golden_mean(self):
        a, r = nearest_residue(make_surd(1, 1, 2, 5))
        assert a == 2
        assert r == make_surd(-3, 1, 2, 5)

    def test_ball_straddling_half_integer(self):
        with pytest.raises(AmbiguousBall):
            nearest_residue(BigBall(mpf(0.5), mpf(0.01)))

    def test_narrow_ball(self):
        a, r = nearest_residue(BigBall(mpf(0.75) + mpf(2) ** -30, mpf(2) ** -40))
        assert a == 1
        assert abs(r.center + 0.25) < 1e-6

    def test_exact_decomposition(self):
        rng = random.Random(7)
        for _ in range(200):
            x = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
            a, r = nearest_residue(Rational(x))
            assert x == a + r.value
            assert Fraction(-1, 2) <= r.value < Fraction(1, 2)


class TestDlog:
    def test_total_length(self):
        # the length of [-1/2, 1/2] in the metric is 1 + log 2
        v = d_log(Fraction(1, 2), Fraction(-1, 2))
        assert abs(v - (1 + mpmath.log(2))) < 1e-12

    def test_zero_at_equal_points(self):
        assert d_log(Fraction(1, 7), Fraction(1, 7)) == 0

    def test_quarter_to_half_quadrature_oracle(self):
        # independent oracle: integrate |log t| between the points
        v = d_log(Fraction(1, 4), Fraction(1, 2))
        with mpmath.workprec(80):
            q = mpmath.quad(lambda t: -mpmath.log(t), [mpf(1) / 4, mpf(1) / 2])
        assert abs(v - q) < 1e-8
        assert abs(v - 0.25) < 1e-12  # F(1/2) - F(1/4) is exactly 1/4

    def test_opposite_sign_quadrature_oracle(self):
        v = d_log(Fraction(-1, 3), Fraction(1, 5))
        with mpmath.workprec(80):
            q = mpmath.quad(lambda t: -mpmath.log(t), [0, mpf(1) / 3]) + mpmath.quad(
                lambda t: -mpmath.log(t), [0, mpf(1) / 5]
            )
        assert abs(v - q) < 1e-8

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            d_log(Fraction(3, 4), Fraction(0))

    def test_surd_arguments(self, sqrt2m1):
        assert d_log(sqrt2m1, sqrt2m1) == 0

    @given(
        st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2)),
        st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2)),
    )
    @settings(max_examples=120, deadline=None)
    def test_symmetry_and_positivity(self, x, y):
        dxy = d_log(x, y)
        assert dxy >= 0
        assert abs(dxy - d_log(y, x)) < 1e-25
        if x != y:
            assert dxy > 0

    @given(
        st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2)),
        st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2)),
        st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2)),
    )
    @settings(max_examples=120, deadline=None)
    def test_triangle_inequality(self, x, y, z):
        with mpmath.workprec(220):
            slack = mpf(2) ** -150
            assert d_log(x, z) <= d_log(x, y) + d_log(y, z) + slack

    @given(
        st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(1, 2)),
        st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(1, 2)),
    )
    @settings(max_examples=120, deadline=None)
    def test_f_additivity(self, u, v):
        # for 0 < u < v: d(0,u) + d(u,v) = d(0,v)
        if u == v:
            return
        u, v = min(u, v), max(u, v)
        with mpmath.workprec(220):
            lhs = d_log(Fraction(0), u) + d_log(u, v)
            rhs = d_log(Fraction(0), v)
            assert abs(lhs - rhs) < mpf(2) ** -150

    def test_holder_domination(self):
        # fit the constant (analytically), then check 10^4 random pairs
        # against it with 0.01% headroom
        for a in (0.5, 0.75):
            m = dlog_holder_constant(a)
            rng = random.Random(11)
            for _ in range(10**4):
                x = Fraction(rng.randint(-10**6, 10**6), 2 * 10**6)
                y = Fraction(rng.randint(-10**6, 10**6), 2 * 10**6)
                if x == y:
                    continue
                bound = m * 1.0001 * abs(float(x - y)) ** a
                assert float(d_log(x, y)) <= bound

    def test_holder_constant_near_sharp(self):
        # the symmetric pair (t, -t) at t = e^(1 - 1/(1-a)) attains the sup
        a = 0.75
        m = dlog_holder_constant(a)
        t = Fraction(math.exp(-3)).limit_denominator(10**12)
        ratio = float(d_log(t, -t)) / (2 * float(t)) ** a
        assert 0.999 * ratio <= m <= 1.01 * ratio + 1e-9


class TestSurds:
    def test_canonical_form(self):
        s = make_surd(2, 2, 4, 8)  # (2 + 2*sqrt(8))/4 = (1 + 2*sqrt(2))/2
        assert isinstance(s, QuadSurd)
        assert (s.a, s.b, s.c, s.d) == (1, 2, 2, 2)

    def test_square_radicand_collapses_to_rational(self):
        s = make_surd(1, 3, 2, 9)
        assert isinstance(s, Rational)
        # (1 + 3*3)/2 = 5; sqrt(9) = 3 folds into the rational part
        assert s.value == Fraction(10, 2)

    def test_negative_denominator_normalized(self):
        s = make_surd(1, 1, -2, 2)
        assert s.c > 0
        assert value_as_mpf(s, 64) < 0

    def test_closure_under_cf_step(self, sqrt2m1):
        # x -> 1/x - a keeps the representation exact
        y = sqrt2m1.recip().sub_int(2)
        assert isinstance(y, QuadSurd)
        assert y == sqrt2m1

    def test_neg_involution(self, golden):
        assert golden.neg().neg() == golden

    @given(
        st.integers(-50, 50), st.integers(-50, 50).filter(lambda b: b != 0),
        st.integers(1, 30), st.integers(2, 200),
    )
    @settings(max_examples=200, deadline=None)
    def test_floor_and_cmp_match_numerics(self, a, b, c, d):
        s = make_surd(a, b, c, d)
        v = value_as_mpf(s, 80)
        if isinstance(s, Rational):
            assert abs(v - mpf(s.value.numerator) / s.value.denominator) < 1e-15
            return
        assert s.floor() == int(mpmath.floor(v)) or abs(v - mpmath.floor(v)) < 1e-12
        q = Fraction(1, 3)
        assert s.cmp(q) == (1 if v > float(q) else -1)

    def test_gcd_invariant(self):
        s = make_surd(6, 4, 10, 3)
        assert math.gcd(math.gcd(abs(s.a), abs(s.b)), s.c) == 1


class TestRefine:
    def test_rational_radius(self):
        b = refine(Rational(Fraction(1, 3)), PrecisionCtx(128))
        assert b.radius <= mpf(2) ** -126
        with mpmath.workprec(200):
            assert abs(b.center - mpf(1) / 3) <= b.radius

    def test_surd_at_256_bits(self, sqrt2m1):
        b = refine(sqrt2m1, PrecisionCtx(256))
        with mpmath.workprec(300):
            true = mpmath.sqrt(2) - 1
            assert abs(b.center - true) <= b.radius
        assert b.radius <= mpf(2) ** -254 * 1

    def test_periodic_stream_reconstruction_oracle(self):
        # the (2,+)-periodic stream is sqrt(2) - 1
        stream = SymbolStream(0, (), ((2, 1),))
        b = refine(stream, PrecisionCtx(128))
        with mpmath.workprec(160):
            assert abs(b.center - (mpmath.sqrt(2) - 1)) <= b.radius + mpf(2) ** -126

    def test_wide_ball_not_refinable(self):
        with pytest.raises(NotRefinable):
            refine(BigBall(mpf(0.3), mpf(1e-5)), PrecisionCtx(128))

    def test_short_stream_not_refinable(self):
        with pytest.raises(NotRefinable):
            refine(SymbolStream(0, ((3, 1), (4, -1)), ()), PrecisionCtx(128))


class TestAlphaSpec:
    @pytest.mark.parametrize(
        "text",
        [
            "rat:1/3",
            "rat:-7/2",
            "surd:(-1+1*sqrt(2))/1",
            "surd:(3-1*sqrt(5))/2",
            "sym:0;[(2,+),(3,-)]",
            "sym:1;[(5,+)];per:[(2,+)]",
        ],
    )
    def test_round_trip(self, text):
        v = parse_alpha(text)
        assert parse_alpha(format_alpha(v)) == v

    def test_offset_form(self, sqrt2m1):
        assert parse_alpha("surd:(0+1*sqrt(2))/1-1") == sqrt2m1

    def test_dec_form(self):
        v = parse_alpha("dec:0.375@64")
        assert isinstance(v, BigBall)
        assert v.center == mpf(0.375)
        assert v.radius == mpf(2) ** -64

    @pytest.mark.parametrize("text", ["rat:1/0", "surd:(1+0*sqrt(4))", "x:3", "sym:0;[(1,+)]", ""])
    def test_rejects_garbage(self, text):
        from upsilab.errors import InvalidSymbol

        with pytest.raises((BadParams, InvalidSymbol)):
            parse_alpha(text)


def test_precision_ctx_floor():
    with pytest.raises(BadParams):
        PrecisionCtx(32)
