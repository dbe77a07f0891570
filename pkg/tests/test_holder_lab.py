import math
import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from upsilab import (
    PairSamplerConfig,
    TailAssumption,
    UpsilonConfig,
    beta_diff_check,
    holder_scan,
    limit_at_zero,
    make_surd,
    mcf_expand,
    parse_alpha,
    sum_lemma_check,
    upsilon,
)
from upsilab.cf_engine import value_from_prefix
from upsilab.errors import BadParams, EqualInputs
from upsilab.holder_lab import (
    LOG_2PI,
    PrecisionCtx,
    sample_pairs,
    split_consistency,
    windowed_max_trend,
)
from upsilab.numeric_kernel import value_as_mpf


def brute_force_sum_oracle(alpha, alpha_p, a, depth):
    """Independent route: iterate the G map in 300-bit floating point
    (no exact backends) and sum the series directly."""
    with mpmath.workprec(300):
        def residues(x):
            x = abs(value_as_mpf(x, 300))
            x = x - mpmath.nint(x)
            x = abs(x)
            out = []
            for _ in range(depth + 1):
                out.append(x)
                x = 1 / x
                x = abs(x - mpmath.nint(x))
            return out

        r1 = residues(alpha)
        r2 = residues(alpha_p)
        beta = mpf(1)
        total = mpf(0)
        for j in range(1, depth + 1):
            beta *= r1[j - 1]
            total += beta * abs(r1[j] - r2[j]) ** a
        dist = abs(value_as_mpf(alpha, 300) - value_as_mpf(alpha_p, 300))
        return float(total / mpmath.sqrt(dist))


class TestSumLemma:
    def test_equal_inputs_rejected(self, sqrt2m1):
        with pytest.raises(EqualInputs):
            sum_lemma_check(sqrt2m1, sqrt2m1, 0.75, 20)

    def test_exponent_range(self, sqrt2m1, golden):
        with pytest.raises(BadParams):
            sum_lemma_check(sqrt2m1, golden, 0.4, 20)

    def test_against_float_oracle(self, sqrt2m1, golden):
        rep = sum_lemma_check(sqrt2m1, golden, 0.75, 60)
        oracle = brute_force_sum_oracle(sqrt2m1, golden, 0.75, 60)
        assert rep.ratio == pytest.approx(oracle, rel=1e-6)
        assert rep.truncation_error_bound < 1e-17

    def test_depth_stability(self):
        pairs = sample_pairs(PairSamplerConfig(N=3, a_max=6), 40, seed=3)
        for va, vb, _ in pairs[:12]:
            r40 = sum_lemma_check(va, vb, 0.75, 40)
            r80 = sum_lemma_check(va, vb, 0.75, 80)
            assert r80.ratio == pytest.approx(r40.ratio, rel=1e-6)

    def test_report_fields(self, sqrt2m1, golden):
        rep = sum_lemma_check(sqrt2m1, golden, 0.75, 30)
        assert rep.lhs >= 0 and rep.rhs_base > 0
        assert rep.ratio == pytest.approx(rep.lhs / rep.rhs_base)
        assert rep.truncation_depth == 30


class TestBetaDiff:
    def test_equal_inputs_rejected(self, golden):
        with pytest.raises(EqualInputs):
            beta_diff_check(golden, golden, 20)

    def test_golden_vs_sqrt2(self, sqrt2m1, golden):
        lhs, rhs = beta_diff_check(golden, sqrt2m1, 40)
        assert 0 <= lhs <= rhs

    def test_random_pairs(self):
        rng = random.Random(17)
        from upsilab import sample_high_type

        for _ in range(200):
            va, _ = sample_high_type(3, 7, 8, seed=rng.randrange(2**31))
            vb, _ = sample_high_type(3, 7, 8, seed=rng.randrange(2**31))
            if va == vb:
                continue
            lhs, rhs = beta_diff_check(va, vb, 40)
            assert lhs <= rhs


class TestSamplePairs:
    def test_deterministic(self):
        cfg = PairSamplerConfig()
        assert sample_pairs(cfg, 8, 5) == sample_pairs(cfg, 8, 5)

    def test_kinds_cycle(self):
        rows = sample_pairs(PairSamplerConfig(), 8, 5)
        assert [k for _, _, k in rows] == ["far", "nearA", "nearB", "near"] * 2

    def test_near_pairs_split_cases(self):
        rows = sample_pairs(PairSamplerConfig(N=3, a_max=6), 40, seed=9)
        seen = {"A": 0, "B": 0}
        for va, vb, kind in rows:
            if kind in ("nearA", "nearB"):
                rep, holds = split_consistency(va, vb)
                assert holds
                seen[rep.case] += 1
                if kind == "nearA":
                    assert rep.case == "A"
        assert seen["A"] >= 3 and seen["B"] >= 3

    def test_values_in_range(self):
        for va, vb, _ in sample_pairs(PairSamplerConfig(N=3, a_max=9), 20, seed=1):
            for v in (va, vb):
                x = value_as_mpf(v, 80)
                assert 0 < x < 0.5


@pytest.fixture(scope="module")
def small_scan():
    return holder_scan(
        16, seed=2, exponent=0.5,
        sampler=PairSamplerConfig(N=3, a_max=6, prefix_depth=6, near_share_max=4),
        ups=UpsilonConfig(series_N=256, depth=30, bits=128),
    )


class TestHolderScan:

    def test_report_shape(self, small_scan):
        report, rows = small_scan
        assert report.pairs_evaluated == 16
        assert len(rows) == 16
        assert report.max_ratio > 0
        assert math.isfinite(report.max_ratio)
        qs = dict(report.quantiles)
        assert qs[0.5] <= qs[0.9] <= qs[0.99] <= report.max_ratio + 1e-12

    def test_worst_pair_reproduces(self, small_scan):
        report, rows = small_scan
        va = parse_alpha(report.worst_pair[0])
        vb = parse_alpha(report.worst_pair[1])
        tail = TailAssumption(6)
        ctx = PrecisionCtx(128)
        ua = upsilon(va, 256, 30, tail, ctx)
        ub = upsilon(vb, 256, 30, tail, ctx)
        dist = abs(value_as_mpf(va, 128) - value_as_mpf(vb, 128))
        ratio = abs(ua.upsilon - ub.upsilon) / float(dist) ** 0.5
        assert ratio == pytest.approx(report.max_ratio, rel=1e-9)

    def test_excluded_counted(self, small_scan):
        report, rows = small_scan
        assert report.excluded == sum(1 for r in rows if not r.included)


def test_all_pairs_excluded_raises():
    from upsilab.errors import InsufficientPrecision

    # depth 1 leaves a Brjuno tail ~0.5, larger than any Upsilon
    # difference, so every pair's bars overlap
    with pytest.raises(InsufficientPrecision):
        holder_scan(
            2, seed=3, exponent=0.5,
            sampler=PairSamplerConfig(N=3, a_max=6, prefix_depth=4),
            ups=UpsilonConfig(series_N=128, depth=1, bits=96),
        )


def test_windowed_max_trend_synthetic():
    # y ~ x^(-1/4) on a log grid: positive slope against -log10(x)
    xs = [10 ** (-k / 2) for k in range(2, 14)]
    ys = [x ** (-0.25) for x in xs]
    slope, stderr, pts = windowed_max_trend(xs, ys, bins=4)
    assert slope > 0
    # and a flat series shows no significant trend
    slope2, stderr2, _ = windowed_max_trend(xs, [1.0] * len(xs), bins=4)
    assert abs(slope2) <= 2 * stderr2 + 1e-12


def test_limit_at_zero_first_step():
    out = limit_at_zero([1], UpsilonConfig(series_N=512, depth=30, bits=160))
    alpha, sample, gap = out[0]
    # alpha_1 = 1/(10 + (3 - sqrt5)/2), exactly
    expect = 1 / (10 + float(make_surd(3, -1, 2, 5).to_mpf(60)[0]))
    assert float(value_as_mpf(alpha, 80)) == pytest.approx(expect, rel=1e-12)
    assert gap == pytest.approx(sample.upsilon - LOG_2PI)
    assert LOG_2PI == pytest.approx(1.8378770664093453)


def test_limit_at_zero_validates_k():
    with pytest.raises(BadParams):
        limit_at_zero([0])
