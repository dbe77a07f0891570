"""Empirical verification of the quantitative arithmetic bounds: the
weighted-residue sum lemma, the beta-difference bound, the 1/2-Hoelder
modulus of Upsilon on high-type numbers, and the limit of Upsilon at 0.

Constants are measured, never asserted against invented targets:
acceptance is stability of the measured value under refinement (deeper
truncation, longer series, fresh seeds).  Pair sampling mixes "far"
pairs (independent symbol streams) with "near" pairs that share a
prefix and then diverge, the latter forced through both the adjacent
same-entry split (case A) and the other splits (case B).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from .brjuno import TailAssumption
from .cf_engine import (
    McfExpansion,
    mcf_expand,
    mcf_symbol_choices,
    value_from_prefix,
)
from .errors import BadParams, EqualInputs, InsufficientPrecision
from .intervals import SplitReport, split_generation
from .numeric_kernel import (
    PrecisionCtx,
    RealValue,
    format_alpha,
    make_surd,
    value_as_mpf,
)
from .siegel import UpsilonSample, upsilon

LOG_2PI = float(mpmath.log(2 * mpmath.pi))


@dataclass(frozen=True)
class SumLemmaReport:
    """One evaluation of sum beta_{j-1} |alpha_j - alpha'_j|^a against
    |alpha - alpha'|^(1/2)."""

    a_exponent: float
    lhs: float
    rhs_base: float
    ratio: float
    truncation_depth: int
    truncation_error_bound: float


@dataclass(frozen=True)
class HolderReport:
    """Result of a pairwise Upsilon modulus scan."""

    pairs_evaluated: int
    excluded: int
    max_ratio: float
    quantiles: Tuple[Tuple[float, float], ...]
    worst_pair: Tuple[str, str]
    exponent: float


@dataclass(frozen=True)
class PairSamplerConfig:
    """How high-type pairs are drawn.

    Near pairs share a random prefix of length in
    [near_share_min, near_share_max] and then diverge; pair kinds cycle
    far / near-case-A / near-case-B / near-random so both split cases
    always appear.
    """

    N: int = 3
    a_max: int = 6
    prefix_depth: int = 8
    near_share_min: int = 1
    near_share_max: int = 6
    signs: str = "both"


@dataclass(frozen=True)
class UpsilonConfig:
    """Parameters for one Upsilon evaluation inside a scan."""

    series_N: int = 1024
    depth: int = 40
    bits: int = 192
    a_max: Optional[int] = None  # defaults to the sampler bound
    family: str = "P"


def sample_pairs(
    cfg: PairSamplerConfig, count: int, seed: int
) -> List[Tuple[RealValue, RealValue, str]]:
    """Deterministic list of (alpha, alpha', kind) pairs."""
    rng = random.Random(seed)
    choices = mcf_symbol_choices(cfg.N, cfg.a_max, cfg.signs)
    neg_ok = [a for a in range(max(cfg.N, 3), cfg.a_max + 1)]
    kinds = ("far", "nearA", "nearB", "near")
    out: List[Tuple[RealValue, RealValue, str]] = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        if kind == "far" or (kind in ("nearA", "nearB") and not neg_ok):
            kind = "far"
            while True:
                p1 = [rng.choice(choices) for _ in range(cfg.prefix_depth)]
                p2 = [rng.choice(choices) for _ in range(cfg.prefix_depth)]
                if p1 != p2:
                    break
            out.append((value_from_prefix(p1), value_from_prefix(p2), kind))
            continue
        share = rng.randint(cfg.near_share_min, cfg.near_share_max)
        shared = [rng.choice(choices) for _ in range(share)]
        if kind == "nearA":
            a = rng.choice(neg_ok)
            div1, div2 = (a, 1), (a, -1)
        elif kind == "nearB":
            cand = [a for a in neg_ok if a + 1 <= cfg.a_max]
            if cand:
                a = rng.choice(cand)
                div1, div2 = (a, 1), (a + 1, -1)
            else:  # single-entry alphabet: no distinct-entry split exists
                a = neg_ok[0]
                div1, div2 = (a, 1), (a, -1)
        else:
            while True:
                div1, div2 = rng.choice(choices), rng.choice(choices)
                if div1 != div2:
                    break
        cont1 = [rng.choice(choices) for _ in range(2)]
        cont2 = [rng.choice(choices) for _ in range(2)]
        out.append(
            (
                value_from_prefix(shared + [div1] + cont1),
                value_from_prefix(shared + [div2] + cont2),
                kind,
            )
        )
    return out


def _abs_diff(x: RealValue, y: RealValue, bits: int) -> mpf:
    with mpmath.workprec(bits):
        return abs(value_as_mpf(x, bits) - value_as_mpf(y, bits))


def sum_lemma_check(
    alpha: RealValue,
    alpha_p: RealValue,
    a: float,
    depth: int,
    ctx: PrecisionCtx = PrecisionCtx(),
) -> SumLemmaReport:
    """sum_{j=1}^{depth} beta_{j-1}(alpha) |alpha_j - alpha'_j|^a versus
    |alpha - alpha'|^(1/2).

    The truncation error is at most 2 beta_depth (1/2)^a since every
    omitted |alpha_j - alpha'_j| is below 1/2.
    """
    if not 0.5 < a < 1:
        raise BadParams("exponent a must lie in (1/2, 1)")
    if alpha == alpha_p:
        raise EqualInputs("sum_lemma_check requires distinct inputs")
    e1 = mcf_expand(alpha, depth, ctx)
    e2 = mcf_expand(alpha_p, depth, ctx)
    if e1.terminated or e2.terminated:
        raise BadParams("inputs must be irrational-backed")
    with mpmath.workprec(ctx.bits):
        al1 = e1.alphas_mpf(ctx.bits)
        al2 = e2.alphas_mpf(ctx.bits)
        be1 = e1.betas_mpf(ctx.bits)
        lhs = mpf(0)
        for j in range(1, depth + 1):
            lhs += be1[j] * abs(al1[j] - al2[j]) ** a
        dist = abs(value_as_mpf(alpha, ctx.bits) - value_as_mpf(alpha_p, ctx.bits))
        rhs = mpmath.sqrt(dist)
        trunc = 2 * be1[depth + 1] * mpf(0.5) ** a
    return SumLemmaReport(
        a_exponent=a,
        lhs=float(lhs),
        rhs_base=float(rhs),
        ratio=float(lhs / rhs),
        truncation_depth=depth,
        truncation_error_bound=float(trunc),
    )


def beta_diff_check(
    alpha: RealValue,
    alpha_p: RealValue,
    depth: int,
    ctx: PrecisionCtx = PrecisionCtx(),
) -> Tuple[float, float]:
    """(lhs, rhs) of sum |beta_{k-1} - beta'_{k-1}| <= 2 sum beta_{j-1} d_j.

    The inequality holds term by term for every truncation depth, since
    each partial geometric factor sum is below 2.
    """
    if alpha == alpha_p:
        raise EqualInputs("beta_diff_check requires distinct inputs")
    e1 = mcf_expand(alpha, depth, ctx)
    e2 = mcf_expand(alpha_p, depth, ctx)
    if e1.terminated or e2.terminated:
        raise BadParams("inputs must be irrational-backed")
    with mpmath.workprec(ctx.bits):
        b1 = e1.betas_mpf(ctx.bits)
        b2 = e2.betas_mpf(ctx.bits)
        al1 = e1.alphas_mpf(ctx.bits)
        al2 = e2.alphas_mpf(ctx.bits)
        lhs = mpf(0)
        rhs = mpf(0)
        for k in range(depth + 1):
            lhs += abs(b1[k] - b2[k])
            rhs += b1[k] * abs(al1[k] - al2[k])
        rhs *= 2
    return float(lhs), float(rhs)


@dataclass(frozen=True)
class PairRow:
    """One scanned pair, ready for CSV/JSON emission.

    err is the pairwise exclusion bar: the two Brjuno tails and radius
    slope standard errors plus the two slope/Hadamard gaps (the gaps
    bound the finite-N bias of each radius; only differences of nearby
    biases cancel, so the pair bar must carry both).
    """

    alpha_spec: str
    alpha_p_spec: str
    kind: str
    dist: float
    d_upsilon: float
    ratio: float
    err: float
    included: bool
    stat_err: float  # tails + slope standard errors only
    gap_a: float  # slope/Hadamard gap of the first sample
    gap_b: float  # and of the second


def holder_scan(
    pair_count: int,
    seed: int,
    exponent: float = 0.5,
    sampler: PairSamplerConfig = PairSamplerConfig(),
    ups: UpsilonConfig = UpsilonConfig(),
) -> Tuple[HolderReport, List[PairRow]]:
    """max over pairs of |Upsilon(a) - Upsilon(a')| / |a - a'|^exponent.

    Pairs whose combined error bars exceed the measured difference are
    excluded (and counted); if everything is excluded the scan raises
    InsufficientPrecision.
    """
    if pair_count < 1:
        raise BadParams("pair_count must be >= 1")
    pairs = sample_pairs(sampler, pair_count, seed)
    tail = TailAssumption(ups.a_max if ups.a_max is not None else sampler.a_max)
    ctx = PrecisionCtx(ups.bits)
    rows: List[PairRow] = []
    cache = {}

    def _ups(v: RealValue) -> UpsilonSample:
        key = format_alpha(v)
        if key not in cache:
            cache[key] = upsilon(v, ups.series_N, ups.depth, tail, ctx, ups.family)
        return cache[key]

    for va, vb, kind in pairs:
        ua, ub = _ups(va), _ups(vb)
        dist = float(_abs_diff(va, vb, ups.bits))
        d_ups = abs(ua.upsilon - ub.upsilon)
        stat = ua.err + ub.err
        err = stat + ua.radius.log_gap + ub.radius.log_gap
        included = dist > 0 and d_ups > err
        ratio = d_ups / dist**exponent if dist > 0 else float("nan")
        rows.append(
            PairRow(
                alpha_spec=format_alpha(va),
                alpha_p_spec=format_alpha(vb),
                kind=kind,
                dist=dist,
                d_upsilon=d_ups,
                ratio=ratio,
                err=err,
                included=included,
                stat_err=stat,
                gap_a=ua.radius.log_gap,
                gap_b=ub.radius.log_gap,
            )
        )
    included_rows = [r for r in rows if r.included]
    if not included_rows:
        raise InsufficientPrecision("all pairs were excluded by error bars")
    ratios = sorted(r.ratio for r in included_rows)
    worst = max(included_rows, key=lambda r: r.ratio)

    def _q(p: float) -> float:
        return ratios[min(len(ratios) - 1, int(p * (len(ratios) - 1) + 0.5))]

    report = HolderReport(
        pairs_evaluated=len(rows),
        excluded=len(rows) - len(included_rows),
        max_ratio=worst.ratio,
        quantiles=((0.5, _q(0.5)), (0.9, _q(0.9)), (0.99, _q(0.99))),
        worst_pair=(worst.alpha_spec, worst.alpha_p_spec),
        exponent=exponent,
    )
    return report, rows


def limit_at_zero(
    k_list: Sequence[int],
    ups: UpsilonConfig = UpsilonConfig(),
    series_scale: int = 4,
) -> List[Tuple[RealValue, UpsilonSample, float]]:
    """Upsilon along alpha_k = 1/(10^k + t), t the (3,-)-periodic surd.

    alpha_k -> 0 inside the high-type class; the limit of Upsilon(P) at
    0 is log(4 pi / |P''(0)|) = log(2 pi).  The series length grows with
    10^k so the estimator window sees the resonance structure; the
    documented failure mode for large k is PrecisionExhausted (the
    divisors shrink with alpha).
    """
    from .cf_engine import reconstruct

    out = []
    tail_surd = make_surd(3, -1, 2, 5)  # (3 - sqrt 5)/2, the (3,-) fixed point
    for k in k_list:
        if k < 1:
            raise BadParams("k must be >= 1")
        alpha_k = reconstruct(0, [(10**k, 1)], tail_surd)
        n_series = max(ups.series_N, series_scale * 10**k)
        tail = TailAssumption(max(10**k, 3))
        s = upsilon(alpha_k, n_series, ups.depth, tail, PrecisionCtx(ups.bits), ups.family)
        out.append((alpha_k, s, s.upsilon - LOG_2PI))
    return out


def windowed_max_trend(
    xs: Sequence[float], ys: Sequence[float], bins: int = 6
) -> Tuple[float, float, List[Tuple[float, float]]]:
    """Slope (and its standard error) of windowed maxima of ys against
    -log10(xs): positive slope means the quantity grows as x -> 0.

    Points are ordered by x and cut into `bins` equal-count windows; the
    regression runs on (median -log10 x, max y) per window.
    """
    if len(xs) != len(ys) or len(xs) < bins:
        raise BadParams("need at least one point per window")
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    per = len(xs) // bins
    pts = []
    for b in range(bins):
        idx = order[b * per : (b + 1) * per if b < bins - 1 else len(xs)]
        mx = max(ys[i] for i in idx)
        med = sorted(-math.log10(xs[i]) for i in idx)[len(idx) // 2]
        pts.append((med, mx))
    n = len(pts)
    xbar = sum(p[0] for p in pts) / n
    ybar = sum(p[1] for p in pts) / n
    sxx = sum((p[0] - xbar) ** 2 for p in pts)
    if sxx == 0:
        raise BadParams("degenerate windows: all distances equal")
    slope = sum((p[0] - xbar) * (p[1] - ybar) for p in pts) / sxx
    resid2 = sum((p[1] - ybar - slope * (p[0] - xbar)) ** 2 for p in pts)
    stderr = math.sqrt(resid2 / max(n - 2, 1) / sxx)
    return slope, stderr, pts


def split_consistency(
    alpha: RealValue,
    alpha_p: RealValue,
    maxdepth: int = 60,
) -> Tuple[SplitReport, bool]:
    """Check the weak separation bound 2 e^(-4C) beta_{n1}^2 <= |a - a'|
    with the measured distortion constant; returns (report, holds)."""
    rep = split_generation(alpha, alpha_p, maxdepth)
    dist = _abs_diff(alpha, alpha_p, 256)
    lower = mpf(rep.lower_bound_witness.numerator) / rep.lower_bound_witness.denominator
    return rep, bool(lower <= dist)
