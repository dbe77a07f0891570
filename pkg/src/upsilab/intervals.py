"""Fundamental and extended fundamental intervals with exact rational
endpoints, distortion measurement, and the split-generation analysis of
pairs of nearby irrationals.

A generation-n fundamental interval collects the reals sharing the
symbol prefix (a_0, s_0), ..., (a_n, s_n); the coding map H_n sends it
bijectively onto (0, 1/2).  The extended interval glues the two
fundamental intervals whose final symbols are (a, +) and (a+1, -): that
union is exactly a maximal set on which H_{n+1} is continuous.

Endpoints are images of the tails 0 and 1/2 under an integer Moebius
map, so everything here is exact rational arithmetic; adjacency is
decided by endpoint equality, never numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from .cf_engine import Expansion, McfExpansion, McfSymbol, SymbolLike, _as_pairs, mcf_expand
from .errors import BadParams, EqualInputs, InvalidSymbol, Undecided
from .numeric_kernel import (
    HALF,
    PrecisionCtx,
    QuadSurd,
    Rational,
    RealValue,
    _mobius_apply_fraction,
    mobius_matrix,
    value_as_mpf,
)


@dataclass(frozen=True)
class FundInterval:
    """A fundamental (or extended fundamental) interval, exactly."""

    generation: int
    a0: int
    s0: int
    symbols: Tuple[McfSymbol, ...]
    lo: Fraction
    hi: Fraction
    extended: bool

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: RealValue) -> bool:
        if isinstance(x, (Rational, QuadSurd)):
            return x.cmp(self.lo) > 0 and x.cmp(self.hi) < 0
        v = value_as_mpf(x, 128)
        return self.lo < v < self.hi

    def symbol_string(self) -> str:
        inner = "".join(str(s) for s in self.symbols)
        return f"(a0={self.a0},{'+' if self.s0 > 0 else '-'}){inner}"


@dataclass(frozen=True)
class DistortionReport:
    """Measured distortion of H_n on one interval.

    The derivative ratio |H_n'(x)/H_n'(y)| equals
    (beta_{n-1}(y)/beta_{n-1}(x))^2 and extends continuously to the
    closed interval, where it is monotone in the tail coordinate; with
    the boundary tails included the reported constant is the exact
    supremum over the interval.
    """

    generation: int
    sup_ratio: float
    inf_ratio: float
    implied_C: float
    grid: int


@dataclass(frozen=True)
class SplitReport:
    """Where two expansions first part ways.

    case A: the generation-n0 intervals are adjacent with final symbols
    (a, +) and (a, -); then n1 = n0 + 2.  Case B covers everything else
    with n1 = n0 + 1.  Inputs are permuted so alpha_{n0} > alpha'_{n0};
    `swapped` records whether that happened.
    """

    n0: int
    n1: int
    case: str
    swapped: bool
    c_hat: float
    lower_bound_witness: Fraction
    upper_bound_witness: Optional[Fraction]


def _endpoints(a0: int, pairs: Sequence[Tuple[int, int]], s0: int) -> Tuple[Fraction, Fraction]:
    lo = _mobius_apply_fraction(pairs, Fraction(0))
    hi = _mobius_apply_fraction(pairs, HALF)
    if s0 < 0:
        lo, hi = -lo, -hi
    lo, hi = lo + a0, hi + a0
    return (lo, hi) if lo <= hi else (hi, lo)


def _partner_pairs(pairs: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Final symbols (a,+) and (a+1,-) share an extended interval."""
    a, s = pairs[-1]
    if s > 0:
        partner = (a + 1, -1)
    else:
        partner = (a - 1, 1)
    return list(pairs[:-1]) + [partner]


def fundamental_interval(
    a0: int,
    symbols: Sequence[SymbolLike],
    extended: bool = False,
    s0: int = 1,
) -> FundInterval:
    """Exact interval of reals whose expansion starts with the given
    symbols.  Generation 0 (no symbols) is the residue half-interval of
    (a0, s0); `extended` glues in the partner interval."""
    if s0 not in (1, -1):
        raise BadParams("s0 must be +1 or -1")
    pairs = _as_pairs(symbols)
    n = len(pairs)
    if n == 0:
        if extended:
            lo, hi = (Fraction(a0), Fraction(a0 + 1)) if s0 > 0 else (
                Fraction(a0 - 1), Fraction(a0))
        else:
            lo, hi = (Fraction(a0), Fraction(a0) + HALF) if s0 > 0 else (
                Fraction(a0) - HALF, Fraction(a0))
        return FundInterval(0, a0, s0, (), lo, hi, extended)
    lo, hi = _endpoints(a0, pairs, s0)
    if extended:
        plo, phi = _endpoints(a0, _partner_pairs(pairs), s0)
        lo, hi = min(lo, plo), max(hi, phi)
    syms = tuple(McfSymbol(a, s) for a, s in pairs)
    return FundInterval(n, a0, s0, syms, lo, hi, extended)


def length_ratio(iv: FundInterval, beta_prev: RealValue) -> float:
    """|I| / (beta_{n-1}^2 / 2), the distortion-normalized length."""
    b = value_as_mpf(beta_prev, 128)
    num = mpf(iv.length.numerator) / iv.length.denominator
    return float(num / (b * b / 2))


def _weight_range(pairs: Sequence[Tuple[int, int]], grid: int) -> Tuple[Fraction, Fraction]:
    """min/max of |q t + q1| over the tail grid (endpoints included)."""
    _, _, q, q1 = mobius_matrix(pairs)
    ws = []
    for i in range(grid + 1):
        t = Fraction(i, 2 * grid)
        ws.append(abs(q * t + q1))
    return min(ws), max(ws)


def measure_distortion(
    a0: int,
    symbols: Sequence[SymbolLike],
    grid: int = 16,
    s0: int = 1,
) -> DistortionReport:
    """Sup/inf of |H_n'(x)/H_n'(y)| over a tail grid on one interval.

    Computed exactly as ((q t_y + q1)/(q t_x + q1))^2; the boundary
    tails t = 0, 1/2 are part of the grid, so sup_ratio is the exact
    supremum over the closed interval.
    """
    if grid < 2:
        raise BadParams("grid must be >= 2")
    pairs = _as_pairs(symbols)
    wmin, wmax = _weight_range(pairs, grid)
    sup = float(Fraction(wmax, wmin) ** 2)
    return DistortionReport(
        generation=len(pairs),
        sup_ratio=sup,
        inf_ratio=1.0 / sup,
        implied_C=math.log(sup),
        grid=grid,
    )


def interval_distortion_constant(pairs: Sequence[Tuple[int, int]]) -> float:
    """Exact distortion constant C of H_n on one fundamental interval
    (endpoint weights give the true sup)."""
    wmin, wmax = _weight_range(pairs, 2)
    return 2.0 * float(mpmath.log(mpf(wmax.numerator) * wmin.denominator)
                       - mpmath.log(mpf(wmin.numerator) * wmax.denominator))


def enumerate_generation(
    a0: int,
    prefix: Sequence[SymbolLike],
    a_max: int,
    s0: int = 1,
) -> List[FundInterval]:
    """All next-generation fundamental intervals below a prefix, with
    entries up to a_max, ordered by position on the line."""
    pairs = _as_pairs(prefix)
    out = []
    for a in range(2, a_max + 1):
        for s in (1, -1):
            if a == 2 and s == -1:
                continue
            out.append(fundamental_interval(a0, pairs + [(a, s)], s0=s0))
    return sorted(out, key=lambda iv: iv.lo)


def intervals_to_csv(intervals: Sequence[FundInterval]) -> str:
    lines = ["# upsilab csv schema: intervals/v1",
             "generation,symbols,lo,hi,length"]
    for iv in intervals:
        lines.append(
            f"{iv.generation},{iv.symbol_string()},{iv.lo},{iv.hi},{iv.length}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# split generation


def _sequence_of(exp: McfExpansion) -> List[Tuple[int, int]]:
    return [(exp.a0, exp.s0)] + [sym.pair() for sym in exp.symbols]


def _cmp_values(x: RealValue, y: RealValue) -> int:
    """Exact-where-possible comparison of two backend values."""
    if isinstance(x, Rational) and isinstance(y, Rational):
        return (x.value > y.value) - (x.value < y.value)
    if isinstance(x, QuadSurd) and isinstance(y, Rational):
        return x.cmp(y.value)
    if isinstance(x, Rational) and isinstance(y, QuadSurd):
        return -y.cmp(x.value)
    if isinstance(x, QuadSurd) and isinstance(y, QuadSurd) and x.d == y.d:
        from .numeric_kernel import surd_add

        diff = surd_add(x, y.neg())
        return diff.sign() if isinstance(diff, QuadSurd) else (
            (diff.value > 0) - (diff.value < 0))
    for bits in (128, 256, 1024):
        xc, xr = x.to_mpf(bits)
        yc, yr = y.to_mpf(bits)
        if xc - xr > yc + yr:
            return 1
        if xc + xr < yc - yr:
            return -1
    raise BadParams("values are numerically indistinguishable at 1024 bits")


def split_generation(
    alpha: RealValue,
    alpha_p: RealValue,
    maxdepth: int,
    ctx: PrecisionCtx = PrecisionCtx(),
) -> SplitReport:
    """First generation n0 at which two expansions take different
    symbols, the case A/B classification, and the separation witnesses.

    The upper witness is the length of the shared extended interval of
    generation n0 - 1 (absent when n0 = 0); the lower witness is
    2 e^(-4C) beta_{n1}^2 with C measured on the intervals actually
    involved up to generation n1.
    """
    if alpha == alpha_p:
        raise EqualInputs("split_generation requires distinct inputs")
    e1 = mcf_expand(alpha, maxdepth, ctx)
    e2 = mcf_expand(alpha_p, maxdepth, ctx)
    if e1.terminated or e2.terminated:
        raise BadParams("split_generation requires irrational-backed inputs")
    seq1, seq2 = _sequence_of(e1), _sequence_of(e2)
    n0 = None
    for k in range(min(len(seq1), len(seq2))):
        if seq1[k] != seq2[k]:
            n0 = k
            break
    if n0 is None:
        if _cmp_values(alpha, alpha_p) == 0:
            raise EqualInputs("inputs agree to working precision")
        raise Undecided(f"symbol sequences agree through depth {maxdepth}")

    iv1 = _interval_at(e1, n0)
    iv2 = _interval_at(e2, n0)
    adjacent = iv1.hi == iv2.lo or iv2.hi == iv1.lo
    a1, s1 = seq1[n0]
    a2, s2 = seq2[n0]
    case_a = adjacent and a1 == a2 and {s1, s2} == {1, -1}
    n1 = n0 + 2 if case_a else n0 + 1

    if e1.depth < n1:
        e1 = mcf_expand(alpha, n1, ctx)
        e2 = mcf_expand(alpha_p, n1, ctx)

    swapped = _cmp_values(e1.alphas[n0], e2.alphas[n0]) < 0
    lead = e2 if swapped else e1

    upper = None
    if n0 > 0:
        shared = _sequence_of(lead)
        prefix = [p for p in shared[1 : n0]]
        upper = fundamental_interval(
            lead.a0, prefix, extended=True, s0=lead.s0
        ).length

    c_hat = 0.0
    for exp in (e1, e2):
        seq = _sequence_of(exp)
        for k in range(n1 + 1):
            pairs = [p for p in seq[1 : k + 1]]
            if not pairs:
                continue
            c_hat = max(c_hat, interval_distortion_constant(pairs))
            c_hat = max(c_hat, interval_distortion_constant(_partner_pairs(pairs)))

    with mpmath.workprec(320):
        beta_n1 = mpf(1)
        for a in lead.alphas_mpf(320)[: n1 + 1]:
            beta_n1 *= a
        wit = 2 * mpmath.exp(-4 * c_hat) * beta_n1 * beta_n1
        wit = wit * (1 - mpf(2) ** -300)
        lower = Fraction(*mpmath.libmp.to_rational(wit._mpf_))

    return SplitReport(
        n0=n0,
        n1=n1,
        case="A" if case_a else "B",
        swapped=swapped,
        c_hat=c_hat,
        lower_bound_witness=lower,
        upper_bound_witness=upper,
    )


def _interval_at(exp: McfExpansion, n: int) -> FundInterval:
    seq = _sequence_of(exp)
    if n == 0:
        return fundamental_interval(exp.a0, [], s0=exp.s0)
    pairs = [p for p in seq[1 : n + 1]]
    return fundamental_interval(exp.a0, pairs, s0=exp.s0)
