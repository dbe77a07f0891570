"""Brjuno sums with rigorous truncation bounds.

Y(alpha) = sum beta_{n-1} log(1/alpha_n) over the residues of either
continued-fraction algorithm: the modified algorithm gives the paper's
Y_{1/2}, the classical one gives Y_1.  No finite prefix of a continued
fraction bounds the tail of this series, so a finite tail bound always
rests on a declared entry bound (TailAssumption); without one the
result carries an infinite sentinel.

For eventually periodic symbol streams the functional equation
Y(alpha) = log(1/alpha_0) + alpha_0 Y(alpha_1) closes the sum exactly:
one period gives Y = S_p / (1 - B_p), and the preperiod folds back one
step at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from .cf_engine import (
    ClassicalExpansion,
    Expansion,
    McfExpansion,
    SymbolLike,
    _as_pairs,
    classical_expand,
    mcf_expand,
)
from .errors import BadParams, TerminatedInput
from .numeric_kernel import (
    PrecisionCtx,
    QuadSurd,
    Rational,
    RealValue,
    _mobius_apply,
    _periodic_fixed_point,
    value_as_mpf,
)

#: sum_{k>=n} beta_{k-1}/beta_{n-1}: modified residues are <= 1/2 so the
#: ratio sum is <= 2; classical residues only satisfy
#: alpha_k alpha_{k+1} < 1/2, which gives <= 4 by pairing terms.
_TAIL_FACTOR = {"modified": 2, "classical": 4}


@dataclass(frozen=True)
class TailAssumption:
    """Declared bound on all continued-fraction entries (None = none)."""

    a_max: Optional[int] = None

    def __post_init__(self):
        if self.a_max is not None and self.a_max < 2:
            raise BadParams("a_max must be >= 2 when given")


@dataclass(frozen=True)
class BrjunoResult:
    """A Brjuno-sum value with its truncation tail bound.

    When the tail assumption holds, the true sum lies in
    [value, value + tail_bound]; periodic closed forms report
    tail_bound = 0, rational inputs report an infinite tail.
    """

    value: mpf
    tail_bound: mpf
    depth: int
    algorithm: str
    terminated: bool


def brjuno_eval(
    exp: Expansion,
    tail: TailAssumption = TailAssumption(),
    ctx: PrecisionCtx = PrecisionCtx(),
) -> BrjunoResult:
    """Partial Brjuno sum of an expansion plus a tail bound.

    tail_bound = factor * beta_{depth-1} * log(a_max + 1), where the
    factor is 2 for modified and 4 for classical residues (see module
    notes); infinite when no entry bound is declared.  A terminated
    (rational) input returns its partial sum flagged `terminated`: such
    numbers are not Brjuno.
    """
    if exp.entry_count < 1 and not exp.terminated:
        raise BadParams("expansion must carry at least one step")
    algorithm = exp.algorithm
    if tail.a_max is not None:
        for n in range(1, exp.entry_count + 1):
            if exp.entry(n) > tail.a_max:
                raise BadParams(
                    f"observed entry a_{n} = {exp.entry(n)} exceeds the "
                    f"declared bound {tail.a_max}"
                )
    with mpmath.workprec(ctx.bits):
        alphas = exp.alphas_mpf(ctx.bits)
        if exp.terminated:
            alphas = alphas[:-1]  # drop the exact zero
            depth = len(alphas)
        else:
            depth = exp.depth
            alphas = alphas[:depth]
        betas = [mpf(1)]
        total = mpf(0)
        for n, a in enumerate(alphas):
            total += betas[-1] * mpmath.log(1 / a)
            betas.append(betas[-1] * a)
        if exp.terminated:
            return BrjunoResult(total, mpf("inf"), depth, algorithm, True)
        if tail.a_max is None:
            bound = mpf("inf")
        else:
            bound = _TAIL_FACTOR[algorithm] * betas[depth] * mpmath.log(tail.a_max + 1)
        return BrjunoResult(total, bound, depth, algorithm, False)


def brjuno_periodic(
    a0: int,
    preperiod: Sequence[SymbolLike],
    period: Sequence[SymbolLike],
    ctx: PrecisionCtx = PrecisionCtx(),
) -> BrjunoResult:
    """Exact modified Brjuno value of an eventually periodic stream.

    The value depends only on the residues, so a0 (and the overall
    sign) do not enter; they are accepted for interface symmetry with
    the stream type.  tail_bound is 0.
    """
    pre = _as_pairs(preperiod)
    per = _as_pairs(period)
    if not per:
        raise BadParams("period must be nonempty")
    p = len(per)
    with mpmath.workprec(ctx.bits + 32):
        # residues along the period: fixed points of the rotated blocks
        per_residues = []
        for j in range(p):
            rot = per[j:] + per[:j]
            per_residues.append(value_as_mpf(_periodic_fixed_point(rot), ctx.bits + 32))
        # Y of the purely periodic point: one period of the functional
        # equation gives Y = S / (1 - B)
        S = mpf(0)
        prod = mpf(1)
        for a in per_residues:
            S += prod * mpmath.log(1 / a)
            prod *= a
        y = S / (1 - prod)
        # fold back through the preperiod residues
        fp0 = _periodic_fixed_point(per)
        for k in range(len(pre) - 1, -1, -1):
            a_k = value_as_mpf(_mobius_apply(pre[k:], fp0), ctx.bits + 32)
            y = mpmath.log(1 / a_k) + a_k * y
        y = +y
    return BrjunoResult(y, mpf(0), len(pre) + p, "modified", False)


def functional_residual(
    alpha: RealValue,
    depth: int,
    ctx: PrecisionCtx = PrecisionCtx(),
) -> mpf:
    """|Y(alpha) - log(1/alpha_0) - alpha_0 Y(alpha_1)| at matched depths.

    Y(alpha) is evaluated at depth+1 and Y(alpha_1) at depth, so the
    identity is exact for the partial sums and the residual measures
    only rounding; it must in particular stay below the sum of the two
    tail bounds.
    """
    if depth < 1:
        raise BadParams("depth must be >= 1")
    e = mcf_expand(alpha, depth + 1, ctx)
    if e.terminated:
        raise TerminatedInput("rational input has no functional equation")
    alpha0 = e.alphas[0]
    alpha1 = e.alphas[1]
    if not isinstance(alpha0, (Rational, QuadSurd)):
        raise BadParams("functional_residual requires an exact backend")
    y_full = brjuno_eval(e, TailAssumption(), ctx).value
    e1 = mcf_expand(alpha1, depth, ctx)
    y_shift = brjuno_eval(e1, TailAssumption(), ctx).value
    with mpmath.workprec(ctx.bits):
        a0 = value_as_mpf(alpha0, ctx.bits)
        res = abs(y_full - mpmath.log(1 / a0) - a0 * y_shift)
    return res


def y_gap(
    alpha: RealValue,
    depth: int,
    tail: TailAssumption = TailAssumption(),
    ctx: PrecisionCtx = PrecisionCtx(),
) -> Tuple[mpf, mpf]:
    """Y_1(alpha) - Y_{1/2}(alpha) and the combined tail bound."""
    mod = brjuno_eval(mcf_expand(alpha, depth, ctx), tail, ctx)
    cls = brjuno_eval(classical_expand(alpha, depth, ctx), tail, ctx)
    if mod.terminated or cls.terminated:
        raise TerminatedInput("rational input: the gap is undefined")
    return cls.value - mod.value, cls.tail_bound + mod.tail_bound
