"""Linearization series of quadratic polynomials, conformal-radius
estimation, the explicit fixed-point and covering-map formulas, and the
assembly of the error function Upsilon = log r + Y.

For P_alpha(z) = e^(2 pi i alpha) z + z^2 the linearizing map
phi(w) = sum b_n w^n with b_1 = 1 satisfies phi(lambda w) = P(phi(w)),
which pins down the coefficients through

    b_n = (sum_{j=1}^{n-1} b_j b_{n-j}) / (lambda^n - lambda).

The divisors lambda^n - lambda shrink like the distance from (n-1)alpha
to the integers, so the required precision is checked in advance from
the exact orbit of alpha and the job aborts rather than emit noise.
The radius of convergence of phi is the conformal radius of the Siegel
disk; it is estimated two ways (least-squares slope of log|b_n| and a
Hadamard max) so instability shows up as disagreement.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .brjuno import BrjunoResult, TailAssumption, brjuno_eval
from .cf_engine import mcf_expand
from .errors import (
    BadParams,
    DegenerateSeries,
    PoleAtLattice,
    PrecisionExhausted,
    RationalRotation,
)
from .numeric_kernel import (
    BigBall,
    PrecisionCtx,
    QuadSurd,
    Rational,
    RealValue,
    SymbolStream,
    format_alpha,
    nearest_residue,
    value_as_mpf,
)

LOG_27_16 = mpmath.log(mpf(27) / 16)


@dataclass(frozen=True)
class LinearizationSeries:
    """Coefficients b_1..b_N of the linearizing map of P_alpha."""

    alpha: RealValue
    lam: mpc
    coeffs: Tuple[mpc, ...]  # coeffs[n] = b_n; index 0 unused
    N: int
    bits: int
    min_divisor: float


@dataclass(frozen=True)
class RadiusEstimate:
    """Conformal-radius estimate with stability diagnostics.

    r_hat comes from the least-squares slope of log|b_n| over the top
    half of the series; alt_hadamard from the max of |b_n|^(1/n) on the
    same window.  fit_residual is the RMS of the linear fit and
    slope_stderr the standard error of its slope; log_gap is
    |log r_hat - log alt_hadamard|.
    """

    r_hat: float
    window: Tuple[int, int]
    fit_residual: float
    alt_hadamard: float
    slope_stderr: float
    log_gap: float


@dataclass(frozen=True)
class UpsilonSample:
    """One evaluation of Upsilon = log r + Y with diagnostics.

    err adds the Brjuno tail bound to the radius-fit residual expressed
    as the standard error of the fitted slope.  The slope/Hadamard gap
    stays a separate diagnostic: it tracks the finite-N bias of the
    radius, which is strongly correlated between nearby rotation
    numbers and would wrongly exclude close pairs from difference
    measurements.
    """

    alpha: RealValue
    Y: BrjunoResult
    log_r: float
    upsilon: float
    series_N: int
    precision_bits: int
    err: float
    family: str
    radius: RadiusEstimate


def _exact_int_multiple_distance(alpha: RealValue, m: int) -> Optional[Fraction]:
    """dist(m*alpha, Z) as an exact Fraction bound, or None if irrational
    (then the caller uses numerics); exact zero detection for rationals."""
    if isinstance(alpha, Rational):
        v = alpha.value * m
        r = v - Fraction(math.floor(v + Fraction(1, 2)))
        return abs(r)
    return None


def _divisor_distances(alpha: RealValue, N: int, bits: int) -> List[mpf]:
    """delta_m = dist(m*alpha, Z) for m = 1..N-1, from the exact backend
    where possible.  Rational alpha yields exact zeros (parabolic
    divisors); balls must be narrow enough to decide every m."""
    out = []
    if isinstance(alpha, SymbolStream) and alpha.period:
        alpha = alpha.to_exact()
    if isinstance(alpha, Rational):
        for m in range(1, N):
            d = _exact_int_multiple_distance(alpha, m)
            out.append(mpf(d.numerator) / d.denominator)
        return out
    if isinstance(alpha, QuadSurd):
        with mpmath.workprec(bits + 16):
            sq = mpmath.sqrt(alpha.d)
            av = (alpha.a + alpha.b * sq) / alpha.c
            for m in range(1, N):
                x = av * m
                out.append(abs(x - mpmath.nint(x)))
        return out
    if isinstance(alpha, BigBall):
        with mpmath.workprec(bits + 16):
            for m in range(1, N):
                x = alpha.center * m
                d = abs(x - mpmath.nint(x))
                if m * alpha.radius * 4 > max(d, mpf(2) ** (-bits)):
                    raise PrecisionExhausted(
                        f"ball too wide to resolve dist({m} alpha, Z)"
                    )
                out.append(d)
        return out
    raise BadParams(f"unsupported alpha backend {type(alpha).__name__}")


def linearize(
    alpha: RealValue, N: int, ctx: PrecisionCtx = PrecisionCtx()
) -> LinearizationSeries:
    """Coefficients of the linearizing power series of P_alpha.

    Requires every divisor |lambda^n - lambda|, n <= N, to exceed
    2^(-bits/4); raises PrecisionExhausted otherwise, and
    RationalRotation at the first exactly-parabolic divisor.
    """
    if N < 2:
        raise BadParams("need N >= 2")
    bits = ctx.bits
    deltas = _divisor_distances(alpha, N, bits)
    rational_at = None
    min_div = None
    for m, d in enumerate(deltas, start=1):
        if d == 0:
            rational_at = m + 1 if rational_at is None else rational_at
            continue
        div = 2 * mpmath.sin(mpmath.pi * d)
        if min_div is None or div < min_div:
            min_div = div
    if min_div is not None and min_div <= mpf(2) ** (-bits / 4):
        raise PrecisionExhausted(
            f"smallest divisor {mpmath.nstr(min_div, 5)} is below the "
            f"2^(-bits/4) threshold at {bits} bits; raise ctx.bits"
        )
    with mpmath.workprec(bits):
        x = value_as_mpf(alpha, bits)
        # e^(-2 pi i |x|) is exactly the conjugate of e^(2 pi i |x|);
        # building lambda that way keeps the whole series exactly
        # conjugation-symmetric under alpha -> -alpha (small divisors
        # would amplify a last-ulp asymmetry enormously)
        if x < 0:
            lam = mpmath.conj(mpmath.expjpi(-2 * x))
        else:
            lam = mpmath.expjpi(2 * x)
        b: List[mpc] = [mpc(0), mpc(1)]
        lam_pow = lam
        for n in range(2, N + 1):
            lam_pow = lam_pow * lam
            if rational_at is not None and n >= rational_at and deltas[n - 2] == 0:
                raise RationalRotation(
                    f"lambda^{n} = lambda: rotation number is rational"
                )
            half = n // 2
            s = mpc(0)
            for j in range(1, half + (n % 2)):
                s += b[j] * b[n - j]
            s = 2 * s
            if n % 2 == 0:
                s += b[half] * b[half]
            b.append(s / (lam_pow - lam))
        return LinearizationSeries(
            alpha=alpha,
            lam=lam,
            coeffs=tuple(b),
            N=N,
            bits=bits,
            min_divisor=float(min_div) if min_div is not None else float("inf"),
        )


def recurrence_residual(series: LinearizationSeries, n: int) -> float:
    """Relative residual of the defining recurrence at index n.

    |b_n| grows like r^-n, so the residual is scaled by the magnitude of
    the convolution; the absolute residual would be meaningless."""
    if not 2 <= n <= series.N:
        raise BadParams("index outside the series")
    with mpmath.workprec(series.bits + 16):
        lam = series.lam
        b = series.coeffs
        s = mpc(0)
        for j in range(1, n):
            s += b[j] * b[n - j]
        lhs = (lam**n - lam) * b[n]
        scale = max(abs(s), mpf(1))
        return float(abs(lhs - s) / scale)


def estimate_radius(series: LinearizationSeries) -> RadiusEstimate:
    """Radius of convergence from the top half of the coefficients."""
    if series.N < 64:
        raise BadParams("need N >= 64 for a stable window")
    n_lo, n_hi = series.N // 2, series.N
    ns = np.arange(n_lo, n_hi + 1, dtype=float)
    logs = []
    with mpmath.workprec(64):
        for n in range(n_lo, n_hi + 1):
            a = abs(series.coeffs[n])
            if a == 0:
                raise DegenerateSeries(f"|b_{n}| = 0 inside the fit window")
            logs.append(float(mpmath.log(a)))
    ys = np.array(logs)
    xbar = ns.mean()
    ybar = ys.mean()
    sxx = float(((ns - xbar) ** 2).sum())
    slope = float(((ns - xbar) * (ys - ybar)).sum()) / sxx
    resid = ys - (ybar + slope * (ns - xbar))
    rms = float(np.sqrt((resid**2).mean()))
    stderr = rms / math.sqrt(sxx)
    r_hat = math.exp(-slope)
    hadamard = math.exp(-float((ys / ns).max()))
    return RadiusEstimate(
        r_hat=r_hat,
        window=(n_lo, n_hi),
        fit_residual=rms,
        alt_hadamard=hadamard,
        slope_stderr=stderr,
        log_gap=abs(math.log(r_hat) - math.log(hadamard)),
    )


def sigma_fixed_point(alpha, ctx: PrecisionCtx = PrecisionCtx()) -> mpc:
    """The distinguished nonzero fixed point of
    Q_alpha(z) = e^(2 pi i alpha) z + (27/16) e^(4 pi i alpha) z^2:
    sigma = (1 - e^(2 pi i alpha)) * 16 e^(-4 pi i alpha) / 27."""
    with mpmath.workprec(ctx.bits):
        x = value_as_mpf(alpha, ctx.bits) if not isinstance(alpha, (int, float, mpf)) else mpf(alpha)
        lam = mpmath.expjpi(2 * x)
        return (1 - lam) * 16 * mpmath.expjpi(-4 * x) / 27


def q_alpha(z: mpc, alpha, ctx: PrecisionCtx = PrecisionCtx()) -> mpc:
    """Q_alpha(z), the quadratic normalized to critical value -4/27."""
    with mpmath.workprec(ctx.bits):
        x = value_as_mpf(alpha, ctx.bits) if not isinstance(alpha, (int, float, mpf)) else mpf(alpha)
        lam = mpmath.expjpi(2 * x)
        return lam * z + mpf(27) / 16 * lam * lam * z * z


def covering_tau(alpha, w: mpc, ctx: PrecisionCtx = PrecisionCtx()) -> mpc:
    """tau(w) = sigma_alpha / (1 - e^(-2 pi i alpha w)): the covering of
    the two-punctured plane with deck transformation w -> w + 1/alpha.

    tau -> 0 as Im w -> +infinity and tau -> sigma_alpha as
    Im w -> -infinity; poles sit on the lattice Z/alpha."""
    with mpmath.workprec(ctx.bits):
        x = value_as_mpf(alpha, ctx.bits) if not isinstance(alpha, (int, float, mpf)) else mpf(alpha)
        if x == 0:
            raise BadParams("alpha must be nonzero")
        den = 1 - mpmath.exp(-2j * mpmath.pi * x * mpc(w))
        if abs(den) < mpf(2) ** (-ctx.bits + 16):
            raise PoleAtLattice("w lies on (or too close to) the lattice Z/alpha")
        return sigma_fixed_point(alpha, ctx) / den


def upsilon(
    alpha: RealValue,
    N: int,
    depth: int,
    tail: TailAssumption,
    ctx: PrecisionCtx = PrecisionCtx(),
    family: str = "P",
) -> UpsilonSample:
    """Upsilon(alpha) = log r_hat + Y_{1/2}(alpha) for P_alpha.

    family="Q" subtracts the exact bridge log(27/16), since
    r(P_alpha) = (27/16) r(Q_alpha)."""
    if family not in ("P", "Q"):
        raise BadParams("family must be 'P' or 'Q'")
    series = linearize(alpha, N, ctx)
    rad = estimate_radius(series)
    exp = mcf_expand(alpha, depth, ctx)
    y = brjuno_eval(exp, tail, ctx)
    log_r = math.log(rad.r_hat)
    if family == "Q":
        log_r -= float(LOG_27_16)
    ups = log_r + float(y.value)
    err = float(y.tail_bound) + rad.slope_stderr
    return UpsilonSample(
        alpha=alpha,
        Y=y,
        log_r=log_r,
        upsilon=ups,
        series_N=N,
        precision_bits=ctx.bits,
        err=err,
        family=family,
        radius=rad,
    )


def dump_coefficients(series: LinearizationSeries, path: str) -> None:
    """Binary coefficient dump: one JSON header line, then b_1..b_N as
    little-endian x87 extended pairs (numpy longdouble; magnitudes
    beyond its range degrade to inf)."""
    header = json.dumps(
        {
            "alpha_spec": format_alpha(series.alpha),
            "N": series.N,
            "bits": series.bits,
            "format": "little-endian float128 (x87 extended) re,im pairs",
        },
        sort_keys=True,
    )
    arr = np.empty(2 * series.N, dtype=np.longdouble)
    with mpmath.workprec(80):
        for n in range(1, series.N + 1):
            c = series.coeffs[n]
            arr[2 * (n - 1)] = np.longdouble(mpmath.nstr(c.real, 24))
            arr[2 * (n - 1) + 1] = np.longdouble(mpmath.nstr(c.imag, 24))
    with open(path, "wb") as fh:
        fh.write(header.encode() + b"\n")
        fh.write(arr.astype("<g" if np.dtype("g").itemsize == 16 else np.longdouble).tobytes())
