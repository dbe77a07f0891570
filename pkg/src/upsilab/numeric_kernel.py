"""Real-number backends with controlled precision, and the logarithmic
metric on [-1/2, 1/2].

A value enters the library through one of four backends:

* ``Rational`` -- an exact fraction,
* ``QuadSurd`` -- an exact quadratic irrational (a + b*sqrt(d))/c,
* ``BigBall``  -- an arbitrary-precision float with an error radius,
* ``SymbolStream`` -- a value defined by its own continued-fraction
  symbols (exact when a periodic suffix is given).

Continued-fraction digits destroy precision, so every numeric answer is
either exact or carries a radius; "precision exhausted" is an error, not
silent drift.  Exact backends are closed under x -> 1/x - a and x -> -x,
which is all the expansion engine needs.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mpf

from .errors import (
    AmbiguousBall,
    BadParams,
    NotRefinable,
    OutOfRange,
)

DEFAULT_BITS = int(os.environ.get("UPSILAB_BITS", "192"))

HALF = Fraction(1, 2)

#: The logarithmic metric returns plain mpmath floats; the length of
#: [-1/2, 1/2] in this metric is 1 + log 2.
LogDistance = mpf


@dataclass(frozen=True)
class PrecisionCtx:
    """Working mantissa precision, in bits (>= 64)."""

    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.bits < 64:
            raise BadParams(f"precision must be >= 64 bits, got {self.bits}")


# ---------------------------------------------------------------------------
# square-free reduction


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def _squarefree_split(d: int) -> Tuple[int, int]:
    """Return (f, d0) with d = f*f*d0 and d0 square-free."""
    if d <= 0:
        raise BadParams(f"surd radicand must be positive, got {d}")
    f = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        while d % pp == 0:
            d //= pp
            f *= p
    if d < 47 * 47:
        return f, d
    r = math.isqrt(d)
    if r * r == d:
        return f * r, 1
    if d < 10**10:
        p = 49
        while p * p <= d:
            while d % (p * p) == 0:
                d //= p * p
                f *= p
            p += 2
        return f, d
    # large radicand: fall back to a full factorization
    from sympy import factorint

    for p, e in factorint(d).items():
        if e >= 2:
            f *= p ** (e // 2)
            d //= p ** (2 * (e // 2))
    return f, d


# ---------------------------------------------------------------------------
# backends


@dataclass(frozen=True)
class Rational:
    """An exact rational number."""

    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    # closure operations used by the expansion engine
    def neg(self) -> "Rational":
        return Rational(-self.value)

    def sub_int(self, k: int) -> "Rational":
        return Rational(self.value - k)

    def recip(self) -> "Rational":
        if self.value == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return Rational(1 / self.value)

    def mul_int(self, k: int) -> "Rational":
        return Rational(self.value * k)

    def sign(self) -> int:
        v = self.value
        return (v > 0) - (v < 0)

    def cmp(self, other: Fraction) -> int:
        v = self.value
        return (v > other) - (v < other)

    def floor(self) -> int:
        return math.floor(self.value)

    def to_mpf(self, bits: int) -> Tuple[mpf, mpf]:
        with mpmath.workprec(bits + 8):
            c = mpf(self.value.numerator) / self.value.denominator
            rad = abs(c) * mpf(2) ** (-bits - 4) + mpf(2) ** (-bits - 4)
        return c, rad

    def __str__(self):
        return f"rat:{self.value.numerator}/{self.value.denominator}"


@dataclass(frozen=True)
class QuadSurd:
    """The exact quadratic irrational (a + b*sqrt(d))/c.

    Invariants: c > 0, b != 0, d >= 2 square-free, gcd(a, b, c) = 1.
    Use :func:`make_surd` to build one; it normalizes and falls back to
    ``Rational`` for degenerate data.
    """

    a: int
    b: int
    c: int
    d: int

    def _parts(self) -> Tuple[Fraction, Fraction]:
        return Fraction(self.a, self.c), Fraction(self.b, self.c)

    def neg(self) -> "QuadSurd":
        return QuadSurd(-self.a, -self.b, self.c, self.d)

    def sub_int(self, k: int) -> "QuadSurd":
        return QuadSurd(self.a - k * self.c, self.b, self.c, self.d)

    def mul_int(self, k: int) -> "RealValue":
        if k == 0:
            return Rational(Fraction(0))
        return _surd_from_fracs(Fraction(self.a * k, self.c),
                                Fraction(self.b * k, self.c), self.d)

    def recip(self) -> "QuadSurd":
        A, B = self._parts()
        n = A * A - B * B * self.d
        # n != 0 because sqrt(d) is irrational and b != 0
        return _surd_from_fracs(A / n, -B / n, self.d)

    def sign(self) -> int:
        return self.cmp(Fraction(0))

    def cmp(self, other: Fraction) -> int:
        """Exact comparison with a rational; never returns 0."""
        # (a + b sqrt(d))/c - p/q  has the sign of  u + v sqrt(d)
        u = self.a * other.denominator - other.numerator * self.c
        v = self.b * other.denominator
        if u == 0:
            return 1 if v > 0 else -1
        if v == 0:
            return 1 if u > 0 else -1
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        lhs = u * u
        rhs = v * v * self.d
        if u > 0:  # v < 0: positive iff u^2 > v^2 d
            return 1 if lhs > rhs else -1
        return 1 if lhs < rhs else -1

    def floor(self) -> int:
        s = math.isqrt(self.b * self.b * self.d)
        num = self.a + (s if self.b > 0 else -(s + 1))
        k = num // self.c
        while self.cmp(Fraction(k + 1)) >= 0:
            k += 1
        while self.cmp(Fraction(k)) < 0:
            k -= 1
        return k

    def to_mpf(self, bits: int) -> Tuple[mpf, mpf]:
        with mpmath.workprec(bits + 16):
            c = (self.a + self.b * mpmath.sqrt(self.d)) / self.c
            rad = abs(c) * mpf(2) ** (-bits - 8) + mpf(2) ** (-bits - 8)
        return c, rad

    def __str__(self):
        return f"surd:({self.a}{self.b:+d}*sqrt({self.d}))/{self.c}"


def _surd_from_fracs(A: Fraction, B: Fraction, d: int) -> "RealValue":
    """Build the value A + B*sqrt(d) in canonical form."""
    f, d0 = _squarefree_split(d)
    B = B * f
    if B == 0 or d0 == 1:
        return Rational(A + B * (d0 if d0 == 1 else 0))
    c = math.lcm(A.denominator, B.denominator)
    a = A.numerator * (c // A.denominator)
    b = B.numerator * (c // B.denominator)
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    return QuadSurd(a // g, b // g, c // g, d0)


def make_surd(a: int, b: int, c: int, d: int) -> "RealValue":
    """(a + b*sqrt(d))/c as a canonical RealValue."""
    if c == 0:
        raise BadParams("surd denominator must be nonzero")
    if c < 0:
        a, b, c = -a, -b, -c
    return _surd_from_fracs(Fraction(a, c), Fraction(b, c), d)


def surd_add(x: QuadSurd, y: QuadSurd) -> "RealValue":
    if x.d != y.d:
        raise BadParams("surd addition requires a common radicand")
    xa, xb = x._parts()
    ya, yb = y._parts()
    return _surd_from_fracs(xa + ya, xb + yb, x.d)


def surd_mul(x: QuadSurd, y: QuadSurd) -> "RealValue":
    if x.d != y.d:
        raise BadParams("surd multiplication requires a common radicand")
    xa, xb = x._parts()
    ya, yb = y._parts()
    return _surd_from_fracs(xa * ya + xb * yb * x.d, xa * yb + xb * ya, x.d)


@dataclass(frozen=True)
class BigBall:
    """center +- radius with arbitrary-precision center."""

    center: mpf
    radius: mpf

    def __post_init__(self):
        # mpf(x) rounds to the *ambient* precision, which would silently
        # degrade high-precision centers; convert only non-mpf inputs
        if not isinstance(self.center, mpf):
            object.__setattr__(self, "center", mpf(self.center))
        if not isinstance(self.radius, mpf):
            object.__setattr__(self, "radius", mpf(self.radius))
        if self.radius < 0:
            raise BadParams("ball radius must be nonnegative")

    def neg(self) -> "BigBall":
        return BigBall(-self.center, self.radius)

    def sub_int(self, k: int) -> "BigBall":
        return BigBall(self.center - k, self.radius)

    def recip(self) -> "BigBall":
        lo = abs(self.center) - self.radius
        if lo <= 0:
            raise AmbiguousBall("ball contains zero; cannot invert")
        with mpmath.workprec(mpmath.mp.prec + 8):
            c = 1 / self.center
            rad = self.radius / (lo * lo) + abs(c) * mpf(2) ** (-mpmath.mp.prec)
        return BigBall(c, rad)

    def sign(self) -> int:
        if self.center - self.radius > 0:
            return 1
        if self.center + self.radius < 0:
            return -1
        raise AmbiguousBall("ball straddles zero")

    def to_mpf(self, bits: int) -> Tuple[mpf, mpf]:
        return self.center, self.radius

    def __str__(self):
        if self.radius > 0:
            bits = max(1, int(-mpmath.log(self.radius, 2)))
        else:
            bits = mpmath.mp.prec
        digits = max(6, int(bits * 0.302) + 2)
        return f"dec:{mpmath.nstr(self.center, digits, strip_zeros=False)}@{bits}"


def _validate_symbol_pairs(symbols: Sequence[Tuple[int, int]]):
    from .errors import InvalidSymbol

    for a, s in symbols:
        if a < 2 or s not in (1, -1):
            raise InvalidSymbol(f"illegal symbol ({a}, {s:+d})")
        if a == 2 and s == -1:
            raise InvalidSymbol("symbol (2, -) cannot occur")


@dataclass(frozen=True)
class SymbolStream:
    """A real defined by its modified continued-fraction symbols.

    ``value = a0 + s0 * [symbols...]`` where the bracket is the value of
    the symbol sequence in (0, 1/2).  When ``period`` is nonempty the
    stream continues periodically and the value is an exact quadratic
    surd (see :meth:`to_exact`); otherwise the value is known only up to
    the fundamental interval of its finite prefix.
    """

    a0: int
    symbols: Tuple[Tuple[int, int], ...]
    period: Tuple[Tuple[int, int], ...] = ()
    s0: int = 1

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(tuple(p) for p in self.symbols))
        object.__setattr__(self, "period", tuple(tuple(p) for p in self.period))
        _validate_symbol_pairs(self.symbols)
        _validate_symbol_pairs(self.period)
        if self.s0 not in (1, -1):
            raise BadParams("s0 must be +1 or -1")

    @property
    def exact(self) -> bool:
        return bool(self.period)

    def to_exact(self) -> "RealValue":
        """Resolve a periodic stream to its exact value."""
        if not self.period:
            raise NotRefinable("aperiodic symbol stream has no exact value")
        t = _periodic_fixed_point(self.period)
        x = _mobius_apply(self.symbols, t)
        if self.s0 < 0:
            x = x.neg()
        return x.sub_int(-self.a0)

    def prefix_interval(self) -> Tuple[Fraction, Fraction]:
        """Exact rational interval containing the value (from the finite
        prefix alone)."""
        lo = _mobius_apply_fraction(self.symbols, Fraction(0))
        hi = _mobius_apply_fraction(self.symbols, HALF)
        if self.s0 < 0:
            lo, hi = -hi, -lo
        lo, hi = lo + self.a0, hi + self.a0
        return (lo, hi) if lo <= hi else (hi, lo)

    def to_mpf(self, bits: int) -> Tuple[mpf, mpf]:
        if self.period:
            return self.to_exact().to_mpf(bits)
        lo, hi = self.prefix_interval()
        with mpmath.workprec(bits + 8):
            c = (mpf(lo.numerator) / lo.denominator + mpf(hi.numerator) / hi.denominator) / 2
            rad = (mpf(hi.numerator) / hi.denominator - mpf(lo.numerator) / lo.denominator) / 2
            rad += abs(c) * mpf(2) ** (-bits - 4)
        return c, rad

    def __str__(self):
        body = ",".join(f"({a},{'+' if s > 0 else '-'})" for a, s in self.symbols)
        out = f"sym:{self.a0};[{body}]"
        if self.period:
            per = ",".join(f"({a},{'+' if s > 0 else '-'})" for a, s in self.period)
            out += f";per:[{per}]"
        return out


RealValue = Union[Rational, QuadSurd, BigBall, SymbolStream]

EXACT_BACKENDS = (Rational, QuadSurd)


# ---------------------------------------------------------------------------
# Moebius helpers shared with cf_engine (each symbol (a, s) acts as
# t -> 1/(a + s*t), an integer 2x2 matrix of determinant -s)


def mobius_matrix(symbols: Sequence[Tuple[int, int]]) -> Tuple[int, int, int, int]:
    """Product matrix (p, p1, q, q1): tail t maps to (p*t + p1)/(q*t + q1).

    Symbol k is applied innermost-last, so the composition is
    m_1 o m_2 o ... o m_n with m_k(t) = 1/(a_k + s_k t).
    """
    p, p1, q, q1 = 1, 0, 0, 1
    for a, s in symbols:
        p, p1, q, q1 = p1 * s, p + p1 * a, q1 * s, q + q1 * a
    return p, p1, q, q1


def _mobius_apply_fraction(symbols: Sequence[Tuple[int, int]], t: Fraction) -> Fraction:
    p, p1, q, q1 = mobius_matrix(symbols)
    num = p * t.numerator + p1 * t.denominator
    den = q * t.numerator + q1 * t.denominator
    return Fraction(num, den)


def _mobius_apply(symbols: Sequence[Tuple[int, int]], t: RealValue) -> RealValue:
    p, p1, q, q1 = mobius_matrix(symbols)
    if isinstance(t, Rational):
        return Rational(_mobius_apply_fraction(symbols, t.value))
    if isinstance(t, QuadSurd):
        A, B = t._parts()
        n0, n1 = p * A + p1, p * B  # numerator  n0 + n1*sqrt(d)
        d0, d1 = q * A + q1, q * B  # denominator d0 + d1*sqrt(d)
        norm = d0 * d0 - d1 * d1 * t.d
        if norm == 0:
            raise BadParams("Moebius denominator vanished")
        return _surd_from_fracs(
            (n0 * d0 - n1 * d1 * t.d) / norm, (n1 * d0 - n0 * d1) / norm, t.d
        )
    if isinstance(t, BigBall):
        # the map is monotone on [0, 1/2] (no pole there for valid
        # symbols), so the image of a tail interval is the interval
        # between the images of its endpoints
        with mpmath.workprec(mpmath.mp.prec + 16):
            ends = []
            for e in (t.center - t.radius, t.center + t.radius):
                ends.append((p * e + p1) / (q * e + q1))
            lo, hi = min(ends), max(ends)
            c = (lo + hi) / 2
            rad = (hi - lo) / 2 + abs(c) * mpf(2) ** (-mpmath.mp.prec + 4)
        return BigBall(c, rad)
    raise BadParams(f"cannot apply Moebius map to {type(t).__name__}")


def _periodic_fixed_point(period: Sequence[Tuple[int, int]]) -> RealValue:
    """The value in (0, 1/2) fixed by the periodic symbol block."""
    p, p1, q, q1 = mobius_matrix(period)
    # t = (p t + p1)/(q t + q1):  q t^2 + (q1 - p) t - p1 = 0
    if q == 0:
        raise BadParams("degenerate periodic block")
    A, B, C = q, q1 - p, -p1
    disc = B * B - 4 * A * C
    if disc <= 0:
        raise BadParams("periodic block has no real fixed point")
    root = make_surd(-B, 1, 2 * A, disc)
    if isinstance(root, Rational):
        raise BadParams("periodic block fixed point degenerates to a rational")
    if not (root.cmp(Fraction(0)) > 0 and root.cmp(HALF) < 0):
        root = make_surd(-B, -1, 2 * A, disc)
    if isinstance(root, Rational) or not (
        root.cmp(Fraction(0)) > 0 and root.cmp(HALF) <= 0
    ):
        raise BadParams("periodic block fixed point lies outside (0, 1/2)")
    return root


# ---------------------------------------------------------------------------
# operations


def nearest_residue(x: RealValue) -> Tuple[int, RealValue]:
    """Split x = a + r with a integer and r in [-1/2, 1/2).

    The interval is closed on the left, so exactly-half values round up:
    nearest_residue(1/2) == (1, -1/2).
    """
    if isinstance(x, Rational):
        a = math.floor(x.value + HALF)
        return a, Rational(x.value - a)
    if isinstance(x, QuadSurd):
        shifted = QuadSurd(2 * x.a + x.c, 2 * x.b, 2 * x.c, x.d)  # x + 1/2
        a = shifted.floor()
        return a, x.sub_int(a)
    if isinstance(x, BigBall):
        lo = x.center - x.radius
        hi = x.center + x.radius
        klo = mpmath.floor(lo + mpf(0.5))
        khi = mpmath.floor(hi + mpf(0.5))
        if klo != khi:
            raise AmbiguousBall(
                "ball straddles a half-integer; refine the input precision"
            )
        a = int(klo)
        return a, BigBall(x.center - a, x.radius)
    if isinstance(x, SymbolStream):
        if x.period:
            return nearest_residue(x.to_exact())
        return x.a0, SymbolStream(0, x.symbols, x.period, x.s0)
    raise BadParams(f"unsupported value type {type(x).__name__}")


def _range_check(v: mpf, rad: mpf, name: str):
    if abs(v) - rad > HALF + mpf(2) ** (-mpmath.mp.prec + 4):
        raise OutOfRange(f"{name} lies outside [-1/2, 1/2]")


def _as_mpf_pair(x, bits: int) -> Tuple[mpf, mpf]:
    """Coerce a RealValue / Fraction / float to (center, radius)."""
    if isinstance(x, (Rational, QuadSurd, BigBall, SymbolStream)):
        return x.to_mpf(bits)
    if isinstance(x, Fraction):
        return Rational(x).to_mpf(bits)
    if isinstance(x, (int, float, mpf)):
        return mpf(x), mpf(0)
    raise BadParams(f"cannot interpret {type(x).__name__} as a real value")


def value_as_mpf(x, bits: int = DEFAULT_BITS) -> mpf:
    """Numeric value of any backend at the requested precision."""
    return _as_mpf_pair(x, bits)[0]


def _dlog_antiderivative(t: mpf) -> mpf:
    """F(t) = integral of -log(u) du from 0 to t, for t in [0, 1/2]."""
    if t == 0:
        return mpf(0)
    return t * (1 - mpmath.log(t))


def _exact_out_of_range(x) -> bool:
    if isinstance(x, (Rational, QuadSurd)):
        return x.cmp(HALF) > 0 or x.cmp(-HALF) < 0
    if isinstance(x, Fraction):
        return abs(x) > HALF
    return False


def d_log(x, y, ctx: PrecisionCtx = PrecisionCtx()) -> LogDistance:
    """Distance on [-1/2, 1/2] for the metric ds = |log|t|| |dt|.

    Closed form through the antiderivative F(t) = t(1 - log t):
    same-sign arguments give |F(|x|) - F(|y|)|, opposite signs add the
    two contributions (the path passes through 0).
    """
    if _exact_out_of_range(x):
        raise OutOfRange("x lies outside [-1/2, 1/2]")
    if _exact_out_of_range(y):
        raise OutOfRange("y lies outside [-1/2, 1/2]")
    with mpmath.workprec(ctx.bits):
        vx, rx = _as_mpf_pair(x, ctx.bits)
        vy, ry = _as_mpf_pair(y, ctx.bits)
        _range_check(vx, rx, "x")
        _range_check(vy, ry, "y")
        ax, ay = min(abs(vx), mpf(0.5)), min(abs(vy), mpf(0.5))
        if vx * vy >= 0:
            out = abs(_dlog_antiderivative(ax) - _dlog_antiderivative(ay))
        else:
            out = _dlog_antiderivative(ax) + _dlog_antiderivative(ay)
    return out


def dlog_holder_constant(a: float) -> float:
    """The best constant M_a with d_log(x,y) <= M_a |x-y|^a on [-1/2,1/2].

    The ratio is maximized either by symmetric opposite-sign pairs
    (x, -x) or by same-sign pairs anchored at 0; both reduce to
    maximizing g(t) = t^(1-a) (1 - log t), whose critical point is
    t* = exp(1 - 1/(1-a)).
    """
    if not 0 < a < 1:
        raise BadParams("Hoelder exponent must lie in (0, 1)")

    def g(t: float) -> float:
        return t ** (1 - a) * (1 - math.log(t))

    t_star = math.exp(1 - 1 / (1 - a))
    cands = [g(0.5)]
    if 0 < t_star <= 0.5:
        cands.append(g(t_star))
    # the symmetric opposite-sign pair carries the extra 2^(1-a) factor
    return 2 ** (1 - a) * max(cands)


def refine(x: RealValue, ctx: PrecisionCtx) -> BigBall:
    """Re-express x as a ball of radius <= 2^(-bits+2) * max(1, |x|)."""
    bits = ctx.bits
    if isinstance(x, (Rational, QuadSurd)):
        c, rad = x.to_mpf(bits)
        return BigBall(c, rad)
    if isinstance(x, SymbolStream):
        if x.period:
            return refine(x.to_exact(), ctx)
        c, rad = x.to_mpf(bits)
        target = mpf(2) ** (-bits + 2) * max(mpf(1), abs(c))
        if rad > target:
            raise NotRefinable(
                "aperiodic symbol stream is too short for the requested precision"
            )
        return BigBall(c, rad)
    if isinstance(x, BigBall):
        target = mpf(2) ** (-bits + 2) * max(mpf(1), abs(x.center))
        if x.radius > target:
            raise NotRefinable("ball is already wider than the requested precision")
        return x
    raise BadParams(f"unsupported value type {type(x).__name__}")


# ---------------------------------------------------------------------------
# the alpha-spec text grammar


_RAT_RE = re.compile(r"^rat:(-?\d+)(?:/(\d+))?$")
_SURD_RE = re.compile(
    r"^surd:\((-?\d+)([+-]\d+)\*sqrt\((\d+)\)\)/(\d+)([+-]\d+)?$"
)
_DEC_RE = re.compile(r"^dec:(-?\d+(?:\.\d+)?)@(\d+)$")
_SYM_RE = re.compile(r"^sym:(-?\d+);\[([^\]]*)\](?:;per:\[([^\]]*)\])?$")
_PAIR_RE = re.compile(r"\((\d+),([+-])\)")


def _parse_pairs(body: str) -> Tuple[Tuple[int, int], ...]:
    body = body.strip()
    if not body:
        return ()
    pairs = _PAIR_RE.findall(body)
    rebuilt = ",".join(f"({a},{s})" for a, s in pairs)
    if rebuilt != body.replace(" ", ""):
        raise BadParams(f"cannot parse symbol list {body!r}")
    return tuple((int(a), 1 if s == "+" else -1) for a, s in pairs)


def parse_alpha(text: str) -> RealValue:
    """Parse the alpha-spec grammar used by the CLI.

    Forms: ``rat:p/q``, ``surd:(a+b*sqrt(d))/c`` (optional trailing
    integer offset), ``dec:<decimal>@<bits>``, and
    ``sym:a0;[(a1,s1),...]`` with an optional ``;per:[...]`` suffix.
    """
    text = text.strip()
    m = _RAT_RE.match(text)
    if m:
        p, q = int(m.group(1)), int(m.group(2) or 1)
        if q == 0:
            raise BadParams("rational denominator must be nonzero")
        return Rational(Fraction(p, q))
    m = _SURD_RE.match(text)
    if m:
        a, b, d, c = int(m.group(1)), int(m.group(2)), int(m.group(3)), int(m.group(4))
        off = int(m.group(5) or 0)
        return make_surd(a + off * c, b, c, d)
    m = _DEC_RE.match(text)
    if m:
        dec, bits = m.group(1), int(m.group(2))
        if bits < 1:
            raise BadParams("dec precision must be positive")
        with mpmath.workprec(max(bits, 64) + 8):
            frac = Fraction(dec)
            c = mpf(frac.numerator) / frac.denominator
        return BigBall(c, mpf(2) ** (-bits))
    m = _SYM_RE.match(text)
    if m:
        a0 = int(m.group(1))
        symbols = _parse_pairs(m.group(2))
        period = _parse_pairs(m.group(3)) if m.group(3) else ()
        return SymbolStream(a0, symbols, period)
    raise BadParams(f"unrecognized alpha spec {text!r}")


def format_alpha(x: RealValue) -> str:
    """Canonical alpha-spec text for a value (inverse of parse_alpha on
    exact backends)."""
    return str(x)
