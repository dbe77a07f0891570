"""Modified (nearest-integer) and classical continued fractions.

The modified algorithm iterates G(x) = d(1/x, Z), the distance to the
nearest integer, producing entries a_n >= 2 with signs s_n; the pair
(2, -) can never occur.  The classical algorithm iterates the Gauss map
1/x - floor(1/x).  Expansions of exact backends stay exact: the orbit
of a quadratic surd remains inside its field, so every residue alpha_n
is again a surd and periodic inputs reproduce bit for bit.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mpf

from .errors import (
    AmbiguousBall,
    BadParams,
    BoundaryUndefined,
    InvalidSymbol,
    PrecisionExhausted,
)
from .numeric_kernel import (
    HALF,
    BigBall,
    PrecisionCtx,
    QuadSurd,
    Rational,
    RealValue,
    SymbolStream,
    _mobius_apply,
    _mobius_apply_fraction,
    _periodic_fixed_point,
    nearest_residue,
    surd_mul,
    value_as_mpf,
)


@dataclass(frozen=True)
class McfSymbol:
    """One modified continued-fraction digit (a, s): a >= 2, s = +-1."""

    a: int
    s: int

    def __post_init__(self):
        if self.a < 2 or self.s not in (1, -1):
            raise InvalidSymbol(f"illegal symbol ({self.a}, {self.s:+d})")
        if self.a == 2 and self.s == -1:
            raise InvalidSymbol("symbol (2, -) cannot occur")

    def pair(self) -> Tuple[int, int]:
        return (self.a, self.s)

    def __str__(self):
        return f"({self.a},{'+' if self.s > 0 else '-'})"


SymbolLike = Union[McfSymbol, Tuple[int, int]]


def _as_pairs(symbols: Sequence[SymbolLike]) -> List[Tuple[int, int]]:
    out = []
    for sym in symbols:
        if isinstance(sym, McfSymbol):
            out.append(sym.pair())
        else:
            a, s = sym
            McfSymbol(int(a), int(s))  # validate
            out.append((int(a), int(s)))
    return out


def _exact_mul(x: RealValue, y: RealValue) -> RealValue:
    if isinstance(x, Rational) and isinstance(y, Rational):
        return Rational(x.value * y.value)
    if isinstance(x, Rational):
        x, y = y, x
    if isinstance(y, Rational):
        return _scale(x, y.value)
    return surd_mul(x, y)


def _scale(x: QuadSurd, f: Fraction) -> RealValue:
    from .numeric_kernel import _surd_from_fracs

    A, B = x._parts()
    return _surd_from_fracs(A * f, B * f, x.d)


def _ball_mul(x: BigBall, y: BigBall) -> BigBall:
    c = x.center * y.center
    rad = (
        abs(x.center) * y.radius
        + abs(y.center) * x.radius
        + x.radius * y.radius
        + abs(c) * mpf(2) ** (-mpmath.mp.prec + 2)
    )
    return BigBall(c, rad)


class ExpansionBase:
    """Shared behaviour of modified and classical expansions."""

    @property
    def betas(self) -> Tuple[RealValue, ...]:
        """(beta_-1, beta_0, ...) with beta_-1 = 1, computed lazily:
        products of surds grow tall, and most consumers only need
        floating-point values."""
        if self._betas is None:
            out: List[RealValue] = [Rational(Fraction(1))]
            for a in self.alphas:
                if isinstance(out[-1], BigBall) or isinstance(a, BigBall):
                    out.append(_ball_mul(_to_ball(out[-1]), _to_ball(a)))
                else:
                    out.append(_exact_mul(out[-1], a))
            object.__setattr__(self, "_betas", tuple(out))
        return self._betas

    def alphas_mpf(self, bits: int) -> List[mpf]:
        """Numeric residues alpha_0, alpha_1, ... at the given precision."""
        sq = {}
        out = []
        with mpmath.workprec(bits + 16):
            for a in self.alphas:
                if isinstance(a, QuadSurd):
                    if a.d not in sq:
                        sq[a.d] = mpmath.sqrt(a.d)
                    out.append((a.a + a.b * sq[a.d]) / a.c)
                else:
                    out.append(value_as_mpf(a, bits + 16))
        return out

    def betas_mpf(self, bits: int) -> List[mpf]:
        """Numeric (beta_-1, beta_0, ...) at the given precision."""
        out = [mpf(1)]
        with mpmath.workprec(bits + 16):
            for a in self.alphas_mpf(bits):
                out.append(out[-1] * a)
        return out

    def entry(self, n: int) -> int:
        """The integer entry a_n for n >= 1."""
        raise NotImplementedError

    @property
    def entry_count(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class McfExpansion(ExpansionBase):
    """Modified continued-fraction data of a real number.

    ``alphas[n]`` is the exact residue alpha_n (alpha_0 included); for a
    terminated (rational) input the final residue 0 is included and
    ``terminal_entry`` records the last exact division.
    """

    a0: int
    s0: Optional[int]
    symbols: Tuple[McfSymbol, ...]
    alphas: Tuple[RealValue, ...]
    terminated: bool
    depth: int
    terminal_entry: Optional[int] = None
    algorithm: str = "modified"
    _betas: Optional[Tuple[RealValue, ...]] = field(
        default=None, repr=False, compare=False
    )

    def entry(self, n: int) -> int:
        return self.symbols[n - 1].a

    @property
    def entry_count(self) -> int:
        return len(self.symbols)

    def to_json_dict(self, digits: int = 30) -> dict:
        return {
            "algorithm": self.algorithm,
            "a0": self.a0,
            "s0": self.s0,
            "symbols": [[sym.a, sym.s] for sym in self.symbols],
            "alphas": [mpmath.nstr(value_as_mpf(a, 128), digits) for a in self.alphas],
            "betas": [mpmath.nstr(b, digits) for b in self.betas_mpf(128)],
            "terminated": self.terminated,
            "terminal_entry": self.terminal_entry,
            "depth": self.depth,
        }


@dataclass(frozen=True)
class ClassicalExpansion(ExpansionBase):
    """Classical (Gauss-map) continued-fraction data."""

    a0: int
    entries: Tuple[int, ...]
    alphas: Tuple[RealValue, ...]
    terminated: bool
    depth: int
    terminal_entry: Optional[int] = None
    algorithm: str = "classical"
    _betas: Optional[Tuple[RealValue, ...]] = field(
        default=None, repr=False, compare=False
    )

    def entry(self, n: int) -> int:
        return self.entries[n - 1]

    @property
    def entry_count(self) -> int:
        return len(self.entries)

    def to_json_dict(self, digits: int = 30) -> dict:
        return {
            "algorithm": self.algorithm,
            "a0": self.a0,
            "entries": list(self.entries),
            "alphas": [mpmath.nstr(value_as_mpf(a, 128), digits) for a in self.alphas],
            "betas": [mpmath.nstr(b, digits) for b in self.betas_mpf(128)],
            "terminated": self.terminated,
            "terminal_entry": self.terminal_entry,
            "depth": self.depth,
        }


Expansion = Union[McfExpansion, ClassicalExpansion]


def _to_ball(x: RealValue, bits: int = 0) -> BigBall:
    if isinstance(x, BigBall):
        return x
    c, r = x.to_mpf(bits or mpmath.mp.prec)
    return BigBall(c, r)


def _is_zero(x: RealValue) -> bool:
    if isinstance(x, Rational):
        return x.value == 0
    if isinstance(x, QuadSurd):
        return False
    if isinstance(x, BigBall):
        if x.center == 0 and x.radius == 0:
            return True
        try:
            x.sign()
            return False
        except AmbiguousBall:
            raise PrecisionExhausted(
                "ball residue cannot be distinguished from zero"
            )
    return False


def mcf_expand(alpha: RealValue, depth: int, ctx: PrecisionCtx = PrecisionCtx()) -> McfExpansion:
    """Expand alpha through G(x) = d(1/x, Z) for `depth` symbols.

    Exact backends yield exact residues; a ball input raises
    PrecisionExhausted as soon as a symbol would be uncertain. A
    rational input terminates with a flag rather than an error.
    """
    if depth < 0:
        raise BadParams("depth must be >= 0")
    if isinstance(alpha, SymbolStream):
        if alpha.period:
            return mcf_expand(alpha.to_exact(), depth, ctx)
        return _expand_stream(alpha, depth)

    with mpmath.workprec(ctx.bits):
        try:
            a0, r0 = nearest_residue(alpha)
        except AmbiguousBall as exc:
            raise PrecisionExhausted(str(exc))
        sgn = _sign_of_residue(r0)
        if sgn == 0:
            return McfExpansion(
                a0=a0, s0=None, symbols=(), alphas=(Rational(Fraction(0)),),
                terminated=True, depth=0, terminal_entry=None,
            )
        s0 = sgn
        cur = r0 if sgn > 0 else r0.neg()
        alphas: List[RealValue] = [cur]
        symbols: List[McfSymbol] = []
        terminal = None
        terminated = False
        for _ in range(depth):
            try:
                inv = cur.recip()
                a, r = nearest_residue(inv)
            except AmbiguousBall:
                raise PrecisionExhausted(
                    "ball too wide for the next symbol; refine the input or reduce depth"
                )
            sgn = _sign_of_residue(r)
            if sgn == 0:
                terminal = a
                terminated = True
                alphas.append(Rational(Fraction(0)))
                break
            symbols.append(McfSymbol(a, sgn))
            cur = r if sgn > 0 else r.neg()
            alphas.append(cur)
        return McfExpansion(
            a0=a0, s0=s0, symbols=tuple(symbols), alphas=tuple(alphas),
            terminated=terminated, depth=len(symbols), terminal_entry=terminal,
        )


def _sign_of_residue(r: RealValue) -> int:
    """Sign of a residue in [-1/2, 1/2); 0 means an exact zero and an
    exact -1/2 raises BoundaryUndefined."""
    if isinstance(r, (Rational, QuadSurd)):
        if isinstance(r, Rational) and r.value == Fraction(-1, 2):
            raise BoundaryUndefined("residue is exactly -1/2; sign undefined")
        return r.sign()
    if isinstance(r, BigBall):
        if _is_zero(r):
            return 0
        try:
            return r.sign()
        except AmbiguousBall:
            raise PrecisionExhausted("ball residue sign is ambiguous")
    if isinstance(r, SymbolStream):
        return r.s0
    raise BadParams(f"unsupported residue type {type(r).__name__}")


def _expand_stream(stream: SymbolStream, depth: int) -> McfExpansion:
    if depth > len(stream.symbols):
        raise PrecisionExhausted(
            f"aperiodic stream defines only {len(stream.symbols)} symbols, "
            f"requested {depth}"
        )
    symbols = [McfSymbol(a, s) for a, s in stream.symbols[:depth]]
    alphas: List[RealValue] = []
    with mpmath.workprec(256):
        for n in range(depth + 1):
            suffix = stream.symbols[n:]
            lo = _mobius_apply_fraction(suffix, Fraction(0))
            hi = _mobius_apply_fraction(suffix, HALF)
            lo, hi = min(lo, hi), max(lo, hi)
            c = (mpf(lo.numerator) / lo.denominator + mpf(hi.numerator) / hi.denominator) / 2
            rad = (mpf(hi.numerator) / hi.denominator - mpf(lo.numerator) / lo.denominator) / 2
            alphas.append(BigBall(c, rad))
    return McfExpansion(
        a0=stream.a0, s0=stream.s0, symbols=tuple(symbols), alphas=tuple(alphas),
        terminated=False, depth=depth, terminal_entry=None,
    )


def classical_expand(
    alpha: RealValue, depth: int, ctx: PrecisionCtx = PrecisionCtx()
) -> ClassicalExpansion:
    """Expand alpha through the Gauss map x -> 1/x - floor(1/x)."""
    if depth < 0:
        raise BadParams("depth must be >= 0")
    if isinstance(alpha, SymbolStream):
        if not alpha.period:
            raise PrecisionExhausted(
                "classical expansion of an aperiodic symbol stream is undefined"
            )
        return classical_expand(alpha.to_exact(), depth, ctx)

    with mpmath.workprec(ctx.bits):
        a0, cur = _floor_split(alpha)
        alphas: List[RealValue] = [cur]
        entries: List[int] = []
        terminal = None
        terminated = False
        if _is_zero(cur):
            return ClassicalExpansion(
                a0=a0, entries=(), alphas=(Rational(Fraction(0)),),
                terminated=True, depth=0,
            )
        for _ in range(depth):
            try:
                inv = cur.recip()
            except AmbiguousBall:
                raise PrecisionExhausted(
                    "ball too wide to invert; refine the input or reduce depth"
                )
            a, r = _floor_split(inv)
            if a < 1:
                raise BadParams("Gauss-map entry < 1; residue out of range")
            if _is_zero(r):
                terminal = a
                terminated = True
                alphas.append(Rational(Fraction(0)))
                break
            entries.append(a)
            cur = r
            alphas.append(cur)
        return ClassicalExpansion(
            a0=a0, entries=tuple(entries), alphas=tuple(alphas),
            terminated=terminated, depth=len(entries), terminal_entry=terminal,
        )


def _floor_split(x: RealValue) -> Tuple[int, RealValue]:
    if isinstance(x, (Rational, QuadSurd)):
        a = x.floor()
        return a, x.sub_int(a)
    if isinstance(x, BigBall):
        lo = x.center - x.radius
        hi = x.center + x.radius
        klo, khi = mpmath.floor(lo), mpmath.floor(hi)
        if klo != khi:
            raise PrecisionExhausted("ball straddles an integer under the Gauss map")
        a = int(klo)
        return a, BigBall(x.center - a, x.radius)
    raise BadParams(f"unsupported value type {type(x).__name__}")


def reconstruct(
    a0: int,
    symbols: Sequence[SymbolLike],
    tail,
    s0: int = 1,
) -> RealValue:
    """Invert the expansion: alpha_{k-1} = 1/(a_k + s_k alpha_k).

    `tail` is the residue after the listed symbols, in [0, 1/2); with an
    exact tail the output is exact.  The value is a0 + s0*(inner value);
    s0 defaults to +1 (the spec grammar does not carry s0).
    """
    pairs = _as_pairs(symbols)
    if isinstance(tail, Fraction):
        tail = Rational(tail)
    if isinstance(tail, (int, float)):
        tail = Rational(Fraction(tail))
    if s0 not in (1, -1):
        raise BadParams("s0 must be +1 or -1")
    if isinstance(tail, (Rational, QuadSurd)):
        if tail.cmp(Fraction(0)) < 0 or tail.cmp(HALF) >= 0:
            raise BadParams("tail must lie in [0, 1/2)")
    x = _mobius_apply(pairs, tail)
    if s0 < 0:
        x = x.neg()
    return x.sub_int(-a0)


class HighTypeResult(NamedTuple):
    is_high_type: bool
    depth_checked: int


def is_high_type(exp: Expansion, N: int) -> HighTypeResult:
    """True iff every computed entry a_n (n >= 1) is >= N.

    Only the computed prefix is inspected; the depth actually checked is
    reported alongside.
    """
    if exp.entry_count == 0 and not exp.terminated:
        raise BadParams("expansion carries no entries")
    count = exp.entry_count
    ok = all(exp.entry(n) >= N for n in range(1, count + 1))
    if exp.terminated and exp.terminal_entry is not None:
        ok = ok and exp.terminal_entry >= N
        count += 1
    return HighTypeResult(ok, count)


def mcf_symbol_choices(N: int, a_max: int, signs: str = "both") -> List[Tuple[int, int]]:
    """All legal modified symbols with N <= a <= a_max."""
    if not (2 <= N <= a_max):
        raise BadParams("need a_max >= N >= 2")
    choices = [(a, 1) for a in range(N, a_max + 1)]
    if signs == "both":
        choices += [(a, -1) for a in range(max(N, 3), a_max + 1)]
    elif signs != "plus":
        raise BadParams("signs must be 'both' or 'plus'")
    return sorted(choices)


def sample_high_type(
    N: int,
    a_max: int,
    depth: int,
    seed: int,
    signs: str = "both",
) -> Tuple[RealValue, McfExpansion]:
    """Draw an exact high-type number with `depth` random symbols.

    The symbol after the drawn prefix repeats the final drawn symbol
    forever, so the value is the exact quadratic surd obtained from the
    fixed point of that symbol; downstream quantities are reproducible
    bit for bit.  Deterministic for a given seed.
    """
    if depth < 1:
        raise BadParams("depth must be >= 1")
    choices = mcf_symbol_choices(N, a_max, signs)
    rng = random.Random(seed)
    pairs = [rng.choice(choices) for _ in range(depth)]
    value = value_from_prefix(pairs)
    return value, mcf_expand(value, depth)


def value_from_prefix(pairs: Sequence[Tuple[int, int]]) -> RealValue:
    """Exact value in (0, 1/2) whose symbols start with `pairs` and then
    repeat the final pair forever."""
    if not pairs:
        raise BadParams("need at least one symbol")
    tail = _periodic_fixed_point(pairs[-1:])
    return _mobius_apply(list(pairs), tail)


def sample_classical_high_type(
    N: int,
    a_max: int,
    depth: int,
    seed: int,
) -> Tuple[RealValue, ClassicalExpansion]:
    """Classical analogue of sample_high_type: entries uniform in
    [N, a_max], value closed up with the fixed point of the last entry."""
    if not (1 <= N <= a_max):
        raise BadParams("need a_max >= N >= 1")
    if depth < 1:
        raise BadParams("depth must be >= 1")
    rng = random.Random(seed)
    entries = [rng.randint(N, a_max) for _ in range(depth)]
    a = entries[-1]
    # fixed point of t = 1/(a + t); the classical map is the s = +1 branch
    from .numeric_kernel import make_surd

    tail = make_surd(-a, 1, 2, a * a + 4)
    value = _mobius_apply([(e, 1) for e in entries], tail)
    return value, classical_expand(value, depth)


def expansion_to_json(exp: Expansion, digits: int = 30) -> str:
    return json.dumps(exp.to_json_dict(digits), sort_keys=True)
