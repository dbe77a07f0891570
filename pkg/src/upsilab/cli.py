"""Command-line front end.

Every library operation is reachable from exactly one subcommand (see
OPERATION_DISPATCH); outputs are byte-stable for a fixed configuration
and seed.  Exit codes: 0 = success, 1 = usage or precision error,
2 = a verified mathematical property failed (the report is still
written before exiting).
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath
from mpmath import mpc, mpf

from . import brjuno as bj
from . import cf_engine as cf
from . import holder_lab as hl
from . import intervals as iv
from . import numeric_kernel as nk
from . import siegel as sg
from .errors import BadParams, UpsilabError

#: spec operation -> the one subcommand that exposes it
OPERATION_DISPATCH = {
    "nearest_residue": "expand",
    "d_log": "verify",
    "refine": "expand",
    "mcf_expand": "expand",
    "classical_expand": "expand",
    "reconstruct": "expand",
    "is_high_type": "expand",
    "sample_high_type": "holder-scan",
    "fundamental_interval": "interval",
    "length_ratio": "interval",
    "measure_distortion": "interval",
    "split_generation": "verify",
    "brjuno_eval": "brjuno",
    "brjuno_periodic": "brjuno",
    "functional_residual": "verify",
    "y_gap": "brjuno",
    "linearize": "radius",
    "estimate_radius": "radius",
    "sigma_fixed_point": "upsilon",
    "covering_tau": "upsilon",
    "upsilon": "upsilon",
    "sum_lemma_check": "verify",
    "beta_diff_check": "verify",
    "holder_scan": "holder-scan",
    "limit_at_zero": "verify",
}

SUBCOMMANDS = ("expand", "brjuno", "interval", "radius", "upsilon", "holder-scan", "verify")

VERIFY_LEMMAS = (
    "distortion",
    "sum-lemma",
    "beta-diff",
    "dlog",
    "functional-eq",
    "limit-zero",
    "subset-ht",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI reserves 2 for property
    violations, so remap usage failures to exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}") from None


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _nstr(x, digits=25) -> str:
    return mpmath.nstr(mpf(x), digits)


def _parse_symbols(text: str) -> List[Tuple[int, int]]:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    return list(nk._parse_pairs(body))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_expand(args) -> int:
    alpha = nk.parse_alpha(args.alpha)
    ctx = nk.PrecisionCtx(args.bits)
    if args.algorithm == "classical":
        exp = cf.classical_expand(alpha, args.depth, ctx)
        entries = list(exp.entries)
    else:
        exp = cf.mcf_expand(alpha, args.depth, ctx)
        entries = [[s.a, s.s] for s in exp.symbols]
    data = exp.to_json_dict()
    if isinstance(alpha, (nk.Rational, nk.QuadSurd)) or (
        isinstance(alpha, nk.SymbolStream) and alpha.period
    ):
        ball = nk.refine(alpha, ctx)
        data["refined_dec"] = str(ball)
    if args.ht_n is not None:
        ht = cf.is_high_type(exp, args.ht_n)
        data["high_type"] = {"N": args.ht_n, "is_high_type": ht.is_high_type,
                             "depth_checked": ht.depth_checked}
    data["alpha_spec"] = args.alpha
    if args.format == "json":
        _emit(_json(data), args.output)
    else:
        lines = ["# upsilab csv schema: expand/v1", "n,entry,sign,alpha_n,beta_prev"]
        alphas = exp.alphas_mpf(128)
        betas = exp.betas_mpf(128)
        for n in range(1, exp.entry_count + 1):
            e = entries[n - 1]
            a, s = (e, 0) if args.algorithm == "classical" else e
            lines.append(f"{n},{a},{s},{_nstr(alphas[n]) if n < len(alphas) else ''},{_nstr(betas[n])}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_brjuno(args) -> int:
    alpha = nk.parse_alpha(args.alpha)
    ctx = nk.PrecisionCtx(args.bits)
    tail = bj.TailAssumption(args.a_max)
    rows = []
    if args.algorithm == "periodic":
        if not isinstance(alpha, nk.SymbolStream) or not alpha.period:
            raise BadParams("--algorithm periodic needs a sym: spec with a per: block")
        res = bj.brjuno_periodic(alpha.a0, alpha.symbols, alpha.period, ctx)
        rows.append(("periodic", res))
    elif args.algorithm == "both":
        rows.append(("modified", bj.brjuno_eval(cf.mcf_expand(alpha, args.depth, ctx), tail, ctx)))
        rows.append(("classical", bj.brjuno_eval(cf.classical_expand(alpha, args.depth, ctx), tail, ctx)))
    else:
        expand = cf.classical_expand if args.algorithm == "classical" else cf.mcf_expand
        rows.append((args.algorithm, bj.brjuno_eval(expand(alpha, args.depth, ctx), tail, ctx)))
    data = {
        "alpha_spec": args.alpha,
        "results": [
            {
                "algorithm": name,
                "value": _nstr(r.value),
                "tail_bound": _nstr(r.tail_bound),
                "depth": r.depth,
                "terminated": r.terminated,
            }
            for name, r in rows
        ],
    }
    if args.algorithm == "both":
        gap = rows[1][1].value - rows[0][1].value
        gerr = rows[0][1].tail_bound + rows[1][1].tail_bound
        data["y_gap"] = {"value": _nstr(gap), "tail_bound": _nstr(gerr)}
    if args.format == "json":
        _emit(_json(data), args.output)
    else:
        lines = ["# upsilab csv schema: brjuno/v1", "alpha,algorithm,depth,value,tail_bound"]
        for name, r in rows:
            lines.append(f"{args.alpha},{name},{r.depth},{_nstr(r.value)},{_nstr(r.tail_bound)}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_interval(args) -> int:
    pairs = _parse_symbols(args.symbols) if args.symbols else ()
    ivs = []
    if args.enumerate_amax:
        ivs = iv.enumerate_generation(args.a0, list(pairs), args.enumerate_amax)
    else:
        ivs = [iv.fundamental_interval(args.a0, list(pairs), extended=args.extended)]
    if args.format == "json":
        data = []
        for f in ivs:
            row = {
                "generation": f.generation,
                "symbols": f.symbol_string(),
                "lo": str(f.lo),
                "hi": str(f.hi),
                "length": str(f.length),
                "extended": f.extended,
            }
            if f.generation >= 1 and not f.extended:
                rep = iv.measure_distortion(f.a0, [s.pair() for s in f.symbols], args.grid, f.s0)
                row["distortion"] = {
                    "grid": rep.grid,
                    "sup_ratio": rep.sup_ratio,
                    "inf_ratio": rep.inf_ratio,
                    "implied_C": rep.implied_C,
                }
            data.append(row)
        _emit(_json(data), args.output)
    else:
        _emit(iv.intervals_to_csv(ivs), args.output)
    return 0


def _cmd_radius(args) -> int:
    alpha = nk.parse_alpha(args.alpha)
    ctx = nk.PrecisionCtx(args.bits)
    series = sg.linearize(alpha, args.series_n, ctx)
    rad = sg.estimate_radius(series)
    if args.dump_coeffs:
        sg.dump_coefficients(series, args.dump_coeffs)
    data = {
        "alpha_spec": args.alpha,
        "series_N": series.N,
        "bits": series.bits,
        "min_divisor": series.min_divisor,
        "r_hat": rad.r_hat,
        "alt_hadamard": rad.alt_hadamard,
        "window": list(rad.window),
        "fit_residual": rad.fit_residual,
        "slope_stderr": rad.slope_stderr,
        "log_gap": rad.log_gap,
    }
    if args.format == "json":
        _emit(_json(data), args.output)
    else:
        lines = ["# upsilab csv schema: radius/v1",
                 "alpha,series_N,bits,r_hat,alt_hadamard,fit_residual,slope_stderr"]
        lines.append(
            f"{args.alpha},{series.N},{series.bits},{rad.r_hat!r},"
            f"{rad.alt_hadamard!r},{rad.fit_residual!r},{rad.slope_stderr!r}"
        )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_upsilon(args) -> int:
    alpha = nk.parse_alpha(args.alpha)
    ctx = nk.PrecisionCtx(args.bits)
    tail = bj.TailAssumption(args.a_max)
    s = sg.upsilon(alpha, args.series_n, args.depth, tail, ctx, args.family)
    # sigma / covering-map diagnostics (their one CLI exposure)
    with mpmath.workprec(args.bits):
        sig = sg.sigma_fixed_point(alpha, ctx)
        fp_res = abs(sg.q_alpha(sig, alpha, ctx) - sig)
        x = nk.value_as_mpf(alpha, args.bits)
        w = mpc(mpf(1) / 3, 2)
        tau_per = abs(
            sg.covering_tau(alpha, w + 1 / x, ctx) - sg.covering_tau(alpha, w, ctx)
        )
    data = {
        "alpha_spec": args.alpha,
        "family": s.family,
        "series_N": s.series_N,
        "bits": s.precision_bits,
        "depth": s.Y.depth,
        "log_r": s.log_r,
        "Y": _nstr(s.Y.value),
        "Y_tail_bound": _nstr(s.Y.tail_bound),
        "upsilon": s.upsilon,
        "err": s.err,
        "sigma": [_nstr(sig.real), _nstr(sig.imag)],
        "sigma_fixed_point_residual": _nstr(fp_res),
        "tau_periodicity_residual": _nstr(tau_per),
    }
    if args.format == "json":
        _emit(_json(data), args.output)
    else:
        lines = ["# upsilab csv schema: upsilon/v1",
                 "alpha,family,series_N,bits,depth,log_r,Y,upsilon,err"]
        lines.append(
            f"{args.alpha},{s.family},{s.series_N},{s.precision_bits},{s.Y.depth},"
            f"{s.log_r!r},{_nstr(s.Y.value)},{s.upsilon!r},{s.err!r}"
        )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_holder_scan(args) -> int:
    sampler = hl.PairSamplerConfig(N=args.n_hightype, a_max=args.a_max,
                                   prefix_depth=args.prefix_depth)
    ups = hl.UpsilonConfig(series_N=args.series_n, depth=args.depth, bits=args.bits)
    report, rows = hl.holder_scan(args.pairs, args.seed, args.exponent, sampler, ups)
    if args.format == "json":
        data = {
            "config": {
                "pairs": args.pairs, "seed": args.seed, "exponent": args.exponent,
                "N": args.n_hightype, "a_max": args.a_max,
                "series_N": args.series_n, "depth": args.depth, "bits": args.bits,
            },
            "report": {
                "pairs_evaluated": report.pairs_evaluated,
                "excluded": report.excluded,
                "max_ratio": report.max_ratio,
                "quantiles": [list(q) for q in report.quantiles],
                "worst_pair": list(report.worst_pair),
                "exponent": report.exponent,
            },
            "rows": [asdict(r) for r in rows],
        }
        _emit(_json(data), args.output)
    else:
        lines = ["# upsilab csv schema: holder-scan/v2",
                 "alpha,alpha_p,kind,dist,d_upsilon,ratio,err,included,"
                 "stat_err,gap_a,gap_b"]
        for r in rows:
            lines.append(
                f"{r.alpha_spec},{r.alpha_p_spec},{r.kind},{r.dist!r},"
                f"{r.d_upsilon!r},{r.ratio!r},{r.err!r},{int(r.included)},"
                f"{r.stat_err!r},{r.gap_a!r},{r.gap_b!r}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# verify sub-lemmas: each returns (ok, report)


def _verify_dlog(args):
    a = args.exponent_a
    m_fit = nk.dlog_holder_constant(a)
    rng = random.Random(args.seed)
    violations = 0
    worst = 0.0
    for _ in range(args.samples):
        x = Fraction(rng.randint(-10**6, 10**6), 2 * 10**6)
        y = Fraction(rng.randint(-10**6, 10**6), 2 * 10**6)
        if x == y:
            continue
        d = float(nk.d_log(x, y))
        bound = m_fit * 1.0001 * abs(float(x - y)) ** a
        worst = max(worst, d / bound)
        if d > bound:
            violations += 1
    ok = violations == 0
    return ok, {
        "lemma": "dlog",
        "exponent": a,
        "fitted_M": m_fit,
        "samples": args.samples,
        "violations": violations,
        "worst_fraction_of_bound": worst,
        "total_length": float(1 + math.log(2)),
    }


def _verify_distortion(args):
    violations = 0
    checked = 0
    max_c = 0.0
    for i in range(args.samples):
        val, exp = cf.sample_high_type(3, args.a_max, args.depth, seed=args.seed + i)
        pairs = [s.pair() for s in exp.symbols]
        betas = exp.betas_mpf(192)
        for n in range(1, args.depth + 1):
            f = iv.fundamental_interval(0, pairs[:n])
            c_hat = iv.measure_distortion(0, pairs[:n], args.grid).implied_C
            ratio = iv.length_ratio(f, betas[n])
            max_c = max(max_c, c_hat)
            checked += 1
            if not (math.exp(-c_hat) - 1e-12 <= ratio <= math.exp(c_hat) + 1e-12):
                violations += 1
    ok = violations == 0
    return ok, {
        "lemma": "distortion",
        "samples": args.samples,
        "generations": args.depth,
        "intervals_checked": checked,
        "max_implied_C": max_c,
        "violations": violations,
    }


def _verify_sum_lemma(args):
    pairs = hl.sample_pairs(hl.PairSamplerConfig(N=3, a_max=args.a_max), args.pairs, args.seed)
    ratios = []
    dists = []
    drift = 0.0
    for va, vb, kind in pairs:
        r1 = hl.sum_lemma_check(va, vb, args.exponent_a, args.depth)
        r2 = hl.sum_lemma_check(va, vb, args.exponent_a, 2 * args.depth)
        drift = max(drift, abs(r2.ratio - r1.ratio) / max(r2.ratio, 1e-30))
        ratios.append(r2.ratio)
        dists.append(float(hl._abs_diff(va, vb, 192)))
    slope, stderr, pts = hl.windowed_max_trend(dists, ratios, bins=min(6, len(ratios) // 4))
    ok = drift < 0.05 and slope <= 2 * stderr
    return ok, {
        "lemma": "sum-lemma",
        "exponent_a": args.exponent_a,
        "pairs": len(pairs),
        "max_ratio": max(ratios),
        "depth_doubling_drift": drift,
        "trend_slope_vs_minus_log_dist": slope,
        "trend_stderr": stderr,
        "windowed_maxima": pts,
    }


def _verify_beta_diff(args):
    violations = 0
    rng = random.Random(args.seed)
    for i in range(args.pairs):
        va, _ = cf.sample_high_type(3, args.a_max, 8, seed=rng.randrange(2**31))
        vb, _ = cf.sample_high_type(3, args.a_max, 8, seed=rng.randrange(2**31))
        if va == vb:
            continue
        lhs, rhs = hl.beta_diff_check(va, vb, args.depth)
        if lhs > rhs + 1e-25:
            violations += 1
    ok = violations == 0
    return ok, {
        "lemma": "beta-diff",
        "pairs": args.pairs,
        "depth": args.depth,
        "violations": violations,
    }


def _verify_functional_eq(args):
    worst = 0.0
    for i in range(args.samples):
        val, _ = cf.sample_high_type(3, args.a_max, 10, seed=args.seed + i)
        res = bj.functional_residual(val, args.depth)
        worst = max(worst, float(res))
    ok = worst < 1e-20
    return ok, {
        "lemma": "functional-eq",
        "samples": args.samples,
        "depth": args.depth,
        "worst_residual": worst,
    }


def _verify_limit_zero(args):
    ks = list(range(1, args.k_max + 1))
    out = hl.limit_at_zero(ks, hl.UpsilonConfig(series_N=args.series_n, depth=args.depth,
                                                bits=args.bits))
    gaps = [abs(g) for _, _, g in out]
    ok = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    return ok, {
        "lemma": "limit-zero",
        "target": hl.LOG_2PI,
        "k": ks,
        "upsilon": [s.upsilon for _, s, _ in out],
        "abs_gap": gaps,
        "monotone_decreasing": ok,
    }


def _verify_subset_ht(args):
    violations = 0
    for i in range(args.samples):
        val, cexp = cf.sample_classical_high_type(max(args.n_hightype, 2), args.a_max,
                                                  args.depth, seed=args.seed + i)
        mexp = cf.mcf_expand(val, args.depth)
        for n in range(1, args.depth + 1):
            sym = mexp.symbols[n - 1]
            if sym.a != cexp.entries[n - 1] or sym.s != 1:
                violations += 1
                break
    ok = violations == 0
    return ok, {
        "lemma": "subset-ht",
        "N": args.n_hightype,
        "samples": args.samples,
        "depth": args.depth,
        "violations": violations,
    }


def _cmd_verify(args) -> int:
    table = {
        "dlog": _verify_dlog,
        "distortion": _verify_distortion,
        "sum-lemma": _verify_sum_lemma,
        "beta-diff": _verify_beta_diff,
        "functional-eq": _verify_functional_eq,
        "limit-zero": _verify_limit_zero,
        "subset-ht": _verify_subset_ht,
    }
    ok, report = table[args.lemma](args)
    report["ok"] = ok
    _emit(_json(report), args.output)
    if not ok:
        print(f"verify {args.lemma}: PROPERTY VIOLATION", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="upsilab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, bits=True):
        if bits:
            q.add_argument("--bits", type=int, default=nk.DEFAULT_BITS,
                           help="working precision (env UPSILAB_BITS)")
        q.add_argument("--format", choices=("json", "csv"), default="json")
        q.add_argument("--output", default=None, help="write to file instead of stdout")

    q = sub.add_parser("expand", help="continued-fraction expansion")
    q.add_argument("--alpha", required=True)
    q.add_argument("--algorithm", choices=("modified", "classical"), default="modified")
    q.add_argument("--depth", type=int, default=20)
    q.add_argument("--ht-n", type=int, default=None, help="also report the high-type check")
    common(q)

    q = sub.add_parser("brjuno", help="Brjuno sums")
    q.add_argument("--alpha", required=True)
    q.add_argument("--algorithm", choices=("modified", "classical", "both", "periodic"),
                   default="modified")
    q.add_argument("--depth", type=int, default=40)
    q.add_argument("--a-max", type=int, default=None)
    common(q)

    q = sub.add_parser("interval", help="fundamental intervals")
    q.add_argument("--a0", type=int, default=0)
    q.add_argument("--symbols", default="", help='e.g. "[(2,+),(3,-)]"')
    q.add_argument("--extended", action="store_true")
    q.add_argument("--grid", type=int, default=16)
    q.add_argument("--enumerate-amax", type=int, default=None,
                   help="enumerate the next generation up to this entry")
    common(q, bits=False)

    q = sub.add_parser("radius", help="conformal radius estimate")
    q.add_argument("--alpha", required=True)
    q.add_argument("--series-n", type=int, default=1024)
    q.add_argument("--dump-coeffs", default=None)
    common(q)

    q = sub.add_parser("upsilon", help="Upsilon = log r + Y")
    q.add_argument("--alpha", required=True)
    q.add_argument("--series-n", type=int, default=1024)
    q.add_argument("--depth", type=int, default=40)
    q.add_argument("--a-max", type=int, default=None)
    q.add_argument("--family", choices=("P", "Q"), default="P")
    common(q)

    q = sub.add_parser("holder-scan", help="pairwise Hoelder modulus scan")
    q.add_argument("--pairs", type=int, default=100)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--exponent", type=float, default=0.5)
    q.add_argument("--n-hightype", type=int, default=3)
    q.add_argument("--a-max", type=int, default=6)
    q.add_argument("--prefix-depth", type=int, default=8)
    q.add_argument("--series-n", type=int, default=1024)
    q.add_argument("--depth", type=int, default=40)
    common(q)

    q = sub.add_parser("verify", help="verify a quantitative lemma")
    q.add_argument("--lemma", choices=VERIFY_LEMMAS, required=True)
    q.add_argument("--pairs", type=int, default=200)
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--depth", type=int, default=15)
    q.add_argument("--a-max", type=int, default=6)
    q.add_argument("--grid", type=int, default=16)
    q.add_argument("--exponent-a", type=float, default=0.75)
    q.add_argument("--n-hightype", type=int, default=3)
    q.add_argument("--k-max", type=int, default=2)
    q.add_argument("--series-n", type=int, default=512)
    q.add_argument("--bits", type=int, default=nk.DEFAULT_BITS)
    q.add_argument("--format", choices=("json",), default="json")
    q.add_argument("--output", default=None)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 0 if exc.code in (0, None) else 1
    handlers = {
        "expand": _cmd_expand,
        "brjuno": _cmd_brjuno,
        "interval": _cmd_interval,
        "radius": _cmd_radius,
        "upsilon": _cmd_upsilon,
        "holder-scan": _cmd_holder_scan,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except UpsilabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
