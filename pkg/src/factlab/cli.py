"""Command-line front end: one subcommand per library operation,
machine-readable CSV or JSON-lines output, deterministic under a fixed
seed.

Exit codes: 0 success, 1 a checked inequality failed, 2 usage error,
3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
import time
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .errors import BudgetError
from .factorizer import (
    NotRepresentableError,
    bounded_product_reach,
    find_representation,
    reach_bound,
    three_factorial,
)
from .field_core import FieldCtx
from .fourier_probe import fourier_error_bound, l1_log_bound, spectrum
from .point_counts import (
    ProgressionSpec,
    count_interval,
    exp_sum_check,
    image_count,
    intersection_count,
    langweil_report,
)
from .poly_lab import falling_product_poly
from .residue_census import (
    DEFAULT_WORK_BUDGET,
    SCAN_MIN_PRIME,
    ResidueSet,
    default_threads,
    embedding_check,
    factorial_set,
    image_set,
    primes_in_range,
    product_set_card,
    quotient_set_card,
    scan_cardinalities,
)
from .union_estimator import (
    binomial_link,
    theorem1_params,
    theorem2_bound,
    verify_family,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _range_pair(text: str) -> Tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def _pairs(js: Sequence[int]) -> List[Tuple[int, int]]:
    """Unordered pairs including equal ones, canonical (k <= j) order."""
    out = []
    for i, k in enumerate(js):
        for j in js[i:]:
            out.append((min(k, j), max(k, j)))
    return sorted(set(out))


def _progression(args: argparse.Namespace) -> ProgressionSpec:
    return ProgressionSpec(start=args.start, step=args.step, length=args.length)


def _random_progression(rng: random.Random, p: int) -> ProgressionSpec:
    return ProgressionSpec(
        start=rng.randrange(p),
        step=rng.randrange(1, p),
        length=rng.randrange(2, p),
    )


def _write(args: argparse.Namespace, fieldnames: List[str], rows: List[Dict]) -> None:
    if getattr(args, "sort", False):
        rows = sorted(rows, key=lambda r: tuple(str(r[f]) for f in fieldnames))
    out = io.StringIO()
    if args.format == "csv":
        writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        config = {
            k: v for k, v in vars(args).items()
            if k not in ("func", "fields") and not k.startswith("_")
        }
        meta = {
            "meta": {
                "version": __version__,
                "config": config,
                "wall_time_s": round(time.time() - args._t0, 6),
            }
        }
        out.write(json.dumps(meta) + "\n")
        for row in rows:
            out.write(json.dumps(row) + "\n")
    text = out.getvalue()
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ok_exit(rows: List[Dict], flag: str) -> int:
    return EXIT_OK if all(row.get(flag, True) for row in rows) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------- handlers


def cmd_erdos(args) -> int:
    lo, hi = args.range
    if lo < SCAN_MIN_PRIME:
        raise ValueError(
            f"scan starts at p = {SCAN_MIN_PRIME}: |A(5)| = 3 = p - 2, so the "
            "strict inequality is a statement for p >= 7"
        )
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    rows = [
        {"p": p, "card": card, "p_minus_2": p - 2, "ok": card < p - 2}
        for p, card in scan_cardinalities(lo, hi, args.threads)
    ]
    _write(args, ["p", "card", "p_minus_2", "ok"], rows)
    return _ok_exit(rows, "ok")


def cmd_census(args) -> int:
    ctx = FieldCtx(args.p)
    L, N = args.window if args.window else (0, args.p - 1)
    card = factorial_set(ctx, L, N).cardinality
    ratio, deviation = (card / args.p, card / args.p - (1 - 1 / math.e))
    rows = [{
        "p": args.p, "L": L, "N": N, "card": card,
        "ratio": round(ratio, 6), "deviation": round(deviation, 6),
    }]
    _write(args, ["p", "L", "N", "card", "ratio", "deviation"], rows)
    return EXIT_OK


def _window_set(ctx: FieldCtx, args) -> ResidueSet:
    L, N = args.window if args.window else (0, ctx.p - 1)
    return factorial_set(ctx, L, N)


def cmd_product(args) -> int:
    ctx = FieldCtx(args.p)
    S = _window_set(ctx, args)
    card = product_set_card(S, S, args.budget)
    rows = [{
        "p": args.p, "set_card": S.cardinality, "product_card": card,
        "binomial_lower": binomial_link(card),
    }]
    _write(args, ["p", "set_card", "product_card", "binomial_lower"], rows)
    return EXIT_OK


def cmd_quotient(args) -> int:
    ctx = FieldCtx(args.p)
    S = _window_set(ctx, args)
    card = quotient_set_card(S, S, args.budget)
    rows = [{
        "p": args.p, "set_card": S.cardinality, "quotient_card": card,
        "sqrt_lower": math.isqrt(card - 1) + 1,
    }]
    _write(args, ["p", "set_card", "quotient_card", "sqrt_lower"], rows)
    return EXIT_OK


def cmd_images(args) -> int:
    ctx = FieldCtx(args.p)
    I = _progression(args)
    rows = []
    for j in args.j:
        P = falling_product_poly(ctx, j)
        rows.append({"p": args.p, "j": j, "interval_len": I.length,
                     "image_card": image_count(ctx, P, I)})
    _write(args, ["p", "j", "interval_len", "image_card"], rows)
    return EXIT_OK


def cmd_intersect(args) -> int:
    ctx = FieldCtx(args.p)
    I = _progression(args)
    Pk = falling_product_poly(ctx, args.k)
    Pj = falling_product_poly(ctx, args.j)
    inter = intersection_count(ctx, Pk, Pj, I)
    ji = count_interval(ctx, Pk, Pj, I)
    rows = [{"p": args.p, "k": args.k, "j": args.j,
             "intersection": inter, "j_interval": ji, "dominated": inter <= ji}]
    _write(args, ["p", "k", "j", "intersection", "j_interval", "dominated"], rows)
    return _ok_exit(rows, "dominated")


def cmd_langweil(args) -> int:
    ctx = FieldCtx(args.p)
    rows = []
    for k, j in _pairs(args.j):
        rep = langweil_report(
            ctx, falling_product_poly(ctx, k), falling_product_poly(ctx, j)
        )
        rows.append({
            "p": args.p, "k": k, "j": j,
            "observed": int(rep.observed), "reference": int(rep.reference),
            "bound": round(rep.bound, 6), "satisfied": rep.satisfied,
        })
    _write(args, ["p", "k", "j", "observed", "reference", "bound", "satisfied"], rows)
    return _ok_exit(rows, "satisfied")


def cmd_expsum(args) -> int:
    ctx = FieldCtx(args.p)
    rng = random.Random(args.seed)
    rows = []
    for k, j in _pairs(args.j):
        Pk, Pj = falling_product_poly(ctx, k), falling_product_poly(ctx, j)
        if args.b is not None:
            samples = [tuple(args.b)]
        else:
            samples = []
            while len(samples) < args.samples:
                b1, b2 = rng.randrange(args.p), rng.randrange(args.p)
                if (b1, b2) != (0, 0):
                    samples.append((b1, b2))
        for b1, b2 in samples:
            rep = exp_sum_check(ctx, Pk, Pj, b1, b2)
            rows.append({
                "p": args.p, "k": k, "j": j, "b1": b1, "b2": b2,
                "magnitude": round(rep.observed, 9),
                "bound": round(rep.bound, 6), "satisfied": rep.satisfied,
            })
    _write(args, ["p", "k", "j", "b1", "b2", "magnitude", "bound", "satisfied"], rows)
    return _ok_exit(rows, "satisfied")


def cmd_dft(args) -> int:
    ctx = FieldCtx(args.p)
    I = _progression(args)
    rep = spectrum(ctx, I)
    bound = l1_log_bound(ctx)
    rows = [{
        "p": args.p, "start": args.start, "step": args.step, "length": args.length,
        "l1": round(rep.l1, 6), "l1_bound": round(bound, 6),
        "within_bound": rep.l1 <= bound,
    }]
    _write(args, ["p", "start", "step", "length", "l1", "l1_bound", "within_bound"], rows)
    return _ok_exit(rows, "within_bound")


def cmd_fourier_bound(args) -> int:
    ctx = FieldCtx(args.p)
    rng = random.Random(args.seed)
    given = (args.start, args.step, args.length)
    if any(v is not None for v in given) and any(v is None for v in given):
        raise ValueError("--start, --step and --length must be given together")
    progressions = (
        [_progression(args)]
        if args.start is not None
        else [_random_progression(rng, args.p) for _ in range(args.samples)]
    )
    rows = []
    for k, j in _pairs(args.j):
        Pk, Pj = falling_product_poly(ctx, k), falling_product_poly(ctx, j)
        for I in progressions:
            rep = fourier_error_bound(ctx, Pk, Pj, I)
            rows.append({
                "p": args.p, "k": k, "j": j,
                "start": I.start, "step": I.step, "length": I.length,
                "observed": int(rep.observed),
                "reference": round(rep.reference, 6),
                "bound": round(rep.bound, 6), "satisfied": rep.satisfied,
            })
    _write(args, ["p", "k", "j", "start", "step", "length",
                  "observed", "reference", "bound", "satisfied"], rows)
    return _ok_exit(rows, "satisfied")


def cmd_union_check(args) -> int:
    ctx = FieldCtx(args.p)
    if 2 * args.N + args.M >= args.p:
        raise ValueError(f"need 2N + M < p, got {2 * args.N + args.M} >= {args.p}")
    I = ProgressionSpec(start=1, step=2, length=(2 * args.N - args.M + 1) // 2)
    js = [j for j in primes_in_range(3, args.M).tolist()]
    if len(js) < 2:
        raise ValueError(f"need at least two odd primes <= M, got {js}")
    family = [image_set(ctx, falling_product_poly(ctx, j), I) for j in js]
    rep = verify_family(family)
    rows = [{
        "p": args.p, "N": args.N, "M": args.M, "n": rep.n, "a": rep.a, "b": rep.b,
        "applicable": rep.applicable,
        "bound": None if rep.bound is None else round(rep.bound, 3),
        "union": rep.union_size,
        "holds": rep.holds,
    }]
    _write(args, ["p", "N", "M", "n", "a", "b", "applicable", "bound", "union", "holds"], rows)
    return _ok_exit(rows, "holds")


def cmd_bounds(args) -> int:
    if args.N is None:
        t = theorem1_params(args.p)
        rows = [{
            "p": t.p, "kappa": round(t.kappa, 6), "eps1": round(t.eps1, 6),
            "eps2": round(t.eps2, 6), "delta": round(t.delta, 6),
            "N": t.N, "M": t.M,
            "delta_positive": t.delta_positive, "constraints_ok": t.constraints_ok,
        }]
        _write(args, ["p", "kappa", "eps1", "eps2", "delta", "N", "M",
                      "delta_positive", "constraints_ok"], rows)
        return _ok_exit(rows, "constraints_ok")
    constants = tuple(args.constants) if args.constants else None
    r = theorem2_bound(args.p, args.N, constants)
    rows = [{
        "p": args.p, "N": args.N, "regime": r.regime,
        "main_term": round(r.main_term, 3),
        "error_scale": None if r.error_scale is None else round(r.error_scale, 3),
        "recommended": None if r.recommended is None else round(r.recommended, 6),
        "recommended_name": r.recommended_name,
        "K": float(r.K), "Q": round(r.Q, 6),
    }]
    _write(args, ["p", "N", "regime", "main_term", "error_scale",
                  "recommended", "recommended_name", "K", "Q"], rows)
    return EXIT_OK


def cmd_represent(args) -> int:
    if not 1 <= args.a < args.p:
        raise ValueError(f"target a={args.a} must lie in [1, p-1] = [1, {args.p - 1}]")
    ctx = FieldCtx(args.p)
    if args.method == "wilson3":
        cert = three_factorial(ctx, args.a)
        appended = cert.factors[-1] == args.p - 1
        rows = [{
            "p": args.p, "a": args.a, "method": "wilson3",
            "factors": " ".join(map(str, cert.factors)),
            "max_factor": max(cert.factors), "wilson_appended": appended,
            "verified": True,
        }]
        fields = ["p", "a", "method", "factors", "max_factor", "wilson_appended", "verified"]
        _write(args, fields, rows)
        return EXIT_OK
    B = args.B if args.B is not None else reach_bound(args.p)
    try:
        cert = find_representation(ctx, args.a, args.k, B, args.budget)
    except NotRepresentableError:
        rows = [{
            "p": args.p, "a": args.a, "method": "reach", "factors": "",
            "max_factor": None, "B": B, "verified": False,
        }]
        _write(args, ["p", "a", "method", "factors", "max_factor", "B", "verified"], rows)
        return EXIT_CHECK_FAILED
    rows = [{
        "p": args.p, "a": args.a, "method": "reach",
        "factors": " ".join(map(str, cert.factors)),
        "max_factor": max(cert.factors), "B": B, "verified": True,
    }]
    _write(args, ["p", "a", "method", "factors", "max_factor", "B", "verified"], rows)
    return EXIT_OK


def cmd_reach(args) -> int:
    ctx = FieldCtx(args.p)
    B = args.B if args.B is not None else reach_bound(args.p)
    levels = bounded_product_reach(ctx, B, args.k, args.budget)
    rows = [
        {"p": args.p, "B": B, "level": m + 1, "card": s.cardinality,
         "covers_units": s.cardinality - (0 in s) >= args.p - 1}
        for m, s in enumerate(levels)
    ]
    _write(args, ["p", "B", "level", "card", "covers_units"], rows)
    return EXIT_OK


def cmd_embed(args) -> int:
    ctx = FieldCtx(args.p)
    ok = embedding_check(ctx, args.N, args.M)
    rows = [{"p": args.p, "N": args.N, "M": args.M, "ok": ok}]
    _write(args, ["p", "N", "M", "ok"], rows)
    return _ok_exit(rows, "ok")


# ---------------------------------------------------------------- parser


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="csv (RFC-4180 quoting) or json lines with a meta header")
    sp.add_argument("--output", default=None, help="output path (default stdout)")
    sp.add_argument("--sort", action="store_true",
                    help="sort rows canonically before writing")
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled inputs")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: FACTLAB_THREADS or CPU count)")
    sp.add_argument("--budget", type=int, default=DEFAULT_WORK_BUDGET,
                    help="work budget for quadratic-cost set operations")


def _add_progression(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument("--start", type=int, required=required, default=None)
    sp.add_argument("--step", type=int, required=required, default=1 if required else None)
    sp.add_argument("--length", type=int, required=required, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factlab",
        description="Factorial residues modulo a prime: scans, counts, and audits.",
    )
    parser.add_argument("--version", action="version", version=f"factlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("erdos", help="strict cardinality scan over a prime range",
                        epilog="CSV: p,card,p_minus_2,ok")
    sp.add_argument("--range", type=_range_pair, required=True, metavar="LO:HI")
    sp.set_defaults(func=cmd_erdos)

    sp = sub.add_parser("census", help="factorial residue set size and density",
                        epilog="CSV: p,L,N,card,ratio,deviation")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--window", type=_range_pair, default=None, metavar="L:N")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("product", help="exact product set cardinality",
                        epilog="CSV: p,set_card,product_card,binomial_lower")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--window", type=_range_pair, default=None, metavar="L:N")
    sp.set_defaults(func=cmd_product)

    sp = sub.add_parser("quotient", help="exact quotient set cardinality",
                        epilog="CSV: p,set_card,quotient_card,sqrt_lower")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--window", type=_range_pair, default=None, metavar="L:N")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("images", help="image sizes of falling products on a progression",
                        epilog="CSV: p,j,interval_len,image_card")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=_int_list, required=True)
    _add_progression(sp)
    sp.set_defaults(func=cmd_images)

    sp = sub.add_parser("intersect", help="image intersection vs interval zero count",
                        epilog="CSV: p,k,j,intersection,j_interval,dominated")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    _add_progression(sp)
    sp.set_defaults(func=cmd_intersect)

    sp = sub.add_parser("langweil", help="point-count window audit for phi(P_k, P_j)",
                        epilog="CSV: p,k,j,observed,reference,bound,satisfied")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=_int_list, required=True)
    sp.add_argument("--pairs", choices=("all",), default="all")
    sp.set_defaults(func=cmd_langweil)

    sp = sub.add_parser("expsum", help="exponential sums over zero sets vs 2 d^2 sqrt(p)",
                        epilog="CSV: p,k,j,b1,b2,magnitude,bound,satisfied")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=_int_list, required=True)
    sp.add_argument("--pairs", choices=("all",), default="all")
    sp.add_argument("--b", type=_int_list, default=None, metavar="B1,B2")
    sp.add_argument("--samples", type=int, default=10)
    sp.set_defaults(func=cmd_expsum)

    sp = sub.add_parser("dft", help="progression spectrum l1 mass vs 4 p ln p",
                        epilog="CSV: p,start,step,length,l1,l1_bound,within_bound")
    sp.add_argument("--p", type=int, required=True)
    _add_progression(sp)
    sp.set_defaults(func=cmd_dft)

    sp = sub.add_parser("fourier-bound", help="explicit interval-count error chain",
                        epilog="CSV: p,k,j,start,step,length,observed,reference,bound,satisfied")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=_int_list, required=True)
    _add_progression(sp, required=False)
    sp.add_argument("--samples", type=int, default=5)
    sp.set_defaults(func=cmd_fourier_bound)

    sp = sub.add_parser("union-check", help="union lower bound on the odd-window family",
                        epilog="CSV: p,N,M,n,a,b,applicable,bound,union,holds")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.set_defaults(func=cmd_union_check)

    sp = sub.add_parser("bounds", help="parameter calculators for the product-set theorems",
                        epilog="CSV (no --N): p,kappa,eps1,eps2,delta,N,M,delta_positive,"
                               "constraints_ok; (with --N): p,N,regime,main_term,...")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--constants", type=_float_list, default=None,
                    metavar="c,c1,c2,c3,c4,c5")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("represent", help="factorial-product certificate for a residue",
                        epilog="CSV: p,a,method,factors,max_factor[,B|wilson_appended],verified")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--k", type=int, default=7)
    sp.add_argument("--B", type=int, default=None)
    sp.add_argument("--method", choices=("reach", "wilson3"), default="reach")
    sp.set_defaults(func=cmd_represent)

    sp = sub.add_parser("reach", help="reachability level set sizes",
                        epilog="CSV: p,B,level,card,covers_units")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--B", type=int, default=None)
    sp.add_argument("--k", type=int, default=7)
    sp.set_defaults(func=cmd_reach)

    sp = sub.add_parser("embed", help="two-factorial witness embedding check",
                        epilog="CSV: p,N,M,ok")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.set_defaults(func=cmd_embed)

    for name, action in sub.choices.items():
        _add_common(action)
    return parser


def dispatch(args: argparse.Namespace) -> int:
    args._t0 = time.time()
    if args.threads is None:
        args.threads = default_threads()
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"factlab: budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OverflowError) as exc:
        print(f"factlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
