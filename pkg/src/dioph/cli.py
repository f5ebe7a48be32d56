"""Command-line front end.

Every run prints one report with the top-level keys tool_version,
subcommand, config, seed, result, work_counters and elapsed_ms. Output is
byte-identical for identical arguments and seed; wall-clock time is only
included with ``--timing``.

Exit codes: 0 success, 1 no result, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import secrets
import sys
import time
from fractions import Fraction

from . import __version__, kernels
from .arith import RngStream
from .congruence import (
    inverse_euclid,
    inverse_formula_steps,
    inverse_voronoi,
    VORONOI_CAP,
    linear_congruence_min,
    linear_congruence_scan,
    max_inverse_distance,
    max_inverse_distance_bound,
    in_extremal_family,
    thue_pairs,
)
from .contfrac import cf_expand, cf_from_quotients, convergents, is_convergent_of
from .diophantine import (
    frobenius_brute,
    frobenius_two,
    rep_count,
    rep_count_brute,
    solve_linear,
)
from .factor import (
    STRATEGIES,
    FactorConfig,
    FactorInputError,
    algorithm_I,
    algorithm_II,
    algorithm_III,
    recover_key,
)
from . import stats

DEFAULT_SEED = 1729
EXIT_OK, EXIT_NO_RESULT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Outcome:
    """What a subcommand hands back to ``main`` for printing."""

    def __init__(self, result, work=None, config=None, rows=None, found=True, lines=None):
        self.result = result
        self.work = work or {}
        self.config = config or {}
        self.rows = rows
        self.found = found
        self.lines = lines


def natural(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def signed(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")


def positive(text: str) -> int:
    value = natural(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def resolve_seed(flag: str | None) -> tuple[int, str]:
    if flag is not None:
        if flag == "random":
            return secrets.randbits(64), "random"
        try:
            value = int(flag, 10)
        except ValueError:
            raise UsageError(f"--seed must be an integer or 'random', got {flag!r}")
        if not 0 <= value < 2**64:
            raise UsageError("--seed must lie in [0, 2**64)")
        return value, "flag"
    env = os.environ.get("DIOPH_SEED")
    if env:
        try:
            value = int(env, 10)
        except ValueError:
            raise UsageError(f"DIOPH_SEED must be an integer, got {env!r}")
        return value % 2**64, "env"
    return DEFAULT_SEED, "default"


# -- subcommands ------------------------------------------------------------


def _factor_config(args, seed: int, **extra) -> FactorConfig:
    return FactorConfig(
        max_outer=args.max_outer,
        pairs_per_outer=args.pairs_per_outer,
        candidates_per_pair=args.candidates_per_pair,
        constant_strategy=args.strategy,
        seed=seed,
        B=args.B,
        trace_detail=args.trace == "full",
        workers=args.workers,
        **extra,
    )


def _trace_rows(report) -> list[dict]:
    rows = []
    for t in report.trace:
        hit = t.square_hits[0] if t.square_hits else {}
        rows.append({
            "iteration": t.iteration, "r": t.r, "c0": t.c0, "c1": t.c1,
            "s_estimate": t.s_estimate, "pairs_used": t.pairs_used,
            "candidates_tested": t.candidates_tested,
            "discriminants_tested": t.discriminants_tested,
            "hit_s": hit.get("s"), "hit_T": hit.get("T"), "hit_D": hit.get("D"),
            "p": t.factors[0] if t.factors else None,
            "q": t.factors[1] if t.factors else None,
        })
    return rows


def cmd_factor(args, seed):
    extra = {}
    if args.fixed_r is not None:
        extra["fixed_r"] = args.fixed_r
    if args.planted_s is not None:
        extra["planted_s"] = args.planted_s
    if args.scan_bound is not None:
        extra["scan_bound"] = args.scan_bound
    cfg = _factor_config(args, seed, z_per_n=args.z_per_n, **extra)
    runner = {"I": algorithm_I, "II": algorithm_II, "III": algorithm_III}[args.algorithm]
    report = runner(args.n, cfg)
    result = report.to_dict(timing=False)
    result.pop("elapsed_ms")
    work = result.pop("work")
    return Outcome(result, work, report.config.to_dict(), _trace_rows(report), report.factored)


def cmd_keyrec(args, seed):
    cfg = _factor_config(args, seed)
    rec = recover_key(args.n, args.e, cfg)
    report = rec.report
    hit_entry = next((t for t in report.trace if t.factors), None)
    result = {"N": args.n, "e": args.e, "d": rec.d, "p": report.p, "q": report.q,
              "outcome": report.outcome}
    if hit_entry is not None:
        a = pow(hit_entry.c0, -1, args.e) * hit_entry.c1 % args.e
        pairs = thue_pairs(a, args.e) if math.gcd(a, args.e) == 1 else []
        result.update({
            "c0": hit_entry.c0, "c1": hit_entry.c1, "a": a,
            "hit": hit_entry.square_hits[0],
            "thue_x": [p.x for p in pairs],
            "thue_y": [p.y for p in pairs],
        })
    if rec.d is not None:
        phi = (report.p - 1) * (report.q - 1)
        result["check_de_mod_phi"] = rec.d * args.e % phi
    result["trace"] = [t.to_dict() for t in report.trace]
    return Outcome(result, dict(report.work), report.config.to_dict(), _trace_rows(report), rec.d is not None)


def cmd_cf(args, seed):
    if args.quotients:
        cf = cf_from_quotients(args.quotients)
        value = cf.value()
        num, den = value.numerator, value.denominator
    else:
        if args.num is None or args.den is None:
            raise UsageError("cf needs --num and --den, or --quotients")
        num, den = args.num, args.den
        cf = cf_expand(num, den)
    table = convergents(cf)
    result = {"num": num, "den": den, "quotients": list(cf.quotients),
              "p": table.p, "q": table.q}
    if args.check:
        chk = is_convergent_of(args.check[0], args.check[1], num, den)
        result["check"] = chk._asdict()
    rows = [{"n": i, "a": a, "p": p, "q": q}
            for i, (a, p, q) in enumerate(zip(cf.quotients, table.p, table.q))]
    return Outcome(result, {"quotients": len(cf)}, rows=rows)


def cmd_dioph(args, seed):
    if args.r < 1 or args.s < 1:
        raise UsageError("r and s must be positive")
    sol = solve_linear(args.r, args.s, args.n)
    if sol is None:
        return Outcome({"r": args.r, "s": args.s, "n": args.n, "solvable": False}, found=False)
    result = {"r": args.r, "s": args.s, "n": args.n, "solvable": True, "gcd": sol.d,
              "x0": sol.x0, "y0": sol.y0, "x_step": sol.x_step, "y_step": sol.y_step}
    return Outcome(result)


def cmd_congruence(args, seed):
    kind = args.kind
    if kind == "thue":
        if not (0 < args.a < args.r and math.gcd(args.a, args.r) == 1):
            raise UsageError("thue needs 0 < a < r with gcd(a, r) = 1")
        pairs = thue_pairs(args.a, args.r)
        root = math.isqrt(args.r)
        rows = [{"index": p.index, "x": p.x, "y": p.y} for p in pairs]
        small = [p.index for p in pairs if abs(p.x) <= root and p.y <= root]
        return Outcome({"a": args.a, "r": args.r, "pairs": rows, "sqrt_r": root,
                        "small_pair_indices": small}, {"pairs": len(pairs)}, rows=rows)
    if kind == "lincong":
        if not (0 < args.a < args.n and math.gcd(args.a, args.n) == 1 and 0 <= args.c < args.n
                and 1 <= args.bound < args.n):
            raise UsageError("lincong needs gcd(a, N) = 1, 0 <= c < N, 1 <= B < N")
        x, y = linear_congruence_min(args.a, args.c, args.n, args.bound)
        result = {"a": args.a, "c": args.c, "N": args.n, "B": args.bound, "x": x, "y": y}
        if args.oracle:
            result["oracle"] = list(linear_congruence_scan(args.a, args.c, args.n, args.bound))
        return Outcome(result)
    if kind == "inverse":
        if not (0 < args.a < args.n and math.gcd(args.a, args.n) == 1):
            raise UsageError("inverse needs 0 < a < N with gcd(a, N) = 1")
        inv, divisions = inverse_formula_steps(args.a, args.n)
        result = {"a": args.a, "N": args.n, "euclid": inverse_euclid(args.a, args.n),
                  "formula": inv, "formula_divisions": divisions}
        if args.a <= VORONOI_CAP:
            result["voronoi"] = inverse_voronoi(args.a, args.n)
        result["agree"] = len({v for k, v in result.items() if k in ("euclid", "formula", "voronoi")}) == 1
        return Outcome(result)
    if kind == "maxdist":
        M, (a, b) = max_inverse_distance(args.n)
        bound = max_inverse_distance_bound(args.n)
        return Outcome({"n": args.n, "M": M, "witness": [a, b], "bound": bound,
                        "equality": M == bound, "extremal_family": in_extremal_family(args.n)})
    raise UsageError(f"unknown congruence kind {kind}")


def cmd_frobenius(args, seed):
    coins = sorted(set(args.coins))
    if not coins or coins[0] < 1:
        raise UsageError("coins must be positive")
    g = math.gcd(*coins)
    result = {"coins": coins, "gcd": g}
    if g != 1:
        result["frobenius"] = None
        return Outcome(result, found=False)
    if coins[0] == 1:
        result["frobenius"] = -1
        return Outcome(result)
    cap = args.cap if args.cap is not None else (coins[0] - 1) * (coins[-1] - 1)
    brute = frobenius_brute(coins, cap)
    result.update({"frobenius": -1 if brute is None else brute, "cap": cap})
    if len(coins) == 2:
        result["formula"] = frobenius_two(*coins)
    return Outcome(result, {"cap": cap})


def cmd_repcount(args, seed):
    if math.gcd(args.r, args.s) != 1 or min(args.r, args.s) < 1:
        raise UsageError("repcount needs positive coprime r, s")
    rc = rep_count(args.r, args.s, args.n)
    result = {"r": args.r, "s": args.s, "n": args.n, "count": rc.count}
    if args.n // max(args.r, args.s) <= 10**6:
        result["enumerated"] = rep_count_brute(args.r, args.s, args.n)
    return Outcome(result)


def cmd_stats(args, seed):
    rng = RngStream(seed, 0)
    exp, w = args.experiment, args.workers
    if exp == "gauss-kuzmin":
        rep = stats.gauss_kuzmin(args.trials or 10**5, args.depth, rng, k_max=args.k_max, workers=w)
    elif exp == "euclid-steps":
        rep = stats.euclid_steps(args.trials or 10**5, args.magnitude, rng, workers=w)
    elif exp == "coprime-density":
        rep = stats.coprime_density(args.trials or 10**6, args.magnitude, rng, workers=w)
    elif exp == "phi-sums":
        rep = stats.phi_sums(args.x)
    elif exp == "coprime-interval":
        rep = stats.coprime_interval(args.n, args.lo, args.hi)
    elif exp == "inverse-uniformity":
        rep = stats.inverse_uniformity(args.n, args.bins)
    elif exp == "theta-uniformity":
        rep = stats.theta_uniformity(args.a, args.trials or 10**5, rng, workers=w)
    elif exp == "product-coverage":
        rep = stats.product_coverage(args.p, args.cap)
    elif exp == "theorem23":
        rep = stats.theorem23_probability(args.r, args.s, args.B, args.trials or 10**4, rng, workers=w)
    elif exp == "rates":
        rep = stats.factoring_rates(args.count, args.limit, args.budget, rng,
                                    algorithms=tuple(args.algorithms), workers=w)
    else:  # argparse restricts choices
        raise UsageError(exp)
    return Outcome(rep.to_dict(), {"trials": rep.trials}, rows=rep.csv_rows())


def cmd_selftest(args, seed):
    from .selftest import run_all

    checks = run_all()
    rows = [{"check": n, "passed": ok, "detail": d} for n, ok, d in checks]
    lines = [f"{'PASS' if ok else 'FAIL'}  {n}: {d}" for n, ok, d in checks]
    return Outcome({"checks": rows, "backend": kernels.BACKEND, "all_passed": all(c[1] for c in checks)},
                   {"checks": len(checks)}, rows=rows, found=all(c[1] for c in checks), lines=lines)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help="64-bit seed, or 'random' (default: $DIOPH_SEED or %d)" % DEFAULT_SEED)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv")
    common.add_argument("--workers", type=positive, default=1)
    common.add_argument("--timing", action="store_true", help="include wall-clock elapsed_ms")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.set_defaults(output="human")

    parser = argparse.ArgumentParser(prog="dioph", description="Linear-Diophantine factoring experiments.")
    parser.add_argument("--version", action="version", version=f"dioph {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def factor_knobs(p, strategy_default):
        p.add_argument("--max-outer", type=positive)
        p.add_argument("--pairs-per-outer", type=positive, default=1)
        p.add_argument("--candidates-per-pair", type=positive)
        p.add_argument("--strategy", choices=STRATEGIES, default=strategy_default)
        p.add_argument("--B", type=float, default=1.0)
        p.add_argument("--trace", choices=("brief", "full"), default="full",
                       help="full records every candidate and discriminant")

    p = sub.add_parser("factor", parents=[common], help="factor N with Algorithm I, II or III")
    p.add_argument("--n", type=natural, required=True)
    p.add_argument("--algorithm", choices=("I", "II", "III"), default="I")
    factor_knobs(p, "uniform-random")
    p.add_argument("--fixed-r", type=positive)
    p.add_argument("--planted-s", type=positive)
    p.add_argument("--scan-bound", type=natural)
    p.add_argument("--z-per-n", type=positive, default=8)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("keyrec", parents=[common], help="recover d from an RSA pair (N, e)")
    p.add_argument("--n", type=natural, required=True)
    p.add_argument("--e", type=positive, required=True)
    factor_knobs(p, "consecutive-squares")
    p.set_defaults(func=cmd_keyrec)

    p = sub.add_parser("cf", parents=[common], help="continued fraction and convergents")
    p.add_argument("--num", type=signed)
    p.add_argument("--den", type=signed)
    p.add_argument("--quotients", type=signed, nargs="+")
    p.add_argument("--check", type=signed, nargs=2, metavar=("P", "Q"),
                   help="test whether P/Q is a convergent")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("dioph", parents=[common], help="solve r x + s y = n")
    p.add_argument("--r", type=natural, required=True)
    p.add_argument("--s", type=natural, required=True)
    p.add_argument("--n", type=signed, required=True)
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("congruence", parents=[common], help="Thue pairs, linear congruences, inverses")
    p.add_argument("kind", choices=("thue", "lincong", "inverse", "maxdist"))
    p.add_argument("--a", type=natural)
    p.add_argument("--r", type=natural)
    p.add_argument("--c", type=natural)
    p.add_argument("--n", type=natural)
    p.add_argument("--bound", type=natural)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force scan")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("frobenius", parents=[common], help="Frobenius number of a coin set")
    p.add_argument("--coins", type=positive, nargs="+", required=True)
    p.add_argument("--cap", type=natural)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("repcount", parents=[common], help="count representations n = r x + s y")
    p.add_argument("--r", type=natural, required=True)
    p.add_argument("--s", type=natural, required=True)
    p.add_argument("--n", type=natural, required=True)
    p.set_defaults(func=cmd_repcount)

    p = sub.add_parser("stats", parents=[common], help="statistical experiments")
    p.add_argument("experiment", choices=stats.EXPERIMENTS)
    p.add_argument("--trials", type=positive)
    p.add_argument("--depth", type=positive, default=1)
    p.add_argument("--k-max", type=positive, default=5)
    p.add_argument("--magnitude", type=positive, default=64)
    p.add_argument("--x", type=positive, default=10**5)
    p.add_argument("--n", type=natural)
    p.add_argument("--lo", type=natural)
    p.add_argument("--hi", type=natural)
    p.add_argument("--bins", type=positive, default=10)
    p.add_argument("--a", type=natural)
    p.add_argument("--p", type=natural)
    p.add_argument("--cap", type=positive)
    p.add_argument("--r", type=natural)
    p.add_argument("--s", type=natural)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--count", type=positive, default=100)
    p.add_argument("--limit", type=positive, default=10**6)
    p.add_argument("--budget", type=positive, default=64)
    p.add_argument("--algorithms", nargs="+", choices=("I", "II", "III"), default=["I", "II", "III"])
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("selftest", parents=[common], help="run the quick oracle suites")
    p.set_defaults(func=cmd_selftest)
    return parser


_REQUIRED = {
    ("congruence", "thue"): ("a", "r"),
    ("congruence", "lincong"): ("a", "c", "n", "bound"),
    ("congruence", "inverse"): ("a", "n"),
    ("congruence", "maxdist"): ("n",),
    ("stats", "coprime-interval"): ("n", "lo", "hi"),
    ("stats", "inverse-uniformity"): ("n",),
    ("stats", "theta-uniformity"): ("a",),
    ("stats", "product-coverage"): ("p",),
    ("stats", "theorem23"): ("r", "s"),
}


def _check_required(args) -> None:
    key = (args.subcommand, getattr(args, "kind", None) or getattr(args, "experiment", None))
    missing = [f"--{name}" for name in _REQUIRED.get(key, ()) if getattr(args, name) is None]
    if missing:
        raise UsageError(f"{' '.join(k for k in key if k)} requires {', '.join(missing)}")


def _config_echo(args, seed_source: str) -> dict:
    skip = {"func", "seed"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["seed_source"] = seed_source
    return out


# -- rendering ----------------------------------------------------------------


def _flatten(prefix: str, value, out: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, (list, tuple)):
        out.append((prefix, json.dumps(value, separators=(",", ":"), default=str)))
    else:
        out.append((prefix, "null" if value is None else str(value)))


def render_human(payload: dict) -> str:
    pairs: list = []
    _flatten("", payload, pairs)
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields = list(rows[0].keys()) if rows else ["empty"]
    writer = csv.DictWriter(buf, fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def main(argv=None) -> int:
    sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_required(args)
        seed, source = resolve_seed(args.seed)
        started = time.perf_counter()
        outcome = args.func(args, seed)
        elapsed = (time.perf_counter() - started) * 1000
    except (UsageError, FactorInputError) as exc:
        print(f"dioph {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"dioph {args.subcommand}: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = _config_echo(args, source)
    config.update({f"resolved.{k}": v for k, v in outcome.config.items()})
    payload = {
        "tool_version": __version__,
        "subcommand": args.subcommand,
        "config": config,
        "seed": seed,
        "result": outcome.result,
        "work_counters": outcome.work,
        "elapsed_ms": round(elapsed, 3) if args.timing else None,
    }
    if args.output == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, default=_jsonable) + "\n")
    elif args.output == "csv":
        print(f"seed: {seed}", file=sys.stderr)
        sys.stdout.write(render_csv(outcome.rows if outcome.rows is not None else [outcome.result]))
    else:
        payload = json.loads(json.dumps(payload, default=_jsonable))
        if outcome.lines:
            sys.stdout.write("\n".join(outcome.lines) + "\n")
        sys.stdout.write(render_human(payload))
    if source == "random" and args.output != "csv":
        print(f"seed: {seed}", file=sys.stderr)
    return EXIT_OK if outcome.found else EXIT_NO_RESULT


if __name__ == "__main__":
    sys.exit(main())
