"""Command-line interface: search, analyze, simulate, experiment.

All output is CSV (or plain offsets for `search`) on stdout with
diagnostics on stderr. Every command is reproducible by default: the
seed falls back to a fixed constant unless --seed is given, the
LATSKETCH_SEED environment variable overrides that default, and fresh
entropy must be requested explicitly with --random-seed.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 UTF-8 decode error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

from .analysis import (
    ValueDistribution,
    measure_bottom_error,
    measure_value_error,
    phi_approx,
    phi_exact,
    psi_exponential,
    psi_uniform,
    summand_uniform,
)
from .approximator import choose_params
from .search import (
    BackingUnsupportedError,
    build_approx_oracle,
    build_exact_oracle,
    pattern_from_corpus,
    ratio_experiment,
    search,
    search_brute,
)

DEFAULT_SEED = 0x5EED
SEED_ENV = "LATSKETCH_SEED"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DECODE = 4


def _fail(message: str, code: int) -> int:
    print(f"latsketch: error: {message}", file=sys.stderr)
    return code


def _resolve_seed(args) -> int:
    if getattr(args, "random_seed", False):
        seed = int.from_bytes(os.urandom(8), "little")
        print(f"latsketch: using entropy seed {seed}", file=sys.stderr)
        return seed
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.buffer.read().decode("utf-8")
    with open(path, "rb") as fh:
        return fh.read().decode("utf-8")


def _parse_range(spec: str) -> list[int]:
    """"1..5" -> [1, 2, 3, 4, 5]; "1,3,9" and plain "3" also accepted."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {spec!r}")
        return list(range(lo, hi + 1))
    if "," in spec:
        return [int(part) for part in spec.split(",") if part.strip()]
    return [int(spec)]


def _csv_writer(schema: str):
    sys.stdout.write(f"# schema: {schema}/1\n")
    return csv.writer(sys.stdout, lineterminator="\n")


def _add_seed_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (default {DEFAULT_SEED}, or ${SEED_ENV})")
    group.add_argument("--random-seed", action="store_true",
                       help="draw the seed from OS entropy (not reproducible)")


# -- search ----------------------------------------------------------------

def _cmd_search(args) -> int:
    if args.pattern == "":
        return _fail("pattern must be nonempty", EXIT_USAGE)
    seed = _resolve_seed(args)
    try:
        text = _read_text(args.text)
    except UnicodeDecodeError as exc:
        return _fail(f"input is not valid UTF-8: {exc}", EXIT_DECODE)
    except OSError as exc:
        return _fail(f"cannot read {args.text}: {exc}", EXIT_IO)

    try:
        if args.engine == "brute":
            stats = search_brute(args.pattern, text)
        else:
            if args.engine == "approx":
                oracle = build_approx_oracle(
                    args.pattern, d=args.d, m_floor=args.m_floor, seed=seed
                )
            else:
                backing = "direct-address" if args.engine == "direct" else "associative"
                oracle = build_exact_oracle(args.pattern, backing=backing)
            stats = search(args.pattern, text, oracle, heuristic=args.heuristic)
    except BackingUnsupportedError as exc:
        return _fail(str(exc), EXIT_USAGE)

    if args.byte_offsets:
        byte_pos = 0
        cp_pos = 0
        for offset in stats.matches:
            byte_pos += len(text[cp_pos:offset].encode("utf-8"))
            cp_pos = offset
            print(f"{offset},{byte_pos}")
    else:
        for offset in stats.matches:
            print(offset)
    if args.stats:
        print(
            f"# candidates={stats.candidates},comparisons={stats.comparisons},"
            f"total_shift={stats.total_shift},matches={len(stats.matches)}"
        )
    return EXIT_OK


# -- analyze ----------------------------------------------------------------

def _cmd_analyze(args) -> int:
    try:
        d_values = _parse_range(args.d) if args.d else None
        if args.formula == "phi":
            writer = _csv_writer("analyze-phi")
            writer.writerow(["n", "m", "d", "phi_exact", "phi_approx"])
            for d in d_values:
                writer.writerow([
                    args.n, args.m, d,
                    repr(phi_exact(args.n, args.m, d)),
                    repr(phi_approx(args.n, args.m, d)),
                ])
        elif args.formula == "psi-uniform":
            m = args.m if args.m else math.ceil(2 * args.n / math.log(2))
            writer = _csv_writer("analyze-psi-uniform")
            writer.writerow(["n", "m", "d", "psi_uniform"])
            for d in d_values:
                writer.writerow([args.n, m, d, repr(psi_uniform(args.n, m, d))])
        elif args.formula == "summands":
            if args.case != "uniform":
                return _fail(f"unknown summand case {args.case!r}", EXIT_USAGE)
            m = args.m if args.m else math.ceil(2 * args.n / math.log(2))
            writer = _csv_writer("analyze-summands-uniform")
            writer.writerow(["i", "n", "m", "d", "summand"])
            for i in range(1, args.n + 1):
                for d in d_values:
                    writer.writerow([i, args.n, m, d, repr(summand_uniform(i, args.n, m, d))])
        elif args.formula == "psi-exp":
            n = 2 ** (args.s + 1) - 1
            m = args.m if args.m else math.ceil(2 * n / math.log(2))
            writer = _csv_writer("analyze-psi-exp")
            writer.writerow(["s", "n", "m", "d", "psi_exponential"])
            for d in d_values:
                writer.writerow([args.s, n, m, d, repr(psi_exponential(args.s, m, d))])
        else:  # pragma: no cover - argparse restricts choices
            return _fail(f"unknown formula {args.formula!r}", EXIT_USAGE)
    except (ValueError, TypeError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    return EXIT_OK


# -- simulate ----------------------------------------------------------------

def _parse_distribution(spec: str, n: int | None) -> ValueDistribution:
    if spec == "uniform":
        if n is None:
            raise ValueError("--dist uniform needs --n")
        return ValueDistribution.uniform(n)
    pairs = []
    for part in spec.split(","):
        v, _, a = part.partition(":")
        pairs.append((int(v), int(a) if a else 1))
    return ValueDistribution(tuple(v for v, _ in pairs), tuple(a for _, a in pairs))


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    try:
        if args.mode == "bottom":
            m = args.m if args.m else choose_params(args.n, args.d).m
            report = measure_bottom_error(
                args.n, m, args.d, universe=args.universe,
                trials=args.trials, seed=seed,
            )
            writer = _csv_writer("simulate-bottom")
            writer.writerow(["n", "m", "d", "trials", "seed",
                             "empirical", "analytic", "stderr"])
            writer.writerow([args.n, m, args.d, report.trials, seed,
                             repr(report.rate), repr(report.analytic),
                             repr(report.stderr)])
        else:
            dist = _parse_distribution(args.dist, args.n)
            if args.m is None:
                return _fail("simulate values needs --m", EXIT_USAGE)
            report = measure_value_error(dist, args.m, args.d,
                                         trials=args.trials, seed=seed)
            writer = _csv_writer("simulate-values")
            writer.writerow(["dist", "n", "m", "d", "trials", "seed",
                             "empirical", "analytic", "stderr"])
            writer.writerow([args.dist, dist.n, args.m, args.d, report.trials,
                             seed, repr(report.rate), repr(report.analytic),
                             repr(report.stderr)])
    except (ValueError, TypeError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    return EXIT_OK


# -- experiment ---------------------------------------------------------------

def _cmd_experiment(args) -> int:
    seed = _resolve_seed(args)
    try:
        text = _read_text(args.text)
    except UnicodeDecodeError as exc:
        return _fail(f"corpus is not valid UTF-8: {exc}", EXIT_DECODE)
    except OSError as exc:
        return _fail(f"cannot read {args.text}: {exc}", EXIT_IO)
    try:
        d_values = _parse_range(args.d)
        if args.patterns:
            patterns = args.patterns
        else:
            kind = "frequent" if args.frequent else "rare"
            lengths = _parse_range(args.lengths)
            patterns = [pattern_from_corpus(text, length, kind) for length in lengths]
        rows = ratio_experiment(
            text, patterns, d_values, m_multiplier=args.m_multiplier,
            heuristic=args.heuristic, seed=seed,
        )
    except (ValueError, TypeError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    except RuntimeError as exc:
        return _fail(str(exc), EXIT_USAGE)
    writer = _csv_writer("experiment-ratio")
    writer.writerow(["pattern", "d", "m", "c", "c_app", "ratio"])
    for row in rows:
        writer.writerow([row.pattern, row.d, row.m, row.candidates_exact,
                         row.candidates_approx, repr(row.ratio)])
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsketch",
        description="Sketch-backed bad-character search and its error analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="find a pattern in a UTF-8 text")
    p.add_argument("--pattern", required=True)
    p.add_argument("--text", required=True, help="input file path, or - for stdin")
    p.add_argument("--engine", choices=["brute", "direct", "assoc", "approx"],
                   default="approx")
    p.add_argument("--heuristic", choices=["bm", "qs"], default="qs")
    p.add_argument("--d", type=int, default=3, help="hash functions (approx engine)")
    p.add_argument("--m-floor", type=int, default=16)
    p.add_argument("--stats", action="store_true",
                   help="append a CSV comment with candidate/comparison counts")
    p.add_argument("--byte-offsets", action="store_true",
                   help="emit offset,byte_offset instead of bare code-point offsets")
    _add_seed_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("analyze", help="closed-form error curves as CSV")
    p.add_argument("formula", choices=["phi", "psi-uniform", "psi-exp", "summands"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None,
                   help="bucket count (default: ceil(2n/ln 2) where applicable)")
    p.add_argument("--d", default="1..5", help="hash-count grid, e.g. 3 or 1..10")
    p.add_argument("--s", type=int, default=None, help="levels for psi-exp")
    p.add_argument("--case", default="uniform", help="summand case")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="Monte-Carlo error measurement as CSV")
    p.add_argument("mode", choices=["bottom", "values"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None,
                   help="bucket count (bottom default: ceil(n d / ln 2))")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--dist", default="uniform",
                   help='"uniform" (with --n) or explicit "v:a,v:a,..."')
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--universe", type=int, default=None)
    _add_seed_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("experiment", help="candidate-count ratio experiment as CSV")
    p.add_argument("kind", choices=["ratio"])
    p.add_argument("--text", required=True, help="corpus file path, or - for stdin")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--patterns", nargs="+", help="explicit patterns")
    group.add_argument("--frequent", action="store_true",
                       help="patterns of the most frequent corpus characters")
    group.add_argument("--rare", action="store_true",
                       help="patterns of the rarest corpus characters")
    p.add_argument("--lengths", default="9,18,27",
                   help="pattern lengths for --frequent/--rare")
    p.add_argument("--d", default="1..6", help="hash-count grid")
    p.add_argument("--m-multiplier", type=float, default=None,
                   help="override buckets as ceil(multiplier * n)")
    p.add_argument("--heuristic", choices=["bm", "qs"], default="qs")
    _add_seed_flags(p)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    missing = []
    if args.command == "analyze":
        if args.formula in ("phi", "psi-uniform", "summands") and args.n is None:
            missing.append("--n")
        if args.formula == "phi" and args.m is None:
            missing.append("--m")
        if args.formula == "psi-exp" and args.s is None:
            missing.append("--s")
    if args.command == "simulate" and args.mode == "bottom" and args.n is None:
        missing.append("--n")
    if args.command == "simulate" and args.mode == "values" and args.dist == "uniform" and args.n is None:
        missing.append("--n")
    if missing:
        return _fail(f"missing required flags: {', '.join(missing)}", EXIT_USAGE)
    return args.func(args)


def main_entry():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
