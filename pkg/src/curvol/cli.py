"""Command-line interface.

Exit status: 0 success, 1 an identity or bound was violated, 2 invalid or
degenerate input.

``bounds`` columns (one row per r):

  m, n, k, r               shape and subset sizes
  interpolation_factor     ((m-r)(k+1)^2 + (r-k)(k+1)) / (m-k)
  compound_ratio           ||C_{k+1}(M)||^2 / ||C_k(M)||^2
  thm2_rhs                 (k+1)(r-k)/(m-k) * compound_ratio   (= E[b_err])
  thm3_rhs                 (k+1)^2 (m-r)/(m-k) * compound_ratio (>= E[d_err])
  thm4_rhs                 interpolation_factor * compound_ratio (>= E[total])
  sv_bound                 interpolation_factor * e_{k+1}(s^2)/e_k(s^2), r < min(m,n) only
  tail_bound               interpolation_factor * sum_{i>k} s_i^2, r < min(m,n) only
  b_err_expected, d_err_expected, total_expected
                           measured expectations (exact or Monte-Carlo)
  estimation_mode, samples, seed, *_std_error
                           how the expectations were estimated
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import generators
from .bordered import require_full_column_rank
from .cur import cur_error_summary
from .errors import CurvolError
from .identities import CHECKS, run_identity_suite
from .linalg import format_matrix_csv, read_matrix_csv
from .subsets import format_index_set, parse_index_set
from .volume_sampling import (
    SAMPLERS,
    BoundReport,
    build_distribution,
    expected_errors_exact,
    expected_errors_mc,
    pair_errors,
    reports_to_csv,
    reports_to_json,
    sample,
    sample_sequential,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _add_matrix_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="matrix CSV (no header, one row per line)")
    src.add_argument("--gen", choices=generators.KINDS, help="generate a seeded random matrix")
    src.add_argument("--demo", action="store_true", help="use the 3x3 identity matrix")
    g = p.add_argument_group("generator options")
    g.add_argument("--m", type=int, help="rows")
    g.add_argument("--n", type=int, help="columns")
    g.add_argument("--rank", type=int, help="rank of the low-rank part")
    g.add_argument("--noise", type=float, default=0.0, help="noise standard deviation")
    g.add_argument("--gen-seed", type=int, default=0, help="generator seed (PCG64)")


def _add_output(p: argparse.ArgumentParser, formats=("csv", "json", "table"), default="table") -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", metavar="PATH", help="write to PATH instead of standard output")


def _load_matrix(args) -> np.ndarray:
    if args.demo:
        return np.eye(3)
    if args.input:
        return read_matrix_csv(args.input)
    if args.m is None or args.n is None:
        raise CurvolError("--gen needs --m and --n")
    return generators.generate(args.gen, args.m, args.n, args.gen_seed,
                               rank=args.rank, noise=args.noise)


def _emit(text: str, args) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(map(str, header))] + [["" if v is None else (f"{v:.6g}" if isinstance(v, float) else str(v))
                                         for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)


# -- commands ------------------------------------------------------------------


def cmd_identities(args) -> int:
    if args.trials == 0:
        print("warning: 0 trials requested; nothing checked", file=sys.stderr)
    result = run_identity_suite(trials=args.trials, seed=args.seed, corrupt=args.corrupt)
    rows = [(s.name, s.count, s.max_residual, "pass" if s.passed else f"FAIL (trial {s.first_failure})")
            for s in result.stats.values()]
    if args.format == "json":
        text = json.dumps({
            "trials": args.trials,
            "seed": args.seed,
            "tolerance": 1e-9,
            "checks": [{"name": n, "count": c, "max_residual": r, "passed": st == "pass"}
                       for n, c, r, st in rows],
        }, indent=2) + "\n"
    elif args.format == "csv":
        text = "name,count,max_residual,status\n" + "".join(
            f"{n},{c},{r!r},{st}\n" for n, c, r, st in rows)
    else:
        text = _table(["identity", "count", "max_rel_residual", "status"], rows)
    _emit(text, args)
    failure = result.first_failure()
    if failure is not None:
        print(f"identity {failure.name!r} failed ({CHECKS[failure.name]}) at seed "
              f"{args.seed}, trial {failure.first_failure}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _r_range(args, m: int) -> range:
    if args.r is not None:
        return range(args.r, args.r + 1)
    lo = args.r_min if args.r_min is not None else args.k
    hi = args.r_max if args.r_max is not None else m
    if lo > hi:
        raise CurvolError(f"--r-min {lo} exceeds --r-max {hi}")
    return range(lo, hi + 1)


def cmd_bounds(args) -> int:
    mat = _load_matrix(args)
    if args.mode == "mc" and args.samples < 1:
        raise CurvolError("--mode mc needs --samples >= 1")
    reports: list[BoundReport] = []
    for r in _r_range(args, mat.shape[0]):
        if args.mode == "exact":
            rep = expected_errors_exact(mat, r, args.k, allow_large=args.allow_large)
        else:
            rep = expected_errors_mc(mat, r, args.k, args.samples, args.seed,
                                     sampler=args.sampler, allow_large=args.allow_large)
        reports.append(rep)

    if args.format == "csv":
        text = reports_to_csv(reports)
    elif args.format == "json":
        text = reports_to_json(reports)
    else:
        cols = ["r", "interpolation_factor", "compound_ratio", "b_err_expected", "thm2_rhs",
                "d_err_expected", "thm3_rhs", "total_expected", "thm4_rhs", "sv_bound", "tail_bound"]
        text = _table(cols, [[getattr(rep, c) for c in cols] for rep in reports])
    _emit(text, args)

    status = EXIT_OK
    for rep in reports:
        for msg in rep.violations():
            print(f"bound violated at r={rep.r}: {msg}", file=sys.stderr)
            status = EXIT_VIOLATION
    return status


def cmd_cur(args) -> int:
    mat = _load_matrix(args)
    rows = parse_index_set(args.rows, mat.shape[0])
    cols = parse_index_set(args.cols, mat.shape[1])
    if len(rows) < len(cols):
        raise CurvolError(f"need |I| >= |J|, got |I|={len(rows)}, |J|={len(cols)}")
    require_full_column_rank(mat[np.ix_(list(rows), list(cols))], name="M[I, J]")
    s = cur_error_summary(mat, rows, cols)
    values = {
        "rows": format_index_set(rows),
        "cols": format_index_set(cols),
        "error_sq": s.total,
        "b_err": s.b_err,
        "d_err": s.d_err,
        "optimal_middle_error_sq": s.optimal_error,
    }
    if args.format == "json":
        text = json.dumps(values, indent=2) + "\n"
    elif args.format == "csv":
        text = ",".join(values) + "\n" + ",".join(
            f'"{v}"' if isinstance(v, str) else repr(v) for v in values.values()) + "\n"
    else:
        text = "".join(f"{key}={v if isinstance(v, str) else repr(v)}\n" for key, v in values.items())
    _emit(text, args)
    return EXIT_OK


def cmd_sample(args) -> int:
    mat = _load_matrix(args)
    if args.sampler == "sequential":
        draws = sample_sequential(mat, args.r, args.k, args.seed, args.samples)
    else:
        dist = build_distribution(mat, args.r, args.k, allow_large=args.allow_large)
        draws = sample(dist, args.seed, args.samples)
    cache: dict = {}
    lines = []
    for rows, cols in draws:
        if (rows, cols) not in cache:
            b, d = pair_errors(mat, rows, cols)
            cache[rows, cols] = b + d
        lines.append(f"I={format_index_set(rows)} J={format_index_set(cols)} err2={cache[rows, cols]!r}\n")
    _emit("".join(lines), args)
    return EXIT_OK


def cmd_generate(args) -> int:
    _emit(format_matrix_csv(_load_matrix(args)), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvol",
        description="CUR approximation under volume sampling: identities, bounds, sampling.",
        epilog="Exit status: 0 ok, 1 identity/bound violation, 2 invalid or degenerate input.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="randomized checks of the determinant identities and local bounds")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corrupt", choices=sorted(CHECKS), help=argparse.SUPPRESS)
    _add_output(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("bounds", help="expected CUR error vs. bounds, one row per r",
                       description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_matrix_source(p)
    p.add_argument("--k", type=int, required=True, help="number of columns")
    p.add_argument("--r", type=int, help="number of rows (single row of output)")
    p.add_argument("--r-min", type=int, help="first r (default k)")
    p.add_argument("--r-max", type=int, help="last r (default m)")
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--samples", type=int, default=10000, help="Monte-Carlo sample count")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--sampler", choices=SAMPLERS, default="auto")
    p.add_argument("--allow-large", action="store_true", help="lift the enumeration cap")
    _add_output(p, default="csv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cur", help="CUR error for explicit row and column sets")
    _add_matrix_source(p)
    p.add_argument("--rows", required=True, help='row set I, e.g. "0,2"')
    p.add_argument("--cols", required=True, help='column set J, e.g. "1,3"')
    _add_output(p)
    p.set_defaults(func=cmd_cur)

    p = sub.add_parser("sample", help="draw volume-sampled (I, J) pairs")
    _add_matrix_source(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--samples", type=int, default=10, help="number of draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sampler", choices=("enumerate", "sequential"), default="enumerate")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("generate", help="write a generated matrix as CSV")
    _add_matrix_source(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CurvolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
