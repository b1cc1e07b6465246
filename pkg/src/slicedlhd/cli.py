"""Command line front end.

Three subcommands:

  generate   build a sliced design and write it as text
  validate   check a design file for whole-grid and per-slice stratification
  bench      run a benchmark config and report per-method RMSE

Exit codes: 0 success (and, for validate, all checks passed); 1 validation
failure; 2 bad arguments, bad config, or unparseable input; 3 output path
not writable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .benchmark import ExperimentConfig, render_table, run_experiment, write_trace_csv
from .core import Design, RngStream, SliceSizes
from .decorrelate import reduce_correlations
from .generate import generate_sliced_lhd
from .partition import partition_levels
from .validate import validate_sliced

__all__ = ["main"]

_ENV_SEED = "SLICEDLHD_SEED"


def _parse_sizes(text: str) -> SliceSizes:
    try:
        parts = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers: {text!r}")
    try:
        return SliceSizes(parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _default_seed() -> int:
    raw = os.environ.get(_ENV_SEED)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{_ENV_SEED} must be an integer: {raw!r}")


def _slice_rows(sizes: SliceSizes) -> str:
    off = sizes.offsets()
    return ",".join(f"{off[j] + 1}-{off[j + 1]}" for j in range(sizes.t))


def _design_text(design: Design, seed: int, decorrelated: bool, fmt: str) -> str:
    sizes = design.sizes
    lines = [
        "# slicedlhd design",
        f"# sizes: {','.join(str(s) for s in sizes.sizes)}",
        f"# n: {design.n}",
        f"# dim: {design.p}",
        f"# seed: {seed}",
        f"# decorrelated: {'yes' if decorrelated else 'no'}",
        f"# slice rows: {_slice_rows(sizes)}",
        f"# format: {fmt}",
    ]
    if fmt == "levels":
        # Store the odd numerators 2a-1 of the midpoints (2a-1)/(2n); exact.
        numer = 2 * design.levels() - 1
        for row in numer:
            lines.append(" ".join(str(int(v)) for v in row))
    else:
        for row in design.values:
            lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _write_text(path: str | None, text: str) -> int:
    if path is None or path == "-":
        sys.stdout.write(text)
        return 0
    try:
        Path(path).write_text(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 3
    return 0


def _cmd_generate(args) -> int:
    sizes: SliceSizes = args.sizes
    if args.trace_out and not args.decorrelate:
        print("error: --trace-out requires --decorrelate", file=sys.stderr)
        return 2
    if args.decorrelate and args.dim < 2:
        print("error: --decorrelate needs at least two dimensions", file=sys.stderr)
        return 2
    partition = partition_levels(sizes)
    design = generate_sliced_lhd(sizes, args.dim, RngStream(args.seed), partition=partition)
    trace = None
    if args.decorrelate:
        design, trace = reduce_correlations(design, partition, iterations=args.iterations)
    rc = _write_text(args.output, _design_text(design, args.seed, args.decorrelate, args.format))
    if rc != 0:
        return rc
    if args.trace_out:
        try:
            write_trace_csv(trace, args.trace_out)
        except OSError as exc:
            print(f"error: cannot write {args.trace_out}: {exc}", file=sys.stderr)
            return 3
    return 0


def _parse_design_file(path: str, sizes: SliceSizes) -> Design:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}")
    fmt = None
    rows: list[list[float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.startswith("format:"):
                fmt = body.split(":", 1)[1].strip()
            continue
        try:
            rows.append([float(tok) for tok in stripped.split()])
        except ValueError:
            raise ValueError(f"line {lineno}: not numeric: {stripped!r}")
    if not rows:
        raise ValueError("no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows have inconsistent widths")
    arr = np.asarray(rows, dtype=np.float64)
    if len(rows) != sizes.n:
        raise ValueError(f"file has {len(rows)} rows but sizes sum to {sizes.n}")
    if fmt is None:
        # No header: integer-looking content is levels-format numerators.
        fmt = "levels" if np.all(arr == np.rint(arr)) and np.all(arr >= 1) else "values"
    if fmt == "levels":
        numer = np.rint(arr).astype(np.int64)
        if not np.array_equal(arr, numer) or np.any(numer % 2 != 1):
            raise ValueError("levels format expects odd integer numerators")
        values = numer / (2.0 * sizes.n)
    elif fmt == "values":
        values = arr
    else:
        raise ValueError(f"unknown format: {fmt!r}")
    return Design(values=values, sizes=sizes)


def _cmd_validate(args) -> int:
    try:
        design = _parse_design_file(args.input, args.sizes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = validate_sliced(design)
    print(report.render())
    return 0 if report.all_pass else 1


def _cmd_bench(args) -> int:
    try:
        config = ExperimentConfig.from_path(args.config)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 2
    if config.integrand == "custom":
        print("error: custom integrands are library-only", file=sys.stderr)
        return 2
    report = run_experiment(config)
    print(render_table([report]))
    print(f"replicates: {report.replicates}   true mean: {report.true_mean!r}")
    if args.output:
        try:
            Path(args.output).write_text(report.to_json() + "\n")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 3
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicedlhd",
        description="Sliced Latin hypercube designs with unequal batch sizes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="construct a sliced design")
    gen.add_argument("--sizes", type=_parse_sizes, required=True,
                     help="comma-separated slice sizes, e.g. 2,5,10")
    gen.add_argument("--dim", type=int, default=2, help="number of columns")
    gen.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default: ${_ENV_SEED} or 0)")
    gen.add_argument("--decorrelate", action="store_true",
                     help="run the correlation-reduction sweep")
    gen.add_argument("--iterations", type=int, default=10,
                     help="sweep iterations (default 10)")
    gen.add_argument("--format", choices=("levels", "values"), default="levels",
                     help="levels: exact odd numerators; values: floats")
    gen.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    gen.add_argument("--trace-out", default=None,
                     help="write the rho_rms sweep trace as CSV (needs --decorrelate)")
    gen.set_defaults(func=_cmd_generate)

    val = sub.add_parser("validate", help="check stratification of a design file")
    val.add_argument("input", help="design file produced by generate")
    val.add_argument("--sizes", type=_parse_sizes, required=True,
                     help="slice sizes the file claims to realize")
    val.set_defaults(func=_cmd_validate)

    ben = sub.add_parser("bench", help="run a benchmark config")
    ben.add_argument("config", help="JSON experiment config")
    ben.add_argument("-o", "--output", default=None, help="write the report as JSON")
    ben.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if getattr(args, "seed", None) is None and args.command == "generate":
        try:
            args.seed = _default_seed()
        except argparse.ArgumentTypeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.command == "generate":
        if args.dim < 1:
            print("error: --dim must be >= 1", file=sys.stderr)
            return 2
        if args.iterations < 1:
            print("error: --iterations must be >= 1", file=sys.stderr)
            return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
