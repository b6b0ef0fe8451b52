"""Command-line interface: run benchmarks, build performance profiles,
and list the built-in problems."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bench, corpus, engine
from .errors import InconsistentRecordsError, SolverError, UnknownProblemError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUN_FAILURES = 2

# CLI/config key -> SolverOptions field
_OPTION_KEYS = {
    "alpha": "alpha",
    "alpha_hat": "alpha_hat",
    "eta": "eta",
    "theta": "theta",
    "sigma": "sigma",
    "rho": "rho",
    "tau": "tau",
    "epsilon": "epsilon",
    "p": "p",
    "gamma": "gamma",
    "gamma0": "gamma0",
    "c_init": "c_init",
    "kappa": "kappa",
    "mu": "mu_bfgs",
    "tol": "term_tol",
    "max_iter": "max_iter",
}


class _UsageError(Exception):
    """Bad flags/config; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="isqp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve benchmark problems and emit a result table")
    run.add_argument("--problem", default="all",
                     help="problem name, comma-separated names, or 'all' (default)")
    run.add_argument("--start", choices=("a", "b", "both"), default="both",
                     help="feasible (a), infeasible (b), or both starts (default both)")
    run.add_argument("--x0", default=None,
                     help="comma-separated custom start (single problem only)")
    run.add_argument("--tol", type=float, default=None,
                     help="termination tolerance on the search-direction norm")
    run.add_argument("--max-iter", type=int, default=None, dest="max_iter",
                     help="iteration cap (default 500)")
    for flag in ("alpha", "alpha-hat", "eta", "theta", "sigma", "rho", "tau",
                 "epsilon", "p", "gamma", "gamma0", "c-init", "kappa", "mu"):
        run.add_argument(f"--{flag}", type=float, default=None,
                         dest=flag.replace("-", "_"),
                         help=f"override solver parameter {flag.replace('-', '_')}")
    run.add_argument("--trace", action="store_true",
                     help="print per-iteration diagnostics to stderr")
    run.add_argument("--config", default=None,
                     help="flat JSON file of parameter overrides (flags win)")
    run.add_argument("--out", default=None, help="write the table here instead of stdout")
    run.add_argument("--format", choices=("csv", "markdown"), default="csv")
    run.add_argument("--seed", type=int, default=None,
                     help="reserved for randomized harnesses; the solver is deterministic")

    profile = sub.add_parser("profile", help="build performance profiles from result CSVs")
    profile.add_argument("results", nargs="+",
                         help="result CSV files; the file stem is the solver label")
    profile.add_argument("--metric", choices=("ni", "nf0", "nf", "cpu_seconds"),
                         default="ni", help="performance metric (default ni)")
    profile.add_argument("--out", default=None)

    sub.add_parser("list", help="list built-in problems")
    return parser


def _load_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise _UsageError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise _UsageError(f"config {path!r} must be a flat JSON object")
    overrides = {}
    for key, value in raw.items():
        if key not in _OPTION_KEYS:
            raise _UsageError(f"config {path!r}: unknown key {key!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise _UsageError(f"config {path!r}: {key!r} must be a number")
        overrides[_OPTION_KEYS[key]] = value
    return overrides


def _merge_options(args) -> engine.SolverOptions:
    overrides: dict = {}
    if args.config:
        overrides.update(_load_config(args.config))
    for cli_key, field in _OPTION_KEYS.items():
        value = getattr(args, cli_key, None)
        if value is not None:
            overrides[field] = value
    if "max_iter" in overrides:
        overrides["max_iter"] = int(overrides["max_iter"])
    if "p" in overrides:
        p = overrides["p"]
        overrides["p"] = int(p) if float(p).is_integer() else p
    try:
        return engine.SolverOptions(keep_trace=args.trace, **overrides)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _select_problems(selector: str) -> list[str]:
    if selector == "all":
        return corpus.list_problems()
    names = [s.strip() for s in selector.split(",") if s.strip()]
    if not names:
        raise _UsageError("--problem got an empty selection")
    for name in names:
        try:
            corpus.get_problem(name)
        except UnknownProblemError as exc:
            raise _UsageError(str(exc)) from exc
    return names


def _trace_line(record: engine.IterationRecord) -> str:
    t = "-" if record.t is None else f"{record.t:.4g}"
    branch = record.branch or "-"
    return (f"  k={record.k:<3d} phi={record.phi:.3e} fc={record.fc: .9e} "
            f"|d0|={record.norm_d0:.3e} c={record.c:g} t={t} step={branch} "
            f"|I-|={record.iminus_size}")


def _run_with_trace(entry: corpus.CorpusEntry, start: str,
                    options: engine.SolverOptions, trace: bool) -> bench.RunRecord:
    if not trace:
        return bench.run_one(entry, start, options)
    x0 = entry.x0_feasible if start == "a" else entry.x0_infeasible
    report = engine.solve(entry.problem, x0, options)
    print(f"{entry.name} start={start}", file=sys.stderr)
    for rec in report.trace:
        print(_trace_line(rec), file=sys.stderr)
    print(f"  -> {report.status.value}: fv={report.fv:.9e} ni={report.ni}",
          file=sys.stderr)
    n, m1, m2 = entry.dims
    return bench.RunRecord(
        problem=entry.name, n=n, m1=m1, m2=m2, start=start,
        status=report.status, nio=report.nio, nii=report.nii, ni=report.ni,
        nf0=report.nf0, nf=report.nf, fv=report.fv,
        kkt_residual=report.kkt_residual, phi_final=report.phi_final,
        cpu_seconds=report.wall_seconds,
    )


def _cmd_run(args) -> int:
    options = _merge_options(args)
    names = _select_problems(args.problem)

    records: list[bench.RunRecord] = []
    if args.x0 is not None:
        if len(names) != 1:
            raise _UsageError("--x0 requires exactly one --problem")
        try:
            x0 = np.array([float(v) for v in args.x0.split(",")], dtype=float)
        except ValueError as exc:
            raise _UsageError(f"--x0 is not a comma-separated real vector: {exc}") from exc
        entry = corpus.get_problem(names[0])
        if x0.shape != (entry.problem.n,):
            raise _UsageError(
                f"--x0 has {x0.size} components; {entry.name} needs {entry.problem.n}"
            )
        report = engine.solve(entry.problem, x0, options)
        if args.trace:
            print(f"{entry.name} start=custom", file=sys.stderr)
            for rec in report.trace:
                print(_trace_line(rec), file=sys.stderr)
        n, m1, m2 = entry.dims
        records.append(bench.RunRecord(
            problem=entry.name, n=n, m1=m1, m2=m2, start="custom",
            status=report.status, nio=report.nio, nii=report.nii, ni=report.ni,
            nf0=report.nf0, nf=report.nf, fv=report.fv,
            kkt_residual=report.kkt_residual, phi_final=report.phi_final,
            cpu_seconds=report.wall_seconds,
        ))
    else:
        wanted = ("a", "b") if args.start == "both" else (args.start,)
        for name in names:
            entry = corpus.get_problem(name)
            for start in wanted:
                x0 = entry.x0_feasible if start == "a" else entry.x0_infeasible
                if x0 is None:
                    continue
                records.append(_run_with_trace(entry, start, options, args.trace))
    if not records:
        raise _UsageError("selection produced no runs (no matching start points)")

    text = bench.emit_table(records, fmt=args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.converged for r in records) else EXIT_RUN_FAILURES


def _read_results_csv(path: str, metric: str) -> dict[str, float]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path!r}: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    expected = bench.CSV_HEADER.split(",")
    if reader.fieldnames != expected:
        raise _UsageError(f"{path!r} does not have the benchmark CSV header")
    out: dict[str, float] = {}
    for row in reader:
        key = f"{row['problem']}:{row['start']}"
        if row["status"] != engine.SolveStatus.CONVERGED.value:
            out[key] = math.inf
            continue
        value = float(row[metric])
        out[key] = max(value, 1e-9)
    if not out:
        raise _UsageError(f"{path!r} contains no result rows")
    return out


def _cmd_profile(args) -> int:
    by_solver: dict[str, dict[str, float]] = {}
    for path in args.results:
        label = Path(path).stem
        if label in by_solver:
            raise _UsageError(f"duplicate solver label {label!r}")
        by_solver[label] = _read_results_csv(path, args.metric)
    try:
        curves = bench.compute_profiles(by_solver)
    except InconsistentRecordsError as exc:
        raise _UsageError(str(exc)) from exc
    text = bench.emit_profiles(curves)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_list(_args) -> int:
    print(f"{'name':8s} {'n':>3s} {'m1':>3s} {'m2':>3s} {'starts':7s} fv_reference")
    for name in corpus.list_problems():
        entry = corpus.get_problem(name)
        n, m1, m2 = entry.dims
        starts = "".join(
            s for s, x in (("a", entry.x0_feasible), ("b", entry.x0_infeasible))
            if x is not None
        )
        print(f"{name:8s} {n:3d} {m1:3d} {m2:3d} {starts:7s} {entry.fv_reference:.10g}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "profile":
            return _cmd_profile(args)
        return _cmd_list(args)
    except _UsageError as exc:
        print(f"isqp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:  # batch-level failures not captured per-run
        print(f"isqp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
