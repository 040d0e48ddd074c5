"""Command line interface for rigid-galois.

Exit codes:
    0  success
    2  usage or argument error
    3  I/O error
    4  graph format error
    5  graph is not minimally rigid
    6  graph is not type-1
    7  no generic labelling certified
    8  factorization too hard
    9  group or permutation set too large
    10 internal inconsistency
    11 sampler found real counts outside the predicted spectrum
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from controller.config import DEFAULT_DB_PATH, ConfigError, RunConfig
from controller.pipeline import GaloisController
from exact_tower.quadratic import DegreeMismatchError, FactorizationTooHardError
from galois_engine.permutations import DegreeTooLargeError, InternalInconsistencyError
from graph_core.graph import GraphError, NotLamanError, NotType1Error
from persistence.database import Database
from realization_engine.geometry import GenericityFailure

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_NOT_LAMAN = 5
EXIT_NOT_TYPE1 = 6
EXIT_GENERICITY = 7
EXIT_FACTORIZATION = 8
EXIT_TOO_LARGE = 9
EXIT_INCONSISTENT = 10
EXIT_VIOLATIONS = 11

# most specific first
EXIT_CODES = (
    (NotLamanError, EXIT_NOT_LAMAN),
    (NotType1Error, EXIT_NOT_TYPE1),
    (GraphError, EXIT_FORMAT),
    (GenericityFailure, EXIT_GENERICITY),
    (FactorizationTooHardError, EXIT_FACTORIZATION),
    (DegreeTooLargeError, EXIT_TOO_LARGE),
    (InternalInconsistencyError, EXIT_INCONSISTENT),
    (DegreeMismatchError, EXIT_INCONSISTENT),
    (ConfigError, EXIT_USAGE),
    (OSError, EXIT_IO),
)


def exit_code_for(exc: BaseException) -> Optional[int]:
    for error_type, code in EXIT_CODES:
        if isinstance(exc, error_type):
            return code
    return None


def _graph_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("graph", help="edge-list or JSON graph file, or catalog:<key>")
    parser.add_argument("--base", nargs=2, type=int, metavar=("U", "V"), help="base edge override")
    parser.add_argument("--seed", type=int, help="labelling seed (default: $RIGID_GALOIS_SEED or 1)")
    parser.add_argument("--range", type=int, help="bound on numerators and denominators of labels")
    parser.add_argument("--cap", type=int, help="largest group order enumerated element by element")
    parser.add_argument("--attempts", type=int, help="genericity retry budget")
    parser.add_argument("--workers", type=int, help="worker processes for brute force and sampling")
    parser.add_argument("--profile", help="load defaults from a saved profile")
    parser.add_argument("--save-profile", help="store the effective settings under this name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigid-galois",
        description="Exact Galois groups of minimally rigid type-1 graphs",
    )
    parser.add_argument("--db", help="SQLite file for logs, run history and profiles")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="compute and analyze the Galois group")
    _graph_options(analyze)
    analyze.add_argument("--output", help="write the JSON report here instead of stdout")

    sample = sub.add_parser("sample", help="count real realizations of random real labellings")
    _graph_options(sample)
    sample.add_argument("--trials", type=int, help="number of random labellings")
    sample.add_argument("--tolerance", type=float, help="skip trials with |beta^2| below this")

    realize = sub.add_parser("realize", help="dump every realization as JSON")
    _graph_options(realize)
    realize.add_argument("--precision", type=Fraction, help="radius of the numeric coordinate balls")

    mqdeg = sub.add_parser("mqdeg", help="degree of Q(sqrt(a1), ..., sqrt(ak)) over Q")
    mqdeg.add_argument("values", nargs="+", help="nonzero rationals such as 2, -3 or 5/7")

    logs = sub.add_parser("logs", help="show recent log entries")
    logs.add_argument("--limit", type=int, default=20)

    history = sub.add_parser("history", help="show previous analyze runs")
    history.add_argument("--limit", type=int, default=20)
    history.add_argument("--csv", help="export the run history to this CSV file")
    return parser


def _config_from_args(args: argparse.Namespace, db: Database, db_path: str) -> RunConfig:
    base = {}
    if args.profile:
        stored = db.get_profile(args.profile)
        if stored is None:
            raise ConfigError(f"Unknown profile {args.profile!r}")
        base = stored
    overrides = {
        "graph_path": args.graph,
        "base": tuple(args.base) if args.base else None,
        "seed": args.seed,
        "range": args.range,
        "cap": args.cap,
        "attempts": args.attempts,
        "workers": args.workers,
        "trials": getattr(args, "trials", None),
        "tolerance": getattr(args, "tolerance", None),
        "precision": getattr(args, "precision", None),
        "db_path": db_path,
    }
    config = RunConfig.from_profile(base, **overrides)
    if args.save_profile:
        db.save_profile(args.save_profile, config.to_profile())
    return config


def _emit(payload: dict, output: Optional[str] = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _summary(report: dict) -> str:
    group = report["group"]
    lines = [
        f"realizations: {report['realizations']}",
        f"k-sequence:   {group['k_sequence']}",
        f"group order:  {group['order']}",
    ]
    if group["order_profile"] is not None:
        lines.append(f"order profile: {group['order_profile']}  centre: {group['center_size']}")
    if group["real_count_spectrum"] is not None:
        lines.append(f"real-count spectrum: {group['real_count_spectrum']}")
    return "\n".join(lines)


def run(args: argparse.Namespace) -> int:
    db_path = args.db or DEFAULT_DB_PATH
    db = Database(db_path)

    if args.command == "mqdeg":
        controller = GaloisController(db)
        try:
            report = controller.mqdeg(args.values)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        _emit(report.to_json())
        return EXIT_OK

    if args.command == "logs":
        for record in db.recent_logs(args.limit):
            context = json.dumps(record.context, sort_keys=True) if record.context else ""
            print(f"{record.id:>6} {record.created_at.isoformat()} {record.level:<7} {record.message} {context}")
        return EXIT_OK

    if args.command == "history":
        if args.csv:
            path = db.export_history_csv(args.csv)
            print(f"history written to {path}")
            return EXIT_OK
        for record in db.history(args.limit):
            print(
                f"{record.id:>5} {record.created_at.isoformat()} {record.graph_source} "
                f"seed={record.seed} order={record.order} k={record.k_sequence}"
            )
        return EXIT_OK

    config = _config_from_args(args, db, db_path)
    controller = GaloisController(db)

    if args.command == "analyze":
        report = controller.analyze(config)
        _emit(report, args.output)
        if args.output:
            print(_summary(report))
        return EXIT_OK

    if args.command == "realize":
        _emit(controller.realize(config))
        return EXIT_OK

    if args.command == "sample":
        sample = controller.sample_real(config)
        _emit(sample.to_json())
        return EXIT_VIOLATIONS if sample.violations else EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return code


def cli_entry(argv: Optional[List[str]] = None) -> None:
    raise SystemExit(main(argv))
