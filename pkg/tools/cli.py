"""
cli.py
------
Command-line front end.

    python main.py analyze data/systems/ex1.sys --oracle
    python main.py randcheck --group so --n 5 --trials 500 --seed 42
    python main.py examples --json

Exit codes:
  analyze    0 GuaranteedYes, 1 GuaranteedNo, 2 HypothesisNotMet
             (with --oracle: 0 if the rank condition holds, else 1)
  randcheck  0 when no trial contradicts the oracle, else 1
  examples   0 when every bundled system matches its golden, else 1
  any        64 unreadable/unparsable system file, 70 internal soundness
             failure, 78 bad GRAPHLARC_* setting
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional

from schemas.control_schema import Timing, VerdictStatus
from tools.criteria import analyze
from tools.errors import ConfigError, SoundnessError, SystemParseError
from tools.golden_examples import run_examples
from tools.graph_core import to_dot, union_graph
from tools.randcheck import run_randcheck
from tools.reports import GREEN, RED, RESET, YELLOW, build_report, render_text, save_analysis_log
from tools.settings import Settings, load_settings, setup_logging
from tools.system_model import BilinearSystem, control_graph, drift_graph, parse_system

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_NOT_MET = 2
EXIT_PARSE = 64
EXIT_SOUNDNESS = 70
EXIT_CONFIG = 78

STATUS_EXIT = {
    VerdictStatus.YES: EXIT_OK,
    VerdictStatus.NO: EXIT_NO,
    VerdictStatus.NOT_MET: EXIT_NOT_MET,
}


# ---------------- Helper: DOT files ----------------
def write_dot_files(system: BilinearSystem, dot_dir: str) -> dict[str, str]:
    """Write contr.dot, drift.dot and union.dot; returns name -> path."""
    os.makedirs(dot_dir, exist_ok=True)
    contr = control_graph(system)
    drift = drift_graph(system)
    graphs = {
        "contr": contr,
        "drift": drift,
        "union": union_graph(drift, contr),
    }
    paths = {}
    for name, graph in graphs.items():
        path = os.path.join(dot_dir, f"{name}.dot")
        with open(path, "w", encoding="utf-8") as f:
            f.write(to_dot(graph, name=name))
        paths[name] = path
    return paths


# ---------------- analyze ----------------
def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    timing = Timing() if args.timing else None

    started = time.perf_counter()
    try:
        with open(args.path, "rb") as f:
            system = parse_system(f.read())
    except SystemParseError as e:
        print(f"{args.path}:{e.line}: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"{args.path}:0: {e.strerror or e}", file=sys.stderr)
        return EXIT_PARSE
    if timing is not None:
        timing.parse_s = time.perf_counter() - started

    try:
        verdict, oracle = analyze(system, with_oracle=args.oracle, timing=timing)
    except SoundnessError as e:
        print(f"{RED}internal soundness failure:{RESET} {e}", file=sys.stderr)
        return EXIT_SOUNDNESS

    report = build_report(system, verdict, oracle, source=args.path, timing=timing)

    if args.dot_dir:
        paths = write_dot_files(system, args.dot_dir)
        if not args.json:
            print(f"DOT files: {', '.join(paths.values())}")

    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(report), end="")

    if args.save_log:
        paths = save_analysis_log(report, log_dir=str(settings.resolve(settings.log_dir)))
        # stdout stays pure JSON with --json
        out = sys.stderr if args.json else sys.stdout
        print(f"\n✅ Report saved at:\n- {paths['json']}\n- {paths['txt']}", file=out)

    if args.oracle:
        return EXIT_OK if oracle.holds else EXIT_NO
    return STATUS_EXIT[verdict.status]


# ---------------- randcheck ----------------
def cmd_randcheck(args: argparse.Namespace, settings: Settings) -> int:
    max_controls = args.max_controls if args.max_controls is not None else settings.max_controls
    workers = args.workers if args.workers is not None else settings.workers
    summary = run_randcheck(
        group=args.group,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        max_controls=max_controls,
        workers=workers,
    )

    if args.json:
        print(summary.model_dump_json(indent=2))
    else:
        print(f"\n🎲 randcheck {summary.group}({summary.n}): {summary.trials} trial(s), seed {summary.seed}, "
              f"up to {summary.max_controls} control(s)")
        print("-" * 60)
        print(f"{'agree':<22}{summary.agree:>8}")
        print(f"{'hypothesis-not-met':<22}{summary.hypothesis_not_met:>8}")
        print(f"{'violation':<22}{summary.violation:>8}")
        print(f"{'oracle holds':<22}{summary.oracle_holds:>8}")
        for status, count in summary.by_status.items():
            print(f"  {status:<20}{count:>8}")
        if summary.violation:
            print(f"{RED}❌ violating seeds: {summary.violating_seeds}{RESET}")
        else:
            print(f"{GREEN}✅ no violations{RESET}")

    return EXIT_OK if summary.violation == 0 else EXIT_NO


# ---------------- examples ----------------
def cmd_examples(args: argparse.Namespace, settings: Settings) -> int:
    golden = Path(args.golden) if args.golden else settings.resolve(settings.golden_path)
    systems = Path(args.systems_dir) if args.systems_dir else settings.resolve(settings.systems_dir)
    try:
        report = run_examples(golden, systems)
    except ConfigError as e:
        print(f"{RED}{e}{RESET}", file=sys.stderr)
        return EXIT_NO

    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        for r in report.results:
            if r.passed:
                print(f"{GREEN}✅ {r.name}{RESET}  {r.actual_status} via {r.actual_criterion}, "
                      f"dim {r.actual_dimension}/{r.full_dimension}")
            elif r.error:
                print(f"{RED}❌ {r.name}{RESET}  {r.error}")
            else:
                print(f"{YELLOW}❌ {r.name}{RESET}  expected {r.expected_status} via {r.expected_criterion}, "
                      f"dim {r.expected_dimension}; got {r.actual_status} via {r.actual_criterion}, "
                      f"dim {r.actual_dimension}/{r.full_dimension}")
        print(f"\n{report.passed} passed, {report.failed} failed")
        if report.failed:
            print(f"failing: {', '.join(r.name for r in report.results if not r.passed)}")

    return EXIT_OK if report.failed == 0 else EXIT_NO


# ---------------- Argument parser ----------------
def _at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphlarc",
        description="Graph criteria for controllability of bilinear systems on SO(n), SL(n), GL+(n).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one system file")
    p.add_argument("path", help="system file (.sys)")
    p.add_argument("--oracle", action="store_true", help="always run the rank oracle; exit code follows it")
    p.add_argument("--dot-dir", help="write contr.dot, drift.dot and union.dot here")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings per phase")
    p.add_argument("--save-log", action="store_true", help="also save JSON + TXT reports to the log dir")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("randcheck", help="random soundness campaign against the oracle")
    p.add_argument("--group", required=True, choices=["so", "sl", "gl"])
    p.add_argument("--n", type=_at_least(2), default=4)
    p.add_argument("--trials", type=_at_least(1), default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-controls", type=_at_least(0), default=None, help="0 means n + 2")
    p.add_argument("--workers", type=_at_least(1), default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_randcheck)

    p = sub.add_parser("examples", help="run the bundled systems against their goldens")
    p.add_argument("--json", action="store_true")
    p.add_argument("--systems-dir", help="folder holding ex1.sys .. ex8.sys")
    p.add_argument("--golden", help="golden table (JSON)")
    p.set_defaults(handler=cmd_examples)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    try:
        settings = load_settings()
    except ConfigError as e:
        print(f"{RED}{e}{RESET}", file=sys.stderr)
        return EXIT_CONFIG
    setup_logging(settings)

    args = build_parser().parse_args(argv)
    logger.info("command %s", args.command)
    return args.handler(args, settings)
