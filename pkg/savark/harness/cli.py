"""Command-line front end: run, converge, audit, equiv and suite.

Exit codes: 0 success, 2 configuration error, 3 solver failure, 1 anything else.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from dotenv import load_dotenv

from savark.errors import ConfigError, SolverError
from savark.harness.audit import AUDIT_COLUMNS, audit_tableaux, render_audit_text
from savark.harness.config import default_out_dir, load_config
from savark.harness.converge import ConvergenceRow, Reference, converge, run_suite
from savark.harness.equivalence import equivalence_check
from savark.harness.io import CONVERGENCE_COLUMNS, format_value, write_convergence_csv, write_csv, write_out
from savark.harness.run import run


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def parse_dt_list(text: str) -> List[float]:
    try:
        values = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as e:
        raise ConfigError(f"bad --dt list '{text}'") from e
    if not values or any(v <= 0 for v in values):
        raise ConfigError(f"--dt needs positive step sizes, got '{text}'")
    return values


def render_table(rows: Sequence[ConvergenceRow]) -> str:
    lines = [" ".join(f"{c:>14}" for c in CONVERGENCE_COLUMNS)]
    for r in rows:
        cells = r.as_row()
        lines.append(" ".join(f"{(format_value(cells[c]) or '-')[:14]:>14}" for c in CONVERGENCE_COLUMNS))
    return "\n".join(lines)


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.format:
        config = config.with_sections(output={**config.output, "format": args.format})
    result = run(config, out_dir=args.out)
    print(f"RUN_DIR={result.run_dir}")
    print(f"RUN_ID={result.manifest['run_id']}")
    print(f"STEPS={result.manifest['steps']}")
    print(f"SNAPSHOTS={len(result.manifest['snapshots'])}")
    print(f"STATUS={result.manifest['status']}")
    return EXIT_OK


def cmd_converge(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    dts = parse_dt_list(args.dt)
    rows = converge(config, dts, Reference.parse(args.reference), workers=args.workers)
    out = Path(args.out) if args.out else Path(default_out_dir()) / f"convergence_{config.scheme_label()}.csv"
    write_convergence_csv(out, rows)
    print(render_table(rows))
    print(f"CSV={out}")
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    rows = audit_tableaux()
    text = render_audit_text(rows)
    print(text, end="")
    if args.out:
        write_out(Path(args.out) / "audit.txt", text)
        write_csv(Path(args.out) / "audit.csv", AUDIT_COLUMNS, [r.as_row() for r in rows])
        print(f"AUDIT_DIR={args.out}")
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace) -> int:
    result = equivalence_check(args.base, args.sweeps, args.model, args.steps)
    print(f"BASE={result.base}")
    print(f"SWEEPS={result.sweeps}")
    print(f"MODEL={result.model}")
    print(f"DEVIATION={result.deviation:.3e}")
    print(f"PASSED={'true' if result.passed else 'false'}")
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_suite(args: argparse.Namespace) -> int:
    out = args.out or default_out_dir()
    results = run_suite(args.name, out, workers=args.workers)
    for label, rows in results.items():
        print(f"== {label}")
        print(render_table(rows))
    print(f"SUITE_DIR={Path(out) / args.name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="savark", description="SAV additive Runge-Kutta solver suite")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate one configured problem")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="run directory (default <output.directory>/<run_id>)")
    p.add_argument("--format", choices=["binary", "csv"], default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="temporal refinement table")
    p.add_argument("--config", required=True)
    p.add_argument("--dt", required=True, help="comma separated step sizes, coarsest first")
    p.add_argument("--reference", required=True, help="manufactured | fine:TAU[:SCHEME]")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV path")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("audit", help="validate and analyse the built-in tableaux")
    p.add_argument("--out", default=None, help="directory for audit.txt and audit.csv")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("equiv", help="compare prediction-correction with its four-tableau form")
    p.add_argument("--base", required=True)
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--model", required=True, choices=["ac", "ch", "mbe"])
    p.add_argument("--steps", type=int, default=5)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("suite", help="run a catalog experiment suite")
    p.add_argument("name")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"::error::{e}")
        return EXIT_CONFIG
    except SolverError as e:
        print(f"::error::{e}")
        return EXIT_SOLVER
    except Exception as e:
        print(f"::error::{e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
