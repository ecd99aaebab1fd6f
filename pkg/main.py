"""
fracplap: numerical experiments with the fractional p-Laplacian

This module is the command-line front end. Each subcommand computes one table
and writes it as CSV or JSON:
- constants: normalization constants C1..C4 and their dimension residuals
- compare: the four representations at a set of points, scored for agreement
- limits: the s -> 1 and p -> 2 limits
- discrete: convergence of the finite-difference operator
- spectral: the operator on an interval against the whole-space operator
- seminorm: the three Gagliardo seminorm forms
- weights-export: the discrete weight table

Usage:
    python main.py compare --function cosine --points 0,0.5,1 --s 0.5 --p 2
    python main.py discrete --function cosine --s 0.5 --p 2 --h-list 0.4,0.2,0.1
    python main.py constants --output constants.json --format json
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError

from fracplap.commands import run, write_table
from fracplap.config import QuadConfig, RunConfig
from fracplap.errors import FracPLapError, UnsupportedFunctionError
from fracplap.scoring import AgreementScorer

# Load environment variables from .env file
load_dotenv()

DEFAULT_FUNCTION = {"spectral": "compact_bump", "limits": "gaussian"}
STATUS_EMOJI = {"green": "🟢", "yellow": "🟡", "red": "🔴", "skipped": "⚪"}


def parse_floats(text: Optional[str]) -> Optional[List[float]]:
    """Comma-separated numbers, or None."""
    if text is None:
        return None
    return [float(item) for item in text.split(",") if item.strip()]


def parse_points(text: str, seed: int) -> List[float]:
    """
    Evaluation points: '0,0.5,1' or 'random:K' for K seeded uniform points in [-2, 2].
    """
    if text.startswith("random:"):
        count = int(text.split(":", 1)[1])
        rng = np.random.default_rng(seed)
        return [float(v) for v in np.round(rng.uniform(-2.0, 2.0, count), 6)]
    return parse_floats(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="Space dimension")
    common.add_argument("--s", type=float, default=0.5, help="Fractional order in (0, 1)")
    common.add_argument("--p", type=float, default=2.0, help="Growth exponent > 1")
    common.add_argument("--function", type=str, help="Catalog function name")
    common.add_argument("--amplitude", type=float, default=1.0, help="Value scaling of the function")
    common.add_argument("--points", type=str, default="0", help="Comma-separated points or random:K")
    common.add_argument("--tol", type=float, help="Relative quadrature tolerance")
    common.add_argument("--hermite-nodes", type=int, help="Gauss-Hermite nodes per axis")
    common.add_argument(
        "--output", type=str, default=os.environ.get("FRACPLAP_OUTPUT"), help="Output file (stdout if omitted)"
    )
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    common.add_argument("--seed", type=int, default=0, help="Seed for random points")
    common.add_argument(
        "--workers", type=int, default=int(os.environ.get("FRACPLAP_WORKERS", 1)), help="Worker processes"
    )

    parser = argparse.ArgumentParser(
        description="Numerical experiments with the fractional p-Laplacian",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to execute")

    constants_parser = subparsers.add_parser("constants", parents=[common], help="Normalization constants")
    constants_parser.add_argument("--n-list", type=str, default="1,2,3", help="Dimensions")
    constants_parser.add_argument("--s-list", type=str, default="0.25,0.5,0.75", help="Orders")
    constants_parser.add_argument("--p-list", type=str, default="1.5,2,3", help="Exponents")

    compare_parser = subparsers.add_parser("compare", parents=[common], help="Cross-representation agreement")
    compare_parser.add_argument(
        "--representations", type=str, help="Comma-separated subset of direct,semigroup,extension,balakrishnan"
    )

    limits_parser = subparsers.add_parser("limits", parents=[common], help="s -> 1 and p -> 2 limits")
    limits_parser.add_argument("--mode", choices=["s_to_1", "p_to_2"], default="s_to_1")
    limits_parser.add_argument("--grid", type=str, help="Comma-separated s or p values")

    for name, help_text in (
        ("discrete", "Finite-difference convergence study"),
        ("weights-export", "Discrete weight table"),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--h-list", type=str, default="0.4,0.2,0.1", help="Lattice spacings")
        sub.add_argument("--kappa", type=float, default=1.0, help="delta = h^kappa")
        sub.add_argument("--delta-zero", action="store_true", help="Use delta = 0")
        sub.add_argument("--stencil", type=int, help="Stencil radius")
        if name == "discrete":
            sub.add_argument("--delta-sensitivity", action="store_true", help="Repeat for kappa in 0.5, 1, 2")

    spectral_parser = subparsers.add_parser("spectral", parents=[common], help="Interval versus whole space")
    spectral_parser.add_argument("--lengths", type=str, default="4,8,16", help="Interval lengths")
    spectral_parser.add_argument("--bump-radius", type=float, default=1.5, help="Support radius of the bump")

    seminorm_parser = subparsers.add_parser("seminorm", parents=[common], help="Gagliardo seminorms")
    seminorm_parser.add_argument("--s-list", type=str, default="0.25,0.5,0.75", help="Orders")
    seminorm_parser.add_argument("--p-list", type=str, default="1.5,2,3", help="Exponents")

    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Validated RunConfig from parsed arguments; flags override the environment.

    Raises:
        ValidationError: If any value is out of range
    """
    quad = QuadConfig.from_env(rel_tol=args.tol, hermite_nodes=args.hermite_nodes)
    values = {
        "command": args.command,
        "n": args.n,
        "s": args.s,
        "p": args.p,
        "function": args.function or DEFAULT_FUNCTION.get(args.command, "gaussian"),
        "amplitude": args.amplitude,
        "points": parse_points(args.points, args.seed),
        "quad": quad,
        "output": args.output,
        "format": args.format,
        "seed": args.seed,
        "workers": args.workers,
    }
    optional = {
        "n_list": lambda v: [int(x) for x in parse_floats(v)],
        "s_list": parse_floats,
        "p_list": parse_floats,
        "grid": parse_floats,
        "h_list": parse_floats,
        "lengths": parse_floats,
        "representations": lambda v: [x.strip() for x in v.split(",")],
    }
    for key, convert in optional.items():
        raw = getattr(args, key, None)
        if raw is not None:
            values[key] = convert(raw)
    for key in ("mode", "kappa", "delta_zero", "delta_sensitivity", "stencil", "bump_radius"):
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    return RunConfig(**values)


def print_summary(config: RunConfig, table: pd.DataFrame) -> None:
    """Short human-readable summary on stderr, so tables on stdout stay clean."""
    out = sys.stderr
    print(f"\n{config.command.capitalize()} Summary:", file=out)
    print("-" * 50, file=out)
    print(f"📊 Rows: {len(table)}", file=out)
    if "status" in table.columns:
        statuses = table["status"].value_counts()
        for status in ("green", "yellow", "red", "ok", "skipped", "weights_diverge"):
            if status in statuses:
                count = statuses[status]
                emoji = STATUS_EMOJI.get(status, "✅" if status == "ok" else "⚠️")
                print(f"{emoji} {status}: {count} ({count / len(table) * 100:.1f}%)", file=out)
    if config.command == "compare" and "status" in table.columns:
        overall = AgreementScorer().compute_overall_status(table["status"].tolist())
        print(f"\nOverall agreement: {STATUS_EMOJI.get(overall, '')} {overall}", file=out)
    for column in ("max_gap", "gap", "whole_space_gap", "abs_error"):
        if column in table.columns and table[column].notna().any():
            print(f"📏 Largest {column}: {table[column].max():.3e}", file=out)
    if config.output:
        print(f"\nResults saved to {config.output}", file=out)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    logging.basicConfig(
        level=os.environ.get("LOG_LEVEL", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = build_config(args)
        table = run(config)
    except (ValidationError, UnsupportedFunctionError) as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return 2
    except FracPLapError as e:
        print(f"❌ Numerical failure ({e.code}): {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return 2

    write_table(table, config.output, config.format)
    print_summary(config, table)
    return 0


if __name__ == "__main__":
    sys.exit(main())
