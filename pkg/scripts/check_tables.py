#!/usr/bin/env python3
"""
fracplap Table Checks

A utility script for checking tables written by main.py, for use in CI.
This script provides subcommands to:
- Check the share of green rows in a compare table
- Check observed convergence orders in a discrete table

Usage:
    python check_tables.py check-agreement --results compare.csv --min-green 90
    python check_tables.py check-order --results discrete.csv --min-order 1.5 --max-order 2.5
"""

import argparse
import sys
from typing import Dict, Tuple

import pandas as pd


# ------------------- Utility Functions -------------------


def load_results(file_path: str, required_cols: Tuple[str, ...]) -> pd.DataFrame:
    """Load a CSV or JSON table and check that it has the required columns."""
    try:
        if file_path.endswith(".json"):
            df = pd.read_json(file_path, orient="records")
        else:
            df = pd.read_csv(file_path)
        missing = [col for col in required_cols if col not in df.columns]
        if missing:
            raise ValueError(f"Missing required columns: {', '.join(missing)}")
        return df
    except Exception as e:
        print(f"Error loading results file {file_path}: {e}")
        sys.exit(1)


def get_status_counts(df: pd.DataFrame) -> Tuple[Dict[str, int], int, float]:
    """Status distribution and the percentage of green rows among rated rows."""
    status_counts = df["status"].value_counts().to_dict()
    rated = len(df) - status_counts.get("skipped", 0)
    green_count = status_counts.get("green", 0)
    green_percentage = (green_count / rated) * 100 if rated > 0 else 0.0
    return status_counts, rated, green_percentage


# ------------------- Commands -------------------


def check_agreement(args: argparse.Namespace) -> None:
    """Fail when too few rows of a compare table are green."""
    df = load_results(args.results, ("status",))
    status_counts, rated, green_percentage = get_status_counts(df)

    print("Agreement Summary:")
    print(f"Rated rows: {rated} (skipped: {status_counts.get('skipped', 0)})")
    print(f"Green rows: {status_counts.get('green', 0)} ({green_percentage:.2f}%)")
    print(f"Minimum required: {args.min_green}%")

    if green_percentage < args.min_green:
        print(
            f"❌ Agreement check failed: {green_percentage:.2f}% green rows is below "
            f"the minimum of {args.min_green}%"
        )
        sys.exit(1)
    print(f"✅ Agreement check passed: {green_percentage:.2f}% green rows")
    sys.exit(0)


def check_order(args: argparse.Namespace) -> None:
    """Fail when an observed convergence order leaves [min_order, max_order]."""
    df = load_results(args.results, ("h", "order"))
    orders = df["order"].dropna()
    if orders.empty:
        print("❌ Order check failed: no observed orders in the table")
        sys.exit(1)

    print("Order Summary:")
    for h, order in zip(df.loc[orders.index, "h"], orders):
        print(f"h = {h:g}: order {order:.3f}")

    outside = orders[(orders < args.min_order) | (orders > args.max_order)]
    if not outside.empty:
        print(
            f"❌ Order check failed: {len(outside)} of {len(orders)} orders outside "
            f"[{args.min_order}, {args.max_order}]"
        )
        sys.exit(1)
    print(f"✅ Order check passed: all orders within [{args.min_order}, {args.max_order}]")
    sys.exit(0)


def main():
    parser = argparse.ArgumentParser(
        description="fracplap Table Checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    agreement_parser = subparsers.add_parser(
        "check-agreement", help="Check the share of green rows in a compare table"
    )
    agreement_parser.add_argument("--results", required=True, help="Path to a compare table")
    agreement_parser.add_argument(
        "--min-green", type=float, default=90.0, help="Minimum percentage of green rows"
    )

    order_parser = subparsers.add_parser(
        "check-order", help="Check observed orders in a discrete table"
    )
    order_parser.add_argument("--results", required=True, help="Path to a discrete table")
    order_parser.add_argument("--min-order", type=float, default=1.5, help="Smallest accepted order")
    order_parser.add_argument("--max-order", type=float, default=2.5, help="Largest accepted order")

    args = parser.parse_args()

    if args.command == "check-agreement":
        check_agreement(args)
    elif args.command == "check-order":
        check_order(args)
    else:
        parser.print_help()
        sys.exit(1)


if __name__ == "__main__":
    main()
