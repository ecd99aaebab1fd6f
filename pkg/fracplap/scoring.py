"""
Scoring system that turns cross-representation gaps into traffic light statuses.
"""

import math
from typing import List

import pandas as pd


class AgreementScorer:
    """
    Converts the gap between representations into a traffic light indicator.

    The gap is compared with the error budget, the sum of the error estimates
    the representations reported:
    - Green: gap within the budget
    - Yellow: gap within `yellow_factor` times the budget
    - Red: anything larger
    - Skipped: the row has no values (hypothesis violation or failure)
    """

    def __init__(self, yellow_factor: float = 10.0, floor: float = 1e-12, skipped_threshold: float = 0.5):
        """
        Initialize the agreement scorer.

        Args:
            yellow_factor: Multiple of the budget still rated yellow
            floor: Absolute budget below which gaps are treated as round-off
            skipped_threshold: Largest share of skipped rows that still allows
                a green overall status
        """
        self.yellow_factor = yellow_factor
        self.floor = floor
        self.skipped_threshold = skipped_threshold

    def score_to_status(self, gap: float, budget: float) -> str:
        """
        Convert a gap and its budget to a status.

        Args:
            gap: Largest pairwise absolute difference
            budget: Combined error estimate

        Returns:
            'green', 'yellow', 'red' or 'skipped' when the gap is missing
        """
        if gap is None or (isinstance(gap, float) and math.isnan(gap)):
            return "skipped"
        budget = max(budget, self.floor)
        if gap <= budget:
            return "green"
        if gap <= self.yellow_factor * budget:
            return "yellow"
        return "red"

    def compute_overall_status(self, statuses: List[str]) -> str:
        """
        Overall status of a table.

        Red wins over yellow, yellow over green. Too many skipped rows cap the
        status at yellow.
        """
        rated = [status for status in statuses if status != "skipped"]
        if not rated:
            return "red"
        if "red" in rated:
            return "red"
        skipped_share = 1.0 - len(rated) / len(statuses)
        if "yellow" in rated or skipped_share > self.skipped_threshold:
            return "yellow"
        return "green"

    def score_results(self, results_df: pd.DataFrame) -> pd.DataFrame:
        """
        Add a status column computed from max_gap and error_budget.

        Rows already marked skipped keep that status.
        """
        df = results_df.copy()
        if df.empty:
            df["status"] = pd.Series(dtype=str)
            return df

        def row_status(row: pd.Series) -> str:
            if row.get("status") == "skipped":
                return "skipped"
            return self.score_to_status(row.get("max_gap", math.nan), row.get("error_budget", 0.0))

        df["status"] = df.apply(row_status, axis=1)
        return df
