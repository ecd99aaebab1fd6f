"""
Comparison pipeline that runs several representations over evaluation points.
"""

import logging
import math
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm
from tqdm.contrib.concurrent import process_map

from fracplap.config import FracParams, QuadConfig
from fracplap.errors import FracPLapError, HypothesisError, UnsupportedFunctionError
from fracplap.funcs import TestFunction, catalog
from fracplap.reps import REPRESENTATIONS
from fracplap.reps.base import Representation
from fracplap.reps.oracles import fractional_laplacian_oracle
from fracplap.scoring import AgreementScorer

logger = logging.getLogger(__name__)

ORACLE_FUNCTIONS = ("gaussian", "shifted_gaussian", "cosine", "constant")


def embed_point(x: Any, n: int) -> np.ndarray:
    """A scalar x means (x, 0, ..., 0); sequences are taken as given."""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.shape == (1,) and n > 1:
        point = np.concatenate([point, np.zeros(n - 1)])
    return point


def describe_error(error: FracPLapError) -> str:
    return f"{error.code}: {error}"


class ComparisonPipeline:
    """
    Pipeline for evaluating the fractional p-Laplacian with several representations.

    Orchestrates the representations over a set of points and scores how well
    they agree.
    """

    def __init__(
        self,
        representations: Optional[List[Representation]] = None,
        scorer: Optional[AgreementScorer] = None,
        with_oracle: bool = True,
    ):
        """
        Initialize a comparison pipeline.

        Args:
            representations: Representation objects, all four by default
            scorer: AgreementScorer rating the gaps
            with_oracle: Add the Fourier-side reference at p = 2 where one exists
        """
        self.representations = representations or [cls() for cls in REPRESENTATIONS.values()]
        self.scorer = scorer or AgreementScorer()
        self.with_oracle = with_oracle

    def evaluate_single(
        self, u: TestFunction, x: Any, params: FracParams, cfg: Optional[QuadConfig] = None
    ) -> Dict[str, Any]:
        """
        Evaluate all representations at one point.

        Hypothesis violations mark the row skipped; other failures are recorded
        per representation and the remaining values are still compared.

        Args:
            u: Test function
            x: Evaluation point (a scalar is placed on the first axis)
            params: Operator parameters
            cfg: Quadrature settings

        Returns:
            Row dictionary with <name>_value / <name>_error columns, max_gap,
            error_budget, status and error
        """
        cfg = cfg or QuadConfig()
        point = embed_point(x, params.n)
        row: Dict[str, Any] = {
            "function": u.name,
            "x": float(point[0]) if params.n == 1 else point.tolist(),
            "n": params.n,
            "s": params.s,
            "p": params.p,
        }
        values: Dict[str, float] = {}
        budget = 0.0
        errors = []

        for representation in self.representations:
            name = representation.name
            try:
                estimate = representation.evaluate(u, point, params, cfg)
            except HypothesisError as e:
                logger.info("%s at %s skipped: %s", u.name, point.tolist(), e)
                row.update(status="skipped", error=describe_error(e))
                return row
            except FracPLapError as e:
                errors.append(f"{name}: {describe_error(e)}")
                row[f"{name}_value"] = math.nan
                row[f"{name}_error"] = math.nan
                continue
            row[f"{name}_value"] = estimate.value
            row[f"{name}_error"] = estimate.error
            values[name] = estimate.value
            budget += estimate.error

        if self.with_oracle and params.p == 2.0 and u.name in ORACLE_FUNCTIONS and u.n == 1:
            try:
                row["oracle_value"] = fractional_laplacian_oracle(u, point, params.s, cfg)
            except FracPLapError as e:
                errors.append(f"oracle: {describe_error(e)}")

        if errors:
            row["error"] = "; ".join(errors)
        if len(values) < 2:
            row["status"] = "skipped"
            return row

        gaps = {f"{a}_vs_{b}": abs(values[a] - values[b]) for a, b in combinations(values, 2)}
        max_gap = max(gaps.values())
        scale = max(abs(v) for v in values.values())
        row["max_gap"] = max_gap
        row["relative_gap"] = max_gap / scale if scale > 0.0 else 0.0
        row["error_budget"] = budget + cfg.tolerance(scale)
        row["status"] = self.scorer.score_to_status(max_gap, row["error_budget"])
        return row

    def evaluate(
        self,
        function: str,
        points: Sequence[Any],
        params: FracParams,
        cfg: Optional[QuadConfig] = None,
        workers: int = 1,
        **catalog_kwargs: Any,
    ) -> pd.DataFrame:
        """
        Evaluate a catalog function at several points.

        Args:
            function: Catalog name
            points: Evaluation points
            params: Operator parameters
            cfg: Quadrature settings
            workers: Worker processes; rows keep the input order
            **catalog_kwargs: Extra catalog arguments (center, amplitude, ...)

        Returns:
            DataFrame with one scored row per point
        """
        cfg = cfg or QuadConfig()
        u = catalog(function, n=params.n, **catalog_kwargs)
        if workers > 1:
            names = [representation.name for representation in self.representations]
            tasks = [
                (u.spec, x, params.model_dump(), cfg.model_dump(), names, self.with_oracle)
                for x in points
            ]
            rows = process_map(_evaluate_task, tasks, max_workers=workers, desc="Comparing representations")
        else:
            rows = [
                self.evaluate_single(u, x, params, cfg)
                for x in tqdm(points, desc="Comparing representations")
            ]
        return self.scorer.score_results(pd.DataFrame(rows))

    def summarize(self, results: pd.DataFrame) -> Dict[str, Any]:
        """
        Generate a summary of comparison results.

        Args:
            results: DataFrame returned by ``evaluate``

        Returns:
            Dictionary with the status distribution, the largest gaps and the
            overall status
        """
        summary: Dict[str, Any] = {}
        summary["status_distribution"] = results["status"].value_counts().to_dict()
        summary["total_evaluated"] = len(results)
        summary["overall_status"] = self.scorer.compute_overall_status(results["status"].tolist())
        if "max_gap" in results.columns:
            summary["largest_gap"] = float(results["max_gap"].max())
            summary["largest_relative_gap"] = float(results["relative_gap"].max())
        if "error" in results.columns:
            summary["errors_count"] = int(results["error"].notna().sum())
        return summary


def _evaluate_task(task) -> Dict[str, Any]:
    spec, x, params, cfg, names, with_oracle = task
    u = catalog(**spec)
    pipeline = ComparisonPipeline([REPRESENTATIONS[name]() for name in names], with_oracle=with_oracle)
    return pipeline.evaluate_single(u, x, FracParams(**params), QuadConfig(**cfg))


def build_pipeline(names: Optional[Sequence[str]] = None) -> ComparisonPipeline:
    """
    Pipeline with the named representations.

    Raises:
        UnsupportedFunctionError: For an unknown representation name
    """
    if not names:
        return ComparisonPipeline()
    unknown = [name for name in names if name not in REPRESENTATIONS]
    if unknown:
        raise UnsupportedFunctionError(f"unknown representations: {', '.join(unknown)}")
    return ComparisonPipeline([REPRESENTATIONS[name]() for name in names])
