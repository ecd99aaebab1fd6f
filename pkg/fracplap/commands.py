"""
The command-line experiments. Every command returns a DataFrame; batch
commands record per-row failures in an ``error`` column instead of raising.
"""

import json
import logging
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm
from tqdm.contrib.concurrent import process_map

from fracplap.config import FracParams, QuadConfig, RunConfig
from fracplap.constants import constant_set, dimension_residuals
from fracplap.discrete import (
    build_weights,
    convergence_study,
    default_stencil,
    delta_rule,
    observed_orders,
)
from fracplap.errors import FracPLapError, WeightsDivergeError
from fracplap.funcs import catalog
from fracplap.pipeline import build_pipeline, describe_error, embed_point
from fracplap.reps.direct import eval_direct
from fracplap.reps.limits import limit_experiment_p_to_2, limit_experiment_s_to_1
from fracplap.reps.oracles import plancherel_seminorm
from fracplap.seminorm import seminorm_report
from fracplap.spectral import Interval, eval_restricted, eval_spectral

logger = logging.getLogger(__name__)

DEFAULT_GRIDS = {"s_to_1": [0.9, 0.99, 0.999], "p_to_2": [2.2, 2.05, 2.01]}
KAPPA_SENSITIVITY = (0.5, 1.0, 2.0)


def cmd_constants(n_list: Sequence[int], s_list: Sequence[float], p_list: Sequence[float]) -> pd.DataFrame:
    """C1..C4 per (n, s, p) with the dimension-independence residuals of C2..C4."""
    n_max = max(5, max(n_list))
    rows = []
    for s in s_list:
        for p in p_list:
            residuals = dimension_residuals(s, p, n_max)
            for n in n_list:
                constants = constant_set(FracParams(n=n, s=s, p=p))
                rows.append({"n": n, "s": s, "p": p, **constants.as_dict(), **residuals})
    return pd.DataFrame(rows)


def cmd_compare(
    function: str,
    points: Sequence[float],
    params: FracParams,
    cfg: QuadConfig,
    workers: int = 1,
    representations: Optional[Sequence[str]] = None,
    amplitude: float = 1.0,
) -> pd.DataFrame:
    """All representations at every point, scored for agreement."""
    pipeline = build_pipeline(representations)
    return pipeline.evaluate(function, points, params, cfg, workers=workers, amplitude=amplitude)


def _map_rows(task_fn: Callable[[Any], Any], tasks: Sequence[Any], workers: int, desc: str) -> List[Any]:
    """Apply a module-level task function in order, in worker processes when workers > 1."""
    if workers > 1:
        return process_map(task_fn, tasks, max_workers=workers, desc=desc)
    return [task_fn(task) for task in tqdm(tasks, desc=desc)]


def _limit_row(task) -> Dict[str, Any]:
    spec, point, mode, fixed, value, cfg = task
    u = catalog(**spec)
    cfg = QuadConfig(**cfg)
    parameter = "s" if mode == "s_to_1" else "p"
    row: Dict[str, Any] = {"function": spec["name"], "x": point, parameter: value}
    try:
        if mode == "s_to_1":
            (result,) = limit_experiment_s_to_1(u, point, fixed, [value], cfg)
        else:
            (result,) = limit_experiment_p_to_2(u, point, fixed, [value], cfg)
    except FracPLapError as e:
        row.update(status="skipped", error=describe_error(e))
        return row
    row.update(value=result.value, error_estimate=result.error, target=result.target, gap=result.gap, status="ok")
    return row


def cmd_limits(
    function: str,
    point: float,
    params: FracParams,
    mode: str,
    grid: Optional[Sequence[float]],
    cfg: QuadConfig,
    workers: int = 1,
) -> pd.DataFrame:
    """
    The s -> 1 or p -> 2 limit along a grid.

    s_to_1 holds p fixed and compares with -Delta_p u; p_to_2 holds s fixed
    and compares with the p = 2 operator.
    """
    if mode not in DEFAULT_GRIDS:
        raise ValueError(f"unknown limit mode {mode!r}")
    u = catalog(function, n=1)
    fixed = params.p if mode == "s_to_1" else params.s
    tasks = [(u.spec, point, mode, fixed, value, cfg.model_dump()) for value in (grid or DEFAULT_GRIDS[mode])]
    return pd.DataFrame(_map_rows(_limit_row, tasks, workers, f"Limit {mode}"))


def _discrete_rows(task) -> List[Dict[str, Any]]:
    spec, point, params, h_list, kappa, delta_zero, stencil, cfg = task
    u = catalog(**spec)
    try:
        study = convergence_study(
            u, point, FracParams(**params), h_list, kappa, delta_zero, stencil, QuadConfig(**cfg)
        )
    except WeightsDivergeError as e:
        logger.warning("discrete weights diverge: %s", e)
        return [
            {"h": h, "delta": 0.0, "kappa": kappa, "status": e.code, "error": describe_error(e)}
            for h in h_list
        ]
    orders = observed_orders(study)
    return [
        {
            "h": row.h,
            "delta": row.delta,
            "kappa": row.kappa,
            "discrete_value": row.value,
            "tail_error": row.tail_error,
            "continuum_value": row.continuum,
            "continuum_error": row.continuum_error,
            "abs_error": row.error,
            "order": order,
            "status": "ok",
        }
        for row, order in zip(study, orders)
    ]


def cmd_discrete(
    function: str,
    point: float,
    params: FracParams,
    h_list: Sequence[float],
    cfg: QuadConfig,
    kappa: float = 1.0,
    delta_zero: bool = False,
    delta_sensitivity: bool = False,
    stencil: Optional[int] = None,
    amplitude: float = 1.0,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Discrete operator against the continuum value for decreasing h.

    With delta_sensitivity the study is repeated for every kappa in
    KAPPA_SENSITIVITY, one task per kappa. Divergent weights become
    annotated rows.
    """
    u = catalog(function, n=params.n, amplitude=amplitude)
    x = embed_point(point, params.n)
    h_list = sorted(h_list, reverse=True)
    kappas = KAPPA_SENSITIVITY if delta_sensitivity and not delta_zero else (kappa,)
    tasks = [
        (u.spec, x, params.model_dump(), h_list, k, delta_zero, stencil, cfg.model_dump()) for k in kappas
    ]
    studies = _map_rows(_discrete_rows, tasks, workers, "Discrete convergence")
    return pd.DataFrame([row for rows in studies for row in rows])


def _spectral_row(task) -> Dict[str, Any]:
    spec, L, x, params, cfg = task
    u = catalog(**spec)
    params = FracParams(**params)
    cfg = QuadConfig(**cfg)
    row: Dict[str, Any] = {"L": L, "x": x, "function": spec["name"]}
    dom = Interval(L)
    try:
        spectral = eval_spectral(u, x, params, dom, cfg)
        restricted = eval_restricted(u, x, params, dom, cfg)
        whole = eval_direct(u, x, params, cfg)
    except (FracPLapError, ValueError) as e:
        code = getattr(e, "code", "invalid")
        row.update(status="skipped", error=f"{code}: {e}")
        return row
    row.update(
        spectral_value=spectral.value,
        spectral_error=spectral.error,
        restricted_value=restricted.value,
        restricted_error=restricted.error,
        difference=restricted.value - spectral.value,
        whole_space_value=whole.value,
        whole_space_error=whole.error,
        whole_space_gap=abs(spectral.value - whole.value),
        status="ok",
    )
    return row


def cmd_spectral(
    params: FracParams,
    lengths: Sequence[float],
    cfg: QuadConfig,
    function: str = "compact_bump",
    bump_radius: float = 1.5,
    points: Optional[Sequence[float]] = None,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Spectral-type operator on (0, L) against the whole-space operator.

    The function is centered at L/2 (a compact bump of the given radius by
    default) and evaluated at L/2 unless points are given.
    """
    tasks = []
    for L in sorted(lengths):
        if function == "compact_bump":
            u = catalog(function, n=1, center=[0.5 * L], radius=bump_radius)
        else:
            u = catalog(function, n=1, center=[0.5 * L])
        tasks.extend((u.spec, L, x, params.model_dump(), cfg.model_dump()) for x in points or [0.5 * L])
    return pd.DataFrame(_map_rows(_spectral_row, tasks, workers, "Spectral vs restricted"))


def _seminorm_row(task) -> Dict[str, Any]:
    spec, s, p, cfg = task
    u = catalog(**spec)
    function = spec["name"]
    row: Dict[str, Any] = {"function": function, "s": s, "p": p}
    try:
        report = seminorm_report(u, FracParams(n=1, s=s, p=p), QuadConfig(**cfg))
    except FracPLapError as e:
        row.update(status="skipped", error=describe_error(e))
        return row
    row.update(report.as_row())
    row["max_gap"] = report.max_gap
    if p == 2.0 and function in ("gaussian", "shifted_gaussian"):
        row["oracle_value"] = plancherel_seminorm(u, s)
    row["status"] = "ok"
    return row


def cmd_seminorm(
    function: str,
    s_list: Sequence[float],
    p_list: Sequence[float],
    cfg: QuadConfig,
    amplitude: float = 1.0,
    workers: int = 1,
) -> pd.DataFrame:
    """The three seminorm forms over an (s, p) grid, with the Plancherel value at p = 2."""
    u = catalog(function, n=1, amplitude=amplitude)
    tasks = [(u.spec, s, p, cfg.model_dump()) for s in s_list for p in p_list]
    return pd.DataFrame(_map_rows(_seminorm_row, tasks, workers, "Seminorms"))


def cmd_weights_export(
    params: FracParams,
    h: float,
    cfg: QuadConfig,
    kappa: float = 1.0,
    delta_zero: bool = False,
    stencil: Optional[int] = None,
) -> pd.DataFrame:
    """
    Weight table (beta, weight) with the tail mass outside the stencil.

    Raises:
        WeightsDivergeError: If delta = 0 and sp >= 2
    """
    delta = delta_rule(h, kappa, delta_zero)
    radius = stencil or default_stencil(params.n, h, cfg)
    weights = build_weights(params, h, delta, radius, cfg)
    table = weights.as_table()
    table["h"] = h
    table["delta"] = delta
    table["tail_mass"] = weights.tail_mass
    return table


def run(config: RunConfig) -> pd.DataFrame:
    """Dispatch a validated RunConfig to its command."""
    cfg = config.quad
    params = config.params
    workers = config.workers
    if config.command == "constants":
        return cmd_constants(config.n_list, config.s_list, config.p_list)
    if config.command == "compare":
        return cmd_compare(
            config.function, config.points, params, cfg,
            workers=workers, representations=config.representations, amplitude=config.amplitude,
        )
    if config.command == "limits":
        return cmd_limits(
            config.function, config.points[0], params, config.mode, config.grid, cfg, workers=workers
        )
    if config.command == "discrete":
        return cmd_discrete(
            config.function, config.points[0], params, config.h_list, cfg,
            kappa=config.kappa, delta_zero=config.delta_zero, delta_sensitivity=config.delta_sensitivity,
            stencil=config.stencil, amplitude=config.amplitude, workers=workers,
        )
    if config.command == "spectral":
        return cmd_spectral(params, config.lengths, cfg, config.function, config.bump_radius, workers=workers)
    if config.command == "seminorm":
        return cmd_seminorm(
            config.function, config.s_list, config.p_list, cfg, amplitude=config.amplitude, workers=workers
        )
    return cmd_weights_export(
        params, config.h_list[0], cfg, kappa=config.kappa, delta_zero=config.delta_zero, stencil=config.stencil
    )


def _records(table: pd.DataFrame) -> List[Dict[str, Any]]:
    records = table.to_dict(orient="records")
    for record in records:
        for key, value in record.items():
            if isinstance(value, float) and math.isnan(value):
                record[key] = None
            elif isinstance(value, np.generic):
                record[key] = value.item()
    return records


def write_table(table: pd.DataFrame, path: Optional[str] = None, fmt: str = "csv") -> None:
    """
    Write a table as CSV or as a JSON array of records (NaN becomes null).

    Args:
        table: The table
        path: Output file, standard output when None
        fmt: 'csv' or 'json'
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "csv":
        text = table.to_csv(index=False)
    else:
        text = json.dumps(_records(table), indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as f:
        f.write(text)
    logger.info("wrote %d rows to %s", len(table), path)
