import json
import math

import pandas as pd
import pytest

from fracplap.commands import (
    cmd_compare,
    cmd_constants,
    cmd_discrete,
    cmd_limits,
    cmd_seminorm,
    cmd_spectral,
    write_table,
)
from fracplap.config import FracParams
from main import main


def test_constants_table():
    table = cmd_constants([1], [0.5], [2.0])
    (row,) = table.to_dict(orient="records")
    assert row["c1"] == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert row["c4"] == pytest.approx(1.0 / math.pi, rel=1e-12)
    for key in ("c2_residual", "c3_residual", "c4_residual"):
        assert row[key] < 1e-12


def test_constants_grid_size():
    table = cmd_constants([1, 2], [0.25, 0.75], [1.5, 2.0, 3.0])
    assert len(table) == 12
    assert set(table.columns) >= {"n", "s", "p", "c1", "c2", "c3", "c4"}


def test_write_table_json_turns_nan_into_null(tmp_path):
    path = tmp_path / "table.json"
    write_table(pd.DataFrame([{"a": 1.0, "b": math.nan}]), str(path), "json")
    assert json.loads(path.read_text()) == [{"a": 1.0, "b": None}]


def test_write_table_csv(tmp_path, capsys):
    table = pd.DataFrame([{"h": 0.1, "status": "ok"}])
    write_table(table, str(tmp_path / "table.csv"))
    assert (tmp_path / "table.csv").read_text().splitlines() == ["h,status", "0.1,ok"]
    write_table(table)
    assert capsys.readouterr().out.startswith("h,status")
    with pytest.raises(ValueError):
        write_table(table, fmt="xml")


def test_discrete_divergent_weights_are_annotated(fast_cfg):
    params = FracParams(n=1, s=0.9, p=3.0)
    table = cmd_discrete("gaussian", 0.0, params, [0.2, 0.4], fast_cfg, delta_zero=True)
    assert table["status"].tolist() == ["weights_diverge", "weights_diverge"]
    assert table["h"].tolist() == [0.4, 0.2]
    assert table["error"].str.startswith("weights_diverge").all()


def test_limits_p_to_2_at_two_has_no_gap(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.0)
    table = cmd_limits("gaussian", 0.5, params, "p_to_2", [2.0], fast_cfg)
    (row,) = table.to_dict(orient="records")
    assert row["gap"] == 0.0
    assert row["status"] == "ok"
    with pytest.raises(ValueError):
        cmd_limits("gaussian", 0.5, params, "s_to_0", None, fast_cfg)


def test_main_rejects_out_of_range_order():
    assert main(["compare", "--s", "1.5"]) == 2


def test_main_rejects_unknown_function():
    assert main(["compare", "--function", "sawtooth"]) == 2


def test_main_rejects_unknown_subcommand():
    assert main(["integrate"]) == 2


def test_main_reports_divergent_weights():
    argv = ["weights-export", "--s", "0.9", "--p", "3", "--delta-zero", "--h-list", "0.5"]
    assert main(argv) == 3


def test_main_writes_output(tmp_path):
    path = tmp_path / "constants.json"
    argv = [
        "constants", "--n-list", "1,2", "--s-list", "0.5", "--p-list", "2",
        "--output", str(path), "--format", "json",
    ]
    assert main(argv) == 0
    rows = json.loads(path.read_text())
    assert [row["n"] for row in rows] == [1, 2]
    assert rows[0]["c1"] == pytest.approx(1.0 / math.pi)


def test_compare_constant_is_green(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.5)
    table = cmd_compare("constant", [0.0, 1.0], params, fast_cfg, representations=["direct", "semigroup"])
    assert table["status"].tolist() == ["green", "green"]
    assert table["direct_value"].abs().max() < 1e-10


def test_seminorm_of_zero_amplitude(fast_cfg):
    table = cmd_seminorm("gaussian", [0.5], [2.0, 3.0], fast_cfg, amplitude=0.0)
    assert table["status"].tolist() == ["ok", "ok"]
    assert (table["max_gap"] == 0.0).all()
    assert table["oracle_value"].tolist()[0] == 0.0
    assert math.isnan(table["oracle_value"].tolist()[1])


def test_seminorm_rows_record_unsupported_functions(fast_cfg):
    table = cmd_seminorm("cosine", [0.5], [2.0], fast_cfg)
    assert table["status"].tolist() == ["skipped"]
    assert table["error"].iloc[0].startswith("unsupported")


def test_table_commands_keep_row_order_across_workers(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.0)
    serial = cmd_seminorm("gaussian", [0.3, 0.6], [2.0, 3.0], fast_cfg, amplitude=0.0)
    parallel = cmd_seminorm("gaussian", [0.3, 0.6], [2.0, 3.0], fast_cfg, amplitude=0.0, workers=2)
    pd.testing.assert_frame_equal(serial, parallel)
    assert list(zip(parallel["s"], parallel["p"])) == [(0.3, 2.0), (0.3, 3.0), (0.6, 2.0), (0.6, 3.0)]

    serial = cmd_limits("gaussian", 0.5, params, "p_to_2", [2.2, 2.0], fast_cfg)
    parallel = cmd_limits("gaussian", 0.5, params, "p_to_2", [2.2, 2.0], fast_cfg, workers=2)
    pd.testing.assert_frame_equal(serial, parallel)

    divergent = FracParams(n=1, s=0.9, p=3.0)
    table = cmd_discrete("gaussian", 0.0, divergent, [0.2, 0.4], fast_cfg, delta_zero=True, workers=2)
    assert table["status"].tolist() == ["weights_diverge", "weights_diverge"]


def test_main_passes_workers_to_table_commands(tmp_path):
    path = tmp_path / "seminorm.csv"
    argv = [
        "seminorm", "--function", "gaussian", "--amplitude", "0", "--s-list", "0.5",
        "--p-list", "2,3", "--workers", "2", "--output", str(path),
    ]
    assert main(argv) == 0
    table = pd.read_csv(path)
    assert table["status"].tolist() == ["ok", "ok"]
    assert table["p"].tolist() == [2.0, 3.0]


@pytest.mark.slow
def test_spectral_table(fast_cfg):
    table = cmd_spectral(FracParams(n=1, s=0.5, p=2.0), [4.0], fast_cfg)
    (row,) = table.to_dict(orient="records")
    assert row["status"] == "ok"
    assert row["x"] == 2.0
    assert row["restricted_value"] > row["spectral_value"] > 0.0
