import argparse

import pandas as pd
import pytest

from scripts.check_tables import check_agreement, check_order, get_status_counts, load_results


@pytest.fixture
def compare_csv(tmp_path):
    path = tmp_path / "compare.csv"
    pd.DataFrame({"status": ["green", "green", "green", "yellow", "skipped"]}).to_csv(path, index=False)
    return str(path)


def test_status_counts_ignore_skipped(compare_csv):
    counts, rated, green = get_status_counts(load_results(compare_csv, ("status",)))
    assert counts["skipped"] == 1
    assert rated == 4
    assert green == pytest.approx(75.0)


@pytest.mark.parametrize("min_green,code", [(70.0, 0), (80.0, 1)])
def test_check_agreement(compare_csv, min_green, code):
    with pytest.raises(SystemExit) as exit_info:
        check_agreement(argparse.Namespace(results=compare_csv, min_green=min_green))
    assert exit_info.value.code == code


def test_check_order(tmp_path):
    path = tmp_path / "discrete.json"
    pd.DataFrame({"h": [0.4, 0.2, 0.1], "order": [None, 1.98, 2.01]}).to_json(path, orient="records")
    for bounds, code in (((1.5, 2.5), 0), ((1.99, 2.5), 1)):
        with pytest.raises(SystemExit) as exit_info:
            check_order(argparse.Namespace(results=str(path), min_order=bounds[0], max_order=bounds[1]))
        assert exit_info.value.code == code


def test_missing_columns_exit(tmp_path):
    path = tmp_path / "bad.csv"
    pd.DataFrame({"h": [0.1]}).to_csv(path, index=False)
    with pytest.raises(SystemExit):
        load_results(str(path), ("h", "order"))
