"""Verify CSV export and read-back of results, aggregates, comparisons and curves."""
import math
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import pytest

from src.errors import FormatError
from src.runner import AggregateRow, CompareRow, TrialResult
from src.storage import (
    AGGREGATE_HEADER,
    RESULT_HEADER,
    export_aggregates_csv,
    export_compare_csv,
    export_csv,
    export_curve_csv,
    read_results_csv,
)

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def _path(name: str) -> str:
    os.makedirs(DATA_DIR, exist_ok=True)
    path = os.path.join(DATA_DIR, name)
    if os.path.exists(path):
        try:
            os.remove(path)
        except OSError:
            pass
    return path


def _cleanup(*paths: str) -> None:
    for path in paths:
        try:
            if os.path.exists(path):
                os.remove(path)
        except OSError:
            pass  # Windows may hold file handle


def _lines(path: str) -> list[str]:
    with open(path, "rb") as f:
        data = f.read()
    assert b"\r" not in data
    return data.decode("utf-8").split("\n")


def test_results_round_trip():
    path = _path("_test_results.csv")
    try:
        rows = [
            TrialResult("urglq", 20.0, 30, 0, 28.123456789012345, 1.5, 0),
            TrialResult("smi", -10.0, 30, 1, -12.5, 3.25, 0),
        ]
        assert export_csv(rows, path) == 2
        lines = _lines(path)
        assert lines[0] == ",".join(RESULT_HEADER)
        assert lines[1].startswith("urglq,20.0,30,0,28.123456789012345,")
        assert read_results_csv(path) == rows
    finally:
        _cleanup(path)


def test_failed_rows_survive_round_trip():
    path = _path("_test_results_nan.csv")
    try:
        export_csv([TrialResult("failing", 0.0, 30, 0, float("nan"), float("nan"), 3)], path)
        back = read_results_csv(path)
        assert back[0].failed and math.isnan(back[0].deviation_db) and back[0].seed == 3
    finally:
        _cleanup(path)


def test_empty_results_header_only():
    path = _path("_test_results_empty.csv")
    try:
        assert export_csv([], path) == 0
        assert _lines(path) == [",".join(RESULT_HEADER), ""]
        assert read_results_csv(path) == []
    finally:
        _cleanup(path)


def test_aggregate_and_compare_files():
    agg = _path("_test_aggregate.csv")
    cmp_path = _path("_test_compare.csv")
    curve = _path("_test_curve.csv")
    try:
        rows = [AggregateRow("urglq", 20.0, 30, 28.0, 0.5, 300)]
        assert export_aggregates_csv(rows, agg) == 1
        assert _lines(agg)[0] == ",".join(AGGREGATE_HEADER)
        # export_csv dispatches on the row type
        assert export_csv(rows, agg) == 1
        assert _lines(agg)[1] == "urglq,20.0,30,28.0,0.5"

        export_compare_csv([CompareRow(20, "glq3", 28.0, 0.4), CompareRow(20, "riemann", 27.5, 0.6)], cmp_path)
        assert _lines(cmp_path)[:3] == ["L,method,mean_sinr_db,std_sinr_db", "20,glq3,28.0,0.4", "20,riemann,27.5,0.6"]

        export_curve_csv([(-0.5, -40.0), (0.0, 0.0)], "power_db", curve)
        assert _lines(curve)[:3] == ["angle_deg,power_db", "-0.5,-40.0", "0.0,0.0"]
    finally:
        _cleanup(agg, cmp_path, curve)


def test_read_rejects_malformed_files():
    path = _path("_test_results_bad.csv")
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write("method,snr\nurglq,20\n")
        with pytest.raises(FormatError):
            read_results_csv(path)
        with open(path, "w", encoding="utf-8") as f:
            f.write(",".join(RESULT_HEADER) + "\nurglq,20.0,thirty,0,1.0,1.0,0\n")
        with pytest.raises(FormatError):
            read_results_csv(path)
    finally:
        _cleanup(path)


if __name__ == "__main__":
    test_results_round_trip()
    test_failed_rows_survive_round_trip()
    test_empty_results_header_only()
    print("Results CSV OK")
    test_aggregate_and_compare_files()
    test_read_rejects_malformed_files()
    print("Aggregate CSV OK")
