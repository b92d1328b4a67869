"""
Storage layer: CSV files for trial results, aggregates, the GLQ comparison and
angle curves (beampattern, spectrum, removal response).
UTF-8, decimal point, LF line endings; floats are written with repr so a
read-back gives the same numbers.
"""
import csv
import logging
from pathlib import Path
from typing import Iterable

from src.errors import FormatError
from src.runner import AggregateRow, CompareRow, TrialResult

logger = logging.getLogger(__name__)

RESULT_HEADER = ["method", "snr_db", "snapshots", "trial", "sinr_db", "deviation_db", "seed"]
AGGREGATE_HEADER = ["method", "snr_db", "snapshots", "mean_sinr_db", "std_sinr_db"]
COMPARE_HEADER = ["L", "method", "mean_sinr_db", "std_sinr_db"]


def _ensure_dir(path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)


def _fmt(value: float) -> str:
    return repr(float(value))


def _write(path: str | Path, header: list[str], rows: Iterable[list[str]]) -> int:
    _ensure_dir(path)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info("Wrote %d row(s) to %s", count, path)
    return count


def export_csv(results: list[TrialResult] | list[AggregateRow], path: str | Path) -> int:
    """Trial rows, or aggregate rows when given AggregateRow items. Returns rows written."""
    if results and isinstance(results[0], AggregateRow):
        return export_aggregates_csv(results, path)
    return _write(
        path,
        RESULT_HEADER,
        (
            [r.method, _fmt(r.snr_db), str(r.snapshots), str(r.trial), _fmt(r.sinr_db), _fmt(r.deviation_db), str(r.seed)]
            for r in results
        ),
    )


def export_aggregates_csv(rows: list[AggregateRow], path: str | Path) -> int:
    return _write(
        path,
        AGGREGATE_HEADER,
        ([r.method, _fmt(r.snr_db), str(r.snapshots), _fmt(r.mean_sinr_db), _fmt(r.std_sinr_db)] for r in rows),
    )


def export_compare_csv(rows: list[CompareRow], path: str | Path) -> int:
    return _write(
        path,
        COMPARE_HEADER,
        ([str(r.L), r.method, _fmt(r.mean_sinr_db), _fmt(r.std_sinr_db)] for r in rows),
    )


def export_curve_csv(points: list[tuple[float, float]], value_name: str, path: str | Path) -> int:
    """Two-column angle curve: angle_deg,<value_name>."""
    return _write(path, ["angle_deg", value_name], ([_fmt(a), _fmt(v)] for a, v in points))


def read_results_csv(path: str | Path) -> list[TrialResult]:
    """Parse a file written by export_csv back into TrialResult rows."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != RESULT_HEADER:
            raise FormatError(f"unexpected results header {header!r} in {path}")
        results = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(RESULT_HEADER):
                raise FormatError(f"line {line_no} of {path} has {len(row)} fields, expected {len(RESULT_HEADER)}")
            try:
                results.append(
                    TrialResult(
                        method=row[0],
                        snr_db=float(row[1]),
                        snapshots=int(row[2]),
                        trial=int(row[3]),
                        sinr_db=float(row[4]),
                        deviation_db=float(row[5]),
                        seed=int(row[6]),
                    )
                )
            except ValueError as e:
                raise FormatError(f"line {line_no} of {path}: {e}") from e
    return results
