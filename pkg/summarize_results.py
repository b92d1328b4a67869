"""
Print the per-(method, SNR, K) aggregate table of a results CSV written by `simulate`.
Usage: python summarize_results.py [data/results.csv] [--method urglq]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from src.errors import FormatError
from src.runner import aggregate
from src.storage import read_results_csv


def main() -> None:
    import argparse
    p = argparse.ArgumentParser(description="Summarize a Monte Carlo results CSV")
    p.add_argument("path", nargs="?", default="data/results.csv", help="results CSV, default data/results.csv")
    p.add_argument("--method", type=str, default=None, help="only show this method")
    args = p.parse_args()

    path = Path(args.path).resolve()
    if not path.exists():
        print(f"Results file not found: {path}")
        print("Run python run_beamforming.py simulate first.")
        sys.exit(1)

    try:
        results = read_results_csv(path)
    except FormatError as e:
        print(f"Cannot read {path}: {e}")
        sys.exit(1)
    rows = [r for r in aggregate(results) if args.method in (None, r.method)]
    failed = sum(r.failed for r in results)

    print(f"{len(results)} rows, {failed} failed ({path})\n")
    print(f"{'method':<20} {'snr_db':>8} {'K':>6} {'mean_sinr_db':>14} {'std_sinr_db':>12} {'n':>5}")
    for r in rows:
        print(f"{r.method:<20} {r.snr_db:>8.2f} {r.snapshots:>6d} {r.mean_sinr_db:>14.3f} {r.std_sinr_db:>12.3f} {r.count:>5d}")


if __name__ == "__main__":
    main()
