"""
Main entry: Monte Carlo simulation, beampatterns, GLQ comparison, Capon spectrum,
removal response and the pipeline timing benchmark. Config: config.yaml + .env.

    python run_beamforming.py simulate --config config.yaml --scenario doa-mismatch --out data/results.csv
    python run_beamforming.py beampattern --input data/recorded.bfsn --method urglq --out data/pattern.csv
    python run_beamforming.py glq-compare --config config.yaml --l-values 2,5,10,20,50 --out data/glq.csv
"""
import argparse
import logging
import os
import sys
from pathlib import Path

# Ensure project root on path
sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np
from dotenv import load_dotenv

from src.covariance import sample_covariance
from src.errors import BeamformingError, ConfigurationError, stage
from src.methods.interface import TrialContext, get_method
from src.metrics import beampattern
from src.reconstruction import capon_spectrum
from src.runner import aggregate, glq_compare, loglog_slope, run_scenario, simulate_trial, time_pipeline
from src.scenario import ScenarioConfig, apply_overrides, apply_preset, load_config, recorded_pipeline
from src.signal_removal import build_covariance_like, projection_matrix, removal_response
from src.sources.recorded import load_recorded_snapshots
from src.storage import export_aggregates_csv, export_compare_csv, export_csv, export_curve_csv

load_dotenv()

logging.basicConfig(
    level=os.getenv("BEAMFORMING_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger("run_beamforming")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def angle_grid(step: float) -> np.ndarray:
    """Open interval (-90, 90) in steps of `step` degrees."""
    if not 0 < step < 90:
        raise ConfigurationError(f"grid step must lie in (0, 90), got {step}")
    return np.round(np.arange(-90.0 + step, 90.0 - step / 2, step), 10)


def _scenario(args) -> ScenarioConfig:
    config = load_config(getattr(args, "config", None))
    if getattr(args, "scenario", None):
        config = apply_preset(config, args.scenario)
    return apply_overrides(
        config,
        seed=getattr(args, "seed", None),
        trials=getattr(args, "trials", None),
        workers=getattr(args, "workers", None),
    )


def _is_recorded(path: str) -> bool:
    return Path(path).suffix.lower() not in (".yaml", ".yml")


def _trial_context(args) -> TrialContext:
    """Recorded file plus presumed DOAs from --config, or trial 0 of a simulated scenario."""
    if _is_recorded(args.input):
        config = _scenario(args)
        snapshots = load_recorded_snapshots(args.input, expected_sensors=config.geometry.num_sensors)
        return TrialContext(
            geometry=config.geometry,
            snapshots=snapshots,
            desired_doa=config.desired_doa,
            interference_doas=config.interference_doas,
            pipeline=recorded_pipeline(config),
            num_discretizations=config.num_discretizations,
        )
    config = load_config(args.input)
    if getattr(args, "seed", None) is not None:
        config = apply_overrides(config, seed=args.seed)
    snr, k = config.grid()[0]
    logger.info("Simulated input: SNR=%s dB, K=%d, trial 0", snr, k)
    return simulate_trial(config, snr, k, 0)


def cmd_simulate(args) -> None:
    config = _scenario(args)
    results = run_scenario(config)
    export_csv(results, args.out)
    if args.aggregate_out:
        export_aggregates_csv(aggregate(results), args.aggregate_out)


def cmd_beampattern(args) -> None:
    ctx = _trial_context(args)
    weights = get_method(args.method).weights(ctx)
    export_curve_csv(beampattern(weights, ctx.geometry, angle_grid(args.grid_step)), "power_db", args.out)


def cmd_glq_compare(args) -> None:
    rows = glq_compare(_scenario(args), args.l_values)
    export_compare_csv(rows, args.out)


def cmd_spectrum(args) -> None:
    ctx = _trial_context(args)
    grid = angle_grid(args.grid_step)
    power = capon_spectrum(sample_covariance(ctx.snapshots), ctx.geometry, grid)
    export_curve_csv(list(zip(grid, 10.0 * np.log10(power))), "capon_db", args.out)


def cmd_removal(args) -> None:
    config = _scenario(args)
    snr, k = config.grid()[0]
    ctx = simulate_trial(config, snr, k, 0)
    alpha = config.pipeline.alpha(sample_covariance(ctx.snapshots))
    B = projection_matrix(build_covariance_like(ctx.presumed_steering, alpha))
    grid = angle_grid(args.grid_step)
    response = removal_response(B, config.geometry, grid)
    export_curve_csv(list(zip(grid, response)), "response", args.out)


def cmd_bench(args) -> None:
    timings = time_pipeline(args.m_values, repeats=args.repeats, seed=args.seed)
    export_curve_csv(timings, "seconds", args.out)
    if len(timings) >= 2:
        logger.info("Bench: log-log slope %.2f", loglog_slope(timings))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Robust adaptive beamforming (URGLQ) simulation and analysis")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_flags(sp, out_default: str) -> None:
        sp.add_argument("--config", type=str, default=None, help="scenario YAML, default config.yaml")
        sp.add_argument("--scenario", type=str, default=None,
                        help="preset: nominal, doa-mismatch, gain-phase, sv-error, closer-angles")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--out", type=str, default=out_default)

    sp = sub.add_parser("simulate", help="Monte Carlo run, one CSV row per (method, grid point, trial)")
    scenario_flags(sp, "data/results.csv")
    sp.add_argument("--aggregate-out", type=str, default=None, help="also write per-grid-point means")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("beampattern", help="normalized beampattern of one method")
    scenario_flags(sp, "data/pattern.csv")
    sp.add_argument("--input", type=str, required=True, help="BFSN file, or a scenario YAML (trial 0 is simulated)")
    sp.add_argument("--method", type=str, default="urglq")
    sp.add_argument("--grid-step", type=float, default=0.1)
    sp.set_defaults(func=cmd_beampattern)

    sp = sub.add_parser("glq-compare", help="GLQ rule versus Riemann sums over L")
    scenario_flags(sp, "data/glq.csv")
    sp.add_argument("--l-values", type=_int_list, default=[2, 5, 10, 20, 50])
    sp.set_defaults(func=cmd_glq_compare)

    sp = sub.add_parser("spectrum", help="Capon spectrum of the sample covariance")
    scenario_flags(sp, "data/spectrum.csv")
    sp.add_argument("--input", type=str, required=True)
    sp.add_argument("--grid-step", type=float, default=0.1)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("removal", help="response of the desired-signal projector over angle")
    scenario_flags(sp, "data/removal.csv")
    sp.add_argument("--grid-step", type=float, default=0.1)
    sp.set_defaults(func=cmd_removal)

    sp = sub.add_parser("bench", help="pipeline wall clock versus array size")
    sp.add_argument("--m-values", type=_int_list, default=[8, 16, 32, 64])
    sp.add_argument("--repeats", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=str, default="data/bench.csv")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with stage(args.command):
            args.func(args)
    except BeamformingError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    logger.info("%s finished", args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
