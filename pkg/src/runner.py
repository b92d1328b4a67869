"""
Runner: orchestrates Monte Carlo trials over the scenario grid, scores every method,
aggregates, sweeps the quadrature comparison and times the pipeline.
Per-trial method failures are logged and recorded as NaN rows; the run goes on.
"""
import dataclasses
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.array_model import SourceSpec, synthesize_snapshots
from src.beamformer import run_urglq
from src.covariance import true_ipncm
from src.errors import ConfigurationError, DomainError
from src.methods.interface import BeamformerMethod, TrialContext, load_methods_from_config
from src.methods.plugins.urglq import UrglqMethod
from src.metrics import deviation_from_optimal, optimal_sinr, output_sinr
from src.reconstruction import ReconstructionMethod
from src.scenario import ScenarioConfig, resolve_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialResult:
    """One (method, grid point, trial) score. sinr_db/deviation_db are NaN when the method failed."""
    method: str
    snr_db: float
    snapshots: int
    trial: int
    sinr_db: float
    deviation_db: float
    seed: int

    @property
    def failed(self) -> bool:
        return math.isnan(self.sinr_db)


@dataclass(frozen=True)
class AggregateRow:
    method: str
    snr_db: float
    snapshots: int
    mean_sinr_db: float
    std_sinr_db: float
    count: int


@dataclass(frozen=True)
class CompareRow:
    L: int
    method: str
    mean_sinr_db: float
    std_sinr_db: float


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per trial index; identical at every grid point."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def simulate_trial(config: ScenarioConfig, snr_db: float, num_snapshots: int, trial: int) -> TrialContext:
    """Draw the mismatch realization, then the snapshots, and package the truth."""
    rng = trial_rng(config.seed, trial)
    truth = config.mismatch.realize(config.geometry, config.desired_doa, config.interference_doas, rng)
    p_int = config.interference_power
    snapshots = synthesize_snapshots(
        [truth.desired_sv, *truth.interference_svs],
        [config.desired_power(snr_db)] + [p_int] * len(truth.interference_svs),
        config.noise_power,
        num_snapshots,
        rng,
        num_sensors=config.geometry.num_sensors,
    )
    interferers = [SourceSpec(t, p_int) for t in truth.interference_doas]
    R_true = true_ipncm(config.geometry, interferers, config.noise_power, steering=list(truth.interference_svs))
    return TrialContext(
        geometry=config.geometry,
        snapshots=snapshots,
        desired_doa=config.desired_doa,
        interference_doas=config.interference_doas,
        pipeline=config.pipeline,
        num_discretizations=config.num_discretizations,
        realization=truth,
        true_ipncm=R_true,
    )


def run_trial(
    config: ScenarioConfig,
    snr_db: float,
    num_snapshots: int,
    trial: int,
    methods: list[BeamformerMethod],
) -> list[TrialResult]:
    ctx = simulate_trial(config, snr_db, num_snapshots, trial)
    power = config.desired_power(snr_db)
    sinr_opt = optimal_sinr(power, ctx.true_ipncm, ctx.realization.desired_sv)
    rows = []
    for method in methods:
        try:
            w = method.weights(ctx)
            sinr = output_sinr(w, power, ctx.true_ipncm, ctx.realization.desired_sv)
            deviation = deviation_from_optimal(sinr, sinr_opt)
        except Exception as e:
            logger.exception(
                "Runner: %s failed (snr=%s, K=%d, trial=%d): %s", method.method_id, snr_db, num_snapshots, trial, e
            )
            sinr = deviation = float("nan")
        rows.append(TrialResult(method.method_id, float(snr_db), int(num_snapshots), trial, sinr, deviation, config.seed))
    return rows


def _run_task(args) -> list[TrialResult]:
    config, snr_db, num_snapshots, trial, methods = args
    return run_trial(config, snr_db, num_snapshots, trial, methods)


def run_scenario(
    config: ScenarioConfig,
    methods: list[BeamformerMethod] | None = None,
) -> list[TrialResult]:
    """
    Every (grid point, trial) for every method. Rows come out ordered by grid point,
    then trial, then method order, whatever the worker count.
    """
    if methods is None:
        methods = load_methods_from_config(list(config.methods))
    tasks = [
        (config, snr, k, trial, methods)
        for snr, k in config.grid()
        for trial in range(config.trials)
    ]
    workers = min(resolve_workers(config), len(tasks))
    logger.info(
        "Runner: %d grid point(s) x %d trial(s), methods=%s, workers=%d",
        len(config.grid()), config.trials, [m.method_id for m in methods], workers,
    )
    if workers <= 1:
        chunks = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map keeps submission order
            chunks = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    results = [row for chunk in chunks for row in chunk]
    failures = sum(r.failed for r in results)
    if failures:
        logger.warning("Runner: %d of %d rows failed", failures, len(results))
    logger.info("Runner: %d rows", len(results))
    return results


def aggregate(results: list[TrialResult]) -> list[AggregateRow]:
    """Mean and population std of SINR per (method, snr, K), failed rows excluded."""
    groups: dict[tuple[str, float, int], list[float]] = {}
    for r in results:
        groups.setdefault((r.method, r.snr_db, r.snapshots), [])
        if not r.failed:
            groups[(r.method, r.snr_db, r.snapshots)].append(r.sinr_db)
    rows = []
    for (method, snr, k), values in groups.items():
        if values:
            mean, std = float(np.mean(values)), float(np.std(values))
        else:
            mean = std = float("nan")
        rows.append(AggregateRow(method, snr, k, mean, std, len(values)))
    return rows


def glq_compare(
    config: ScenarioConfig,
    l_values: list[int],
) -> list[CompareRow]:
    """
    URGLQ pipeline with the GLQ rule versus the same pipeline with a Riemann sum of L
    points, at the first grid point of the scenario. Trials are shared across L.
    """
    if not l_values:
        raise ConfigurationError("l_values must not be empty")
    snr, k = config.grid()[0]
    point = dataclasses.replace(config, snr_grid_db=(snr,), snapshot_grid=(k,))
    glq = config.pipeline.method
    methods: list[BeamformerMethod] = [UrglqMethod(glq.label, reconstruction=glq)]
    methods += [UrglqMethod(f"riemann:{L}", reconstruction=ReconstructionMethod.riemann(L)) for L in l_values]
    logger.info("GLQ compare at SNR=%s dB, K=%d, L=%s", snr, k, list(l_values))
    stats = {row.method: row for row in aggregate(run_scenario(point, methods))}
    rows = []
    for L in l_values:
        ref = stats[glq.label]
        rows.append(CompareRow(int(L), glq.label, ref.mean_sinr_db, ref.std_sinr_db))
        summed = stats[f"riemann:{L}"]
        rows.append(CompareRow(int(L), "riemann", summed.mean_sinr_db, summed.std_sinr_db))
    return rows


def time_pipeline(
    m_values: list[int],
    repeats: int = 5,
    seed: int = 0,
    snapshots_per_sensor: int = 2,
) -> list[tuple[int, float]]:
    """Best-of-repeats wall clock (seconds) of one URGLQ run per array size M."""
    base = ScenarioConfig()
    timings = []
    for M in m_values:
        config = dataclasses.replace(
            base,
            geometry=dataclasses.replace(base.geometry, num_sensors=int(M)),
            seed=seed,
            trials=1,
        )
        ctx = simulate_trial(config, config.snr_grid_db[0], snapshots_per_sensor * int(M), 0)
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            run_urglq(ctx.snapshots, ctx.geometry, ctx.desired_doa, ctx.interference_doas, config.pipeline)
            best = min(best, time.perf_counter() - t0)
        logger.info("Bench: M=%d best %.6f s", M, best)
        timings.append((int(M), best))
    return timings


def loglog_slope(timings: list[tuple[int, float]]) -> float:
    """Least-squares slope of log(time) against log(M)."""
    if len(timings) < 2:
        raise DomainError("at least two sizes are needed for a slope")
    m = np.log([t[0] for t in timings])
    s = np.log([max(t[1], 1e-12) for t in timings])
    return float(np.polyfit(m, s, 1)[0])
