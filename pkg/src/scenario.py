"""
Scenario configuration: ScenarioConfig (defaults are the two-interferer 10-sensor scenario),
named presets for the mismatch studies, and loading from config.yaml.
Keys in the YAML file equal the ScenarioConfig field names; unknown keys are errors.
"""
import dataclasses
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from src.array_model import ArrayGeometry, MismatchModel, SourceSpec
from src.beamformer import PipelineConfig
from src.errors import BeamformingError, ConfigurationError
from src.reconstruction import ReconstructionMethod

logger = logging.getLogger(__name__)

DEFAULT_METHODS = ("optimal", "smi", "linear", "urglq")
RECORDED_ALPHA = 1e4


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: ArrayGeometry = ArrayGeometry(num_sensors=10, spacing=0.5)
    desired_doa: float = 10.0
    interference_doas: tuple[float, ...] = (-30.0, 40.0)
    inr_db: float = 20.0
    snr_grid_db: tuple[float, ...] = (20.0,)
    snapshot_grid: tuple[int, ...] = (30,)
    trials: int = 300
    mismatch: MismatchModel = MismatchModel()
    methods: tuple[str, ...] = DEFAULT_METHODS
    seed: int = 0
    num_discretizations: int = 20
    half_width: float = 8.0
    noise_power: float = 1.0
    pipeline: PipelineConfig = PipelineConfig()
    workers: int = 0

    def __post_init__(self):
        object.__setattr__(self, "interference_doas", tuple(float(t) for t in self.interference_doas))
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        object.__setattr__(self, "snapshot_grid", tuple(int(k) for k in self.snapshot_grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if not self.snr_grid_db or not self.snapshot_grid:
            raise ConfigurationError("snr_grid_db and snapshot_grid must be nonempty")
        if any(k < 1 for k in self.snapshot_grid):
            raise ConfigurationError(f"snapshot counts must be >= 1, got {self.snapshot_grid}")
        if not self.methods:
            raise ConfigurationError("at least one method is required")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be unsigned, got {self.seed}")
        if self.num_discretizations < 1:
            raise ConfigurationError(f"num_discretizations must be >= 1, got {self.num_discretizations}")
        if not self.noise_power > 0:
            raise ConfigurationError(f"noise_power must be > 0, got {self.noise_power}")
        if self.workers < 0:
            raise ConfigurationError(f"workers must be >= 0, got {self.workers}")
        try:
            SourceSpec(self.desired_doa, 1.0, "desired")
            for t in self.interference_doas:
                SourceSpec(t, 1.0)
        except BeamformingError as e:
            raise ConfigurationError(str(e)) from e
        # sector half-width lives at the top level; the pipeline copy follows it
        if self.pipeline.half_width != self.half_width:
            object.__setattr__(self, "pipeline", dataclasses.replace(self.pipeline, half_width=self.half_width))

    def desired_power(self, snr_db: float) -> float:
        return self.noise_power * 10.0 ** (snr_db / 10.0)

    @property
    def interference_power(self) -> float:
        return self.noise_power * 10.0 ** (self.inr_db / 10.0)

    def grid(self) -> list[tuple[float, int]]:
        """(snr_db, snapshots) points, SNR-major in config order."""
        return [(snr, k) for snr in self.snr_grid_db for k in self.snapshot_grid]


PRESETS: dict[str, dict[str, Any]] = {
    "nominal": {"mismatch": MismatchModel()},
    "doa-mismatch": {"mismatch": MismatchModel("random_doa", bound=4.0)},
    "gain-phase": {"mismatch": MismatchModel("gain_phase", gain_std=0.05, phase_std=0.025 * math.pi)},
    "sv-error": {"mismatch": MismatchModel("sv_random_error", rho_max=math.sqrt(0.3))},
    "closer-angles": {
        "desired_doa": 5.0,
        "interference_doas": (-5.0, 15.0),
        "half_width": 4.0,
        "mismatch": MismatchModel("random_doa", bound=4.0),
    },
}


def apply_preset(config: ScenarioConfig, name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigurationError(f"unknown scenario {name!r}; choose from {sorted(PRESETS)}")
    logger.info("Scenario preset: %s", name)
    return dataclasses.replace(config, **PRESETS[name])


def apply_overrides(
    config: ScenarioConfig,
    seed: int | None = None,
    trials: int | None = None,
    workers: int | None = None,
) -> ScenarioConfig:
    """CLI flags win over file values; None leaves a value alone."""
    changes = {k: v for k, v in {"seed": seed, "trials": trials, "workers": workers}.items() if v is not None}
    return dataclasses.replace(config, **changes) if changes else config


def recorded_pipeline(config: ScenarioConfig) -> PipelineConfig:
    """Recorded data has no trace-scaled alpha; the fixed practical value is used."""
    return dataclasses.replace(config.pipeline, alpha_policy="fixed", alpha_value=RECORDED_ALPHA)


def resolve_workers(config: ScenarioConfig) -> int:
    """config.workers, else BEAMFORMING_WORKERS from the environment, else the core count."""
    if config.workers > 0:
        return config.workers
    env = os.getenv("BEAMFORMING_WORKERS")
    if env:
        try:
            value = int(env)
        except ValueError as e:
            raise ConfigurationError(f"BEAMFORMING_WORKERS must be an integer, got {env!r}") from e
        if value > 0:
            return value
    return os.cpu_count() or 1


def _check_keys(section: str, data: dict[str, Any], allowed) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {section}: {', '.join(unknown)}")


def _section(data: dict[str, Any], key: str) -> dict[str, Any]:
    value = data.get(key) or {}
    if not isinstance(value, dict):
        raise ConfigurationError(f"{key} must be a mapping, got {type(value).__name__}")
    return value


def config_from_dict(data: dict[str, Any] | None) -> ScenarioConfig:
    data = dict(data or {})
    fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    _check_keys("config", data, fields)

    geometry = _section(data, "geometry")
    _check_keys("geometry", geometry, ("num_sensors", "spacing"))
    mismatch = _section(data, "mismatch")
    _check_keys("mismatch", mismatch, (f.name for f in dataclasses.fields(MismatchModel)))
    pipeline = dict(_section(data, "pipeline"))
    _check_keys("pipeline", pipeline, (f.name for f in dataclasses.fields(PipelineConfig) if f.name != "half_width"))
    if isinstance(pipeline.get("reconstruction"), str):
        pipeline["reconstruction"] = ReconstructionMethod.parse(pipeline["reconstruction"])

    kwargs = {k: v for k, v in data.items() if k not in ("geometry", "mismatch", "pipeline")}
    for key in ("interference_doas", "snr_grid_db", "snapshot_grid", "methods"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key] or ())
    try:
        return ScenarioConfig(
            geometry=ArrayGeometry(**geometry) if geometry else ArrayGeometry(10, 0.5),
            mismatch=MismatchModel(**mismatch),
            pipeline=PipelineConfig(half_width=float(data.get("half_width", 8.0)), **pipeline),
            **kwargs,
        )
    except ConfigurationError:
        raise
    except (BeamformingError, TypeError) as e:
        raise ConfigurationError(f"invalid configuration: {e}") from e


def load_config(path: str | Path | None = None) -> ScenarioConfig:
    """Read a scenario from YAML. A missing file gives the default scenario."""
    config_path = Path(path) if path else Path(__file__).resolve().parent.parent / "config.yaml"
    if not config_path.exists():
        if path:
            raise ConfigurationError(f"config file not found: {config_path}")
        logger.info("No config.yaml, using defaults")
        return ScenarioConfig()
    with open(config_path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"cannot parse {config_path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{config_path} must hold a mapping")
    return config_from_dict(data)
