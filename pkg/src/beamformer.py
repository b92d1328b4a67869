"""
Weight synthesis: MVDR (optimal with true IPNCM), SMI, the LINEAR summation baseline,
and the end-to-end URGLQ pipeline:

    SCM -> covariance-like C -> projector B -> quasi-covariance R~
        -> IPNCM by quadrature over the interference sectors
        -> corrected steering vector (QCQP) -> MVDR weights.
"""
import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.array_model import ArrayGeometry, SnapshotMatrix, SteeringVector, steering_vector
from src.covariance import (
    HermitianMatrix,
    diagonal_load,
    loaded_solver,
    noise_power_estimate,
    sample_covariance,
)
from src.errors import ConfigurationError, stage
from src.reconstruction import ReconstructionMethod, interference_sectors, reconstruct_ipncm
from src.signal_removal import (
    build_covariance_like,
    default_alpha,
    projection_matrix,
    quasi_covariance,
)
from src.steering_correction import CorrectionResult, correct_steering

logger = logging.getLogger(__name__)

NOISE_FLOOR_RTOL = 1e-12


@dataclass(frozen=True)
class BeamformerWeights:
    """w with w^H a = 1 for the steering vector a it was synthesized against."""
    weights: np.ndarray = field(repr=False)
    label: str
    steering: SteeringVector = field(repr=False)

    @property
    def distortionless_error(self) -> float:
        return float(abs(np.vdot(self.weights, self.steering) - 1.0))


@dataclass(frozen=True)
class PipelineConfig:
    """
    alpha_policy "trace" uses alpha_scale * Tr(R_hat) (simulation), "fixed" uses
    alpha_value (recorded data). reconstruction overrides the glq_order/glq_panels rule.
    noise_floor adds the noise estimate to the reconstructed IPNCM; off, the
    reconstruction is used as-is with 1e-12 trace/M loading.
    """
    alpha_policy: Literal["trace", "fixed"] = "trace"
    alpha_scale: float = 100.0
    alpha_value: float = 1e4
    half_width: float = 8.0
    glq_order: int = 3
    glq_panels: int = 1
    correction: bool = True
    noise_floor: bool = False
    reconstruction: ReconstructionMethod | None = None

    def __post_init__(self):
        if self.alpha_policy not in ("trace", "fixed"):
            raise ConfigurationError(f"alpha_policy must be 'trace' or 'fixed', got {self.alpha_policy!r}")
        if not self.half_width > 0:
            raise ConfigurationError(f"half_width must be > 0, got {self.half_width}")
        if self.glq_order < 1 or self.glq_panels < 1:
            raise ConfigurationError("glq_order and glq_panels must be >= 1")

    @property
    def method(self) -> ReconstructionMethod:
        if self.reconstruction is not None:
            return self.reconstruction
        return ReconstructionMethod.glq(self.glq_order, self.glq_panels)

    def alpha(self, R_hat: HermitianMatrix) -> float:
        if self.alpha_policy == "fixed":
            return float(self.alpha_value)
        return default_alpha(R_hat, self.alpha_scale)


@dataclass(frozen=True)
class PipelineTrace:
    """Intermediate products of one URGLQ run, kept for diagnostics and tests."""
    weights: BeamformerWeights
    R_hat: HermitianMatrix = field(repr=False)
    R_tilde: HermitianMatrix = field(repr=False)
    R_inf: HermitianMatrix = field(repr=False)
    noise_estimate: float
    alpha: float
    correction: CorrectionResult | None = None


def mvdr_weights(R: HermitianMatrix, a: SteeringVector, label: str = "mvdr") -> BeamformerWeights:
    """w = R^-1 a / (a^H R^-1 a)."""
    a = np.asarray(a, dtype=complex)
    x = loaded_solver(R, label).solve(a)
    denom = np.vdot(a, x)
    return BeamformerWeights(weights=x / denom, label=label, steering=a)


def _noise_estimate(R_hat: HermitianMatrix) -> float:
    sigma = noise_power_estimate(R_hat)
    floor = NOISE_FLOOR_RTOL * float(np.real(np.trace(R_hat))) / R_hat.shape[0]
    if sigma < floor:
        logger.warning("Noise estimate %.3g below floor; clamped to %.3g", sigma, floor)
        sigma = floor
    return sigma


def _finish_ipncm(R_inf: HermitianMatrix | None, sigma: float, M: int, noise_floor: bool) -> HermitianMatrix:
    """
    Noise-only IPNCM when there are no sectors to integrate over; otherwise the
    reconstruction plus the noise estimate, or plus 1e-12 trace/M loading.
    """
    if R_inf is None:
        logger.debug("No interference sectors; IPNCM is the noise estimate %.3g times I", sigma)
        return sigma * np.eye(M, dtype=complex)
    if noise_floor:
        return R_inf + sigma * np.eye(M)
    logger.debug("Reconstructed IPNCM used as-is with diagonal loading")
    return diagonal_load(R_inf)


def smi_weights(snapshots: SnapshotMatrix, a0: SteeringVector) -> BeamformerWeights:
    """MVDR with the sample covariance; loaded when K < M."""
    R_hat = sample_covariance(snapshots)
    if R_hat.shape[0] > np.asarray(snapshots).shape[1]:
        logger.debug("SMI: K < M, loading the sample covariance")
        R_hat = diagonal_load(R_hat)
    return mvdr_weights(R_hat, a0, label="smi")


def run_urglq(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    desired_doa: float,
    interference_doas,
    config: PipelineConfig = PipelineConfig(),
    label: str = "urglq",
) -> PipelineTrace:
    """Full pipeline with its intermediates. Errors carry the stage they were raised in."""
    interference_doas = list(interference_doas)
    M = geometry.num_sensors
    with stage("covariance"):
        R_hat = sample_covariance(snapshots)
        if R_hat.shape[0] != M:
            raise ConfigurationError(f"snapshots have {R_hat.shape[0]} sensors, geometry has {M}")
        sigma = _noise_estimate(R_hat)

    with stage("signal-removal"):
        a0 = steering_vector(geometry, desired_doa)
        alpha = config.alpha(R_hat)
        B = projection_matrix(build_covariance_like(a0, alpha))
        R_tilde = quasi_covariance(R_hat, B, sigma)

    with stage("reconstruction"):
        R_inf = None
        if interference_doas:
            sectors = interference_sectors(interference_doas, config.half_width, desired_doa)
            R_inf = reconstruct_ipncm(R_tilde, sectors, geometry, config.method)
        R_inf = _finish_ipncm(R_inf, sigma, M, config.noise_floor)

    correction = None
    a_hat = a0
    if config.correction:
        with stage("steering-correction"):
            correction = correct_steering(a0, R_inf)
            a_hat = correction.corrected

    with stage("weights"):
        weights = mvdr_weights(R_inf, a_hat, label=label)

    return PipelineTrace(
        weights=weights,
        R_hat=R_hat,
        R_tilde=R_tilde,
        R_inf=R_inf,
        noise_estimate=sigma,
        alpha=alpha,
        correction=correction,
    )


def urglq_weights(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    desired_doa: float,
    interference_doas,
    config: PipelineConfig = PipelineConfig(),
    label: str = "urglq",
) -> BeamformerWeights:
    return run_urglq(snapshots, geometry, desired_doa, interference_doas, config, label).weights


def linear_baseline_weights(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    desired_doa: float,
    interference_doas,
    L: int = 20,
    half_width: float = 8.0,
    noise_floor: bool = False,
) -> BeamformerWeights:
    """Riemann-sum IPNCM on the raw SCM (no signal removal, no correction), MVDR with a0."""
    interference_doas = list(interference_doas)
    M = geometry.num_sensors
    with stage("covariance"):
        R_hat = loaded_solver(sample_covariance(snapshots), "linear baseline").matrix
        sigma = _noise_estimate(R_hat)
    a0 = steering_vector(geometry, desired_doa)
    with stage("reconstruction"):
        R_inf = None
        if interference_doas:
            sectors = interference_sectors(interference_doas, half_width, desired_doa)
            R_inf = reconstruct_ipncm(R_hat, sectors, geometry, ReconstructionMethod.riemann(L))
        R_inf = _finish_ipncm(R_inf, sigma, M, noise_floor)
    with stage("weights"):
        return mvdr_weights(R_inf, a0, label="linear")
