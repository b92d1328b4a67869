"""
Array model: ULA geometry, steering vectors, mismatch models, synthetic snapshots.
Angles are degrees at every public boundary; radians only inside the formulas.
Randomness always comes in through an explicit numpy Generator.
"""
import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.errors import DomainError

logger = logging.getLogger(__name__)

# Type aliases: complex vectors / matrices are plain numpy arrays
SteeringVector = np.ndarray
SnapshotMatrix = np.ndarray

MismatchKind = Literal["none", "random_doa", "gain_phase", "sv_random_error"]
MISMATCH_KINDS = ("none", "random_doa", "gain_phase", "sv_random_error")


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array. spacing is d/lambda."""
    num_sensors: int
    spacing: float = 0.5

    def __post_init__(self):
        if int(self.num_sensors) != self.num_sensors or self.num_sensors < 2:
            raise DomainError(f"num_sensors must be an integer >= 2, got {self.num_sensors}")
        if not self.spacing > 0:
            raise DomainError(f"spacing must be > 0, got {self.spacing}")


@dataclass(frozen=True)
class SourceSpec:
    """Far-field narrow-band source. power is linear (sigma^2)."""
    angle: float
    power: float
    kind: Literal["desired", "interference"] = "interference"

    def __post_init__(self):
        _check_angle(self.angle)
        if self.power < 0:
            raise DomainError(f"source power must be >= 0, got {self.power}")
        if self.kind not in ("desired", "interference"):
            raise DomainError(f"unknown source kind: {self.kind}")


def _check_angle(angle: float) -> None:
    if not -90.0 < angle < 90.0:
        raise DomainError(f"angle must lie in (-90, 90) degrees, got {angle}")


def steering_vector(geometry: ArrayGeometry, angle: float) -> SteeringVector:
    """a(theta)_m = exp(j 2 pi (d/lambda) (m-1) sin theta), first element exactly 1."""
    _check_angle(angle)
    m = np.arange(geometry.num_sensors)
    return np.exp(1j * 2.0 * np.pi * geometry.spacing * m * np.sin(np.deg2rad(angle)))


def steering_matrix(geometry: ArrayGeometry, angles) -> np.ndarray:
    """Columns are steering vectors for each angle (degrees). Shape (M, len(angles))."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if np.any(angles <= -90.0) or np.any(angles >= 90.0):
        raise DomainError("all angles must lie in (-90, 90) degrees")
    m = np.arange(geometry.num_sensors).reshape(-1, 1)
    return np.exp(1j * 2.0 * np.pi * geometry.spacing * m * np.sin(np.deg2rad(angles)))


def steering_matrix_rad(geometry: ArrayGeometry, thetas_rad) -> np.ndarray:
    # Quadrature nodes are in radians; no range check (sector edges are validated upstream).
    m = np.arange(geometry.num_sensors).reshape(-1, 1)
    return np.exp(1j * 2.0 * np.pi * geometry.spacing * m * np.sin(np.atleast_1d(thetas_rad)))


def _complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def synthesize_snapshots(
    steering: list[SteeringVector],
    powers: list[float],
    noise_power: float,
    num_snapshots: int,
    rng: np.random.Generator,
    num_sensors: int | None = None,
) -> SnapshotMatrix:
    """
    x(k) = sum_p a_p s_p(k) + n(k) for arbitrary (possibly perturbed) steering vectors.
    Waveforms and noise are i.i.d. circular complex Gaussian; draw order: sources, then noise.
    num_sensors is only needed when there are no sources.
    """
    if num_snapshots <= 0:
        raise DomainError(f"number of snapshots must be >= 1, got {num_snapshots}")
    if not noise_power > 0:
        raise DomainError(f"noise_power must be > 0, got {noise_power}")
    if len(steering) != len(powers):
        raise DomainError("one power per steering vector is required")
    if steering:
        num_sensors = len(steering[0])
    elif num_sensors is None:
        raise DomainError("num_sensors is required when there are no sources")
    data = np.zeros((num_sensors, num_snapshots), dtype=complex)
    for a, power in zip(steering, powers):
        a = np.asarray(a, dtype=complex)
        if a.shape != (num_sensors,):
            raise DomainError("steering vectors must all have length M")
        waveform = _complex_gaussian(rng, num_snapshots, power)
        data += np.outer(a, waveform)
    data += _complex_gaussian(rng, (num_sensors, num_snapshots), noise_power)
    return data


def generate_snapshots(
    geometry: ArrayGeometry,
    sources: list[SourceSpec],
    noise_power: float,
    num_snapshots: int,
    rng_seed: int | np.random.Generator,
) -> SnapshotMatrix:
    """Snapshots for nominal steering vectors. Deterministic for a fixed seed."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    steering = [steering_vector(geometry, s.angle) for s in sources]
    return synthesize_snapshots(
        steering,
        [s.power for s in sources],
        noise_power,
        num_snapshots,
        rng,
        num_sensors=geometry.num_sensors,
    )


def apply_gain_phase_perturbation(sv: SteeringVector, gains, phases) -> SteeringVector:
    """element_m <- (1 + gamma_m) exp(j delta_m) element_m."""
    sv = np.asarray(sv, dtype=complex)
    gains = np.asarray(gains, dtype=float)
    phases = np.asarray(phases, dtype=float)
    if gains.shape != sv.shape or phases.shape != sv.shape:
        raise DomainError(
            f"gains/phases must have length {len(sv)}, got {gains.shape} and {phases.shape}"
        )
    return (1.0 + gains) * np.exp(1j * phases) * sv


def draw_gain_phase(num_sensors: int, gain_std: float, phase_std: float, rng: np.random.Generator):
    """gamma_m ~ N(0, gain_std^2), delta_m ~ N(0, phase_std^2). Returns (gains, phases)."""
    gains = rng.normal(0.0, gain_std, num_sensors)
    phases = rng.normal(0.0, phase_std, num_sensors)
    return gains, phases


def apply_sv_random_error(
    sv: SteeringVector,
    rho: float,
    phases=None,
    rng: np.random.Generator | None = None,
) -> SteeringVector:
    """
    sv + xi with xi_m = (rho / sqrt(M)) exp(j phi_m), so ||xi||_2 = rho exactly.
    phases are drawn uniform on [0, 2 pi) from rng when not given.
    """
    sv = np.asarray(sv, dtype=complex)
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    if phases is None:
        if rng is None:
            raise DomainError("either phases or rng must be given")
        phases = rng.uniform(0.0, 2.0 * np.pi, sv.shape[0])
    phases = np.asarray(phases, dtype=float)
    if phases.shape != sv.shape:
        raise DomainError(f"phases must have length {len(sv)}, got {phases.shape}")
    xi = (rho / np.sqrt(sv.shape[0])) * np.exp(1j * phases)
    return sv + xi


def perturb_doa(angle: float, bound: float, rng: np.random.Generator) -> float:
    """angle + u, u ~ U[-bound, bound]. One draw per trial."""
    if bound < 0:
        raise DomainError(f"bound must be >= 0, got {bound}")
    if bound == 0:
        return float(angle)
    return float(angle + rng.uniform(-bound, bound))


@dataclass(frozen=True)
class MismatchRealization:
    """Ground truth of one trial: the DOAs and steering vectors the data really follows."""
    desired_doa: float
    interference_doas: tuple[float, ...]
    desired_sv: SteeringVector = field(repr=False)
    interference_svs: tuple[SteeringVector, ...] = field(repr=False)


@dataclass(frozen=True)
class MismatchModel:
    """
    Tagged mismatch model: none | random_doa(bound) | gain_phase(gain_std, phase_std)
    | sv_random_error(rho_max). perturb_interference=None picks the per-kind default
    (DOA mismatch moves every source; sensor/vector errors hit the desired signal only).
    """
    kind: MismatchKind = "none"
    bound: float = 0.0
    gain_std: float = 0.0
    phase_std: float = 0.0
    rho_max: float = 0.0
    perturb_interference: bool | None = None

    def __post_init__(self):
        if self.kind not in MISMATCH_KINDS:
            raise DomainError(f"unknown mismatch kind: {self.kind}")
        for name in ("bound", "gain_std", "phase_std", "rho_max"):
            if getattr(self, name) < 0:
                raise DomainError(f"mismatch {name} must be >= 0")

    @property
    def perturbs_interference(self) -> bool:
        if self.perturb_interference is not None:
            return bool(self.perturb_interference)
        return self.kind == "random_doa"

    def realize(
        self,
        geometry: ArrayGeometry,
        desired_doa: float,
        interference_doas,
        rng: np.random.Generator,
    ) -> MismatchRealization:
        """Draw one realization. Draw order: desired first, then interferers in list order."""
        interference_doas = tuple(float(t) for t in interference_doas)
        if self.kind == "random_doa":
            true_desired = perturb_doa(desired_doa, self.bound, rng)
            if self.perturbs_interference:
                true_interf = tuple(perturb_doa(t, self.bound, rng) for t in interference_doas)
            else:
                true_interf = interference_doas
            return MismatchRealization(
                desired_doa=true_desired,
                interference_doas=true_interf,
                desired_sv=steering_vector(geometry, true_desired),
                interference_svs=tuple(steering_vector(geometry, t) for t in true_interf),
            )

        desired_sv = steering_vector(geometry, desired_doa)
        interf_svs = [steering_vector(geometry, t) for t in interference_doas]
        if self.kind == "gain_phase":
            # one sensor perturbation per trial, shared by every affected source
            gains, phases = draw_gain_phase(geometry.num_sensors, self.gain_std, self.phase_std, rng)
            desired_sv = apply_gain_phase_perturbation(desired_sv, gains, phases)
            if self.perturbs_interference:
                interf_svs = [apply_gain_phase_perturbation(a, gains, phases) for a in interf_svs]
        elif self.kind == "sv_random_error":
            desired_sv = apply_sv_random_error(desired_sv, rng.uniform(0.0, self.rho_max), rng=rng)
            if self.perturbs_interference:
                interf_svs = [
                    apply_sv_random_error(a, rng.uniform(0.0, self.rho_max), rng=rng)
                    for a in interf_svs
                ]
        return MismatchRealization(
            desired_doa=float(desired_doa),
            interference_doas=interference_doas,
            desired_sv=desired_sv,
            interference_svs=tuple(interf_svs),
        )
