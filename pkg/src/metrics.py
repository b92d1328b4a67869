"""
Output SINR against the trial's ground truth, optimal SINR, beampattern and
deviation from optimal. All outputs in dB.
"""
import numpy as np

from src.array_model import ArrayGeometry, SourceSpec, SteeringVector, steering_matrix
from src.beamformer import BeamformerWeights
from src.covariance import HermitianMatrix, hermitian_solve
from src.errors import DegenerateWeightError, DomainError

SINR_FLOOR_DB = -300.0


def _as_vector(w) -> np.ndarray:
    if isinstance(w, BeamformerWeights):
        return w.weights
    return np.asarray(w, dtype=complex)


def _power(desired: SourceSpec | float) -> float:
    return float(desired.power if isinstance(desired, SourceSpec) else desired)


def output_sinr(
    w: BeamformerWeights | np.ndarray,
    desired: SourceSpec | float,
    true_ipncm: HermitianMatrix,
    true_desired_sv: SteeringVector,
) -> float:
    """10 log10(sigma_s^2 |w^H a|^2 / w^H R_INF w); SINR_FLOOR_DB when w^H a = 0."""
    w = _as_vector(w)
    gain = abs(np.vdot(w, np.asarray(true_desired_sv, dtype=complex))) ** 2
    denom = float(np.real(np.vdot(w, np.asarray(true_ipncm) @ w)))
    if not denom > 0:
        raise DegenerateWeightError(f"output interference-plus-noise power is {denom:.3g}")
    ratio = _power(desired) * gain / denom
    if ratio <= 0:
        return SINR_FLOOR_DB
    return max(float(10.0 * np.log10(ratio)), SINR_FLOOR_DB)


def optimal_sinr(
    desired: SourceSpec | float,
    true_ipncm: HermitianMatrix,
    true_desired_sv: SteeringVector,
) -> float:
    """sigma_s^2 a^H R_INF^-1 a in dB, the SINR of the MVDR weights built from the truth."""
    a = np.asarray(true_desired_sv, dtype=complex)
    value = _power(desired) * float(np.real(np.vdot(a, hermitian_solve(true_ipncm, a))))
    if value <= 0:
        return SINR_FLOOR_DB
    return float(10.0 * np.log10(value))


def beampattern(w: BeamformerWeights | np.ndarray, geometry: ArrayGeometry, grid) -> list[tuple[float, float]]:
    """20 log10 |w^H a(theta)| per angle, shifted so the maximum over the grid is 0 dB."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise DomainError("beampattern grid must not be empty")
    response = np.abs(steering_matrix(geometry, grid).T @ _as_vector(w).conj())
    db = 20.0 * np.log10(np.maximum(response, np.finfo(float).tiny))
    db = db - db.max()
    return [(float(t), float(p)) for t, p in zip(grid, db)]


def deviation_from_optimal(sinr: float, sinr_opt: float) -> float:
    return float(sinr_opt - sinr)
