"""
Desired-signal removal: covariance-like matrix C = alpha a0 a0^H + I, projector
B = I - p1 p1^H from the top eigenvector of C, and the quasi-covariance
R~ = B^H R B + sigma_n^2 I that carries (almost) only interference and noise.
"""
import logging

import numpy as np

from src.array_model import ArrayGeometry, SteeringVector, steering_matrix
from src.covariance import HermitianMatrix, hermitian_eig, make_hermitian
from src.errors import DegeneracyError, DomainError

logger = logging.getLogger(__name__)

MIN_ALPHA = 10.0
EIGEN_GAP_RTOL = 1e-6


def default_alpha(R_hat: HermitianMatrix, scale: float = 100.0) -> float:
    """alpha = scale * Tr(R_hat), the simulation setting."""
    return float(scale * np.real(np.trace(R_hat)))


def build_covariance_like(a0: SteeringVector, alpha: float) -> HermitianMatrix:
    a0 = np.asarray(a0, dtype=complex)
    if not alpha >= MIN_ALPHA:
        raise DomainError(f"alpha must be >= {MIN_ALPHA} (alpha >> 1), got {alpha}")
    return make_hermitian(alpha * np.outer(a0, a0.conj()) + np.eye(a0.shape[0]))


def projection_matrix(C: HermitianMatrix) -> HermitianMatrix:
    """B = I - p1 p1^H, p1 the eigenvector of the largest eigenvalue (first entry made real >= 0)."""
    eig = hermitian_eig(C)
    mu = eig.eigenvalues
    if mu.shape[0] > 1:
        gap = (mu[0] - mu[1]) / max(abs(mu[0]), np.finfo(float).tiny)
        if gap < EIGEN_GAP_RTOL:
            raise DegeneracyError(f"top eigenvalue is not separated (relative gap {gap:.3g})")
    p1 = eig.eigenvectors[:, 0]
    if abs(p1[0]) > 0:
        p1 = p1 * np.exp(-1j * np.angle(p1[0]))
    B = np.eye(C.shape[0], dtype=complex) - np.outer(p1, p1.conj())
    return make_hermitian(B)


def quasi_covariance(R_hat: HermitianMatrix, B: HermitianMatrix, noise_est: float) -> HermitianMatrix:
    if not noise_est > 0:
        raise DomainError(f"noise estimate must be > 0, got {noise_est}")
    B = np.asarray(B, dtype=complex)
    R_tilde = B.conj().T @ np.asarray(R_hat, dtype=complex) @ B
    return make_hermitian(R_tilde + noise_est * np.eye(B.shape[0]))


def removal_response(B: HermitianMatrix, geometry: ArrayGeometry, grid) -> np.ndarray:
    """||B a(theta)||^2 over a grid of angles (degrees); minimal at the removed direction."""
    A = steering_matrix(geometry, grid)
    return np.sum(np.abs(np.asarray(B) @ A) ** 2, axis=0)
