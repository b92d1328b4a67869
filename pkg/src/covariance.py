"""
Covariance construction and the Hermitian linear-algebra kernels the pipeline runs on:
sample covariance, eigendecomposition, Cholesky solves with an eigen fallback,
noise-floor estimate and the true interference-plus-noise covariance.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from src.array_model import ArrayGeometry, SnapshotMatrix, SourceSpec, steering_vector
from src.errors import ConditioningError, DomainError

logger = logging.getLogger(__name__)

HermitianMatrix = np.ndarray

HERMITIAN_RTOL = 1e-10
LOADING_FACTOR = 1e-12


def make_hermitian(A) -> HermitianMatrix:
    """Average with the conjugate transpose; removes accumulated asymmetry."""
    A = np.asarray(A, dtype=complex)
    return 0.5 * (A + A.conj().T)


def hermitian_defect(A) -> float:
    """||A - A^H||_F / ||A||_F (0 for the zero matrix)."""
    A = np.asarray(A)
    norm = np.linalg.norm(A)
    if norm == 0:
        return 0.0
    return float(np.linalg.norm(A - A.conj().T) / norm)


def _check_square(A: np.ndarray) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")


def _check_hermitian(A: np.ndarray) -> None:
    _check_square(A)
    defect = hermitian_defect(A)
    if defect > HERMITIAN_RTOL:
        raise DomainError(f"matrix is not Hermitian (relative defect {defect:.3g})")


@dataclass(frozen=True)
class EigenDecomposition:
    """eigenvalues descending; eigenvectors as orthonormal columns in the same order."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sample_covariance(snapshots: SnapshotMatrix) -> HermitianMatrix:
    """R = (1/K) sum_k x(k) x(k)^H."""
    X = np.asarray(snapshots, dtype=complex)
    if X.ndim != 2 or X.shape[1] < 1 or X.shape[0] < 1:
        raise DomainError(f"snapshot matrix must be M x K with K >= 1, got shape {X.shape}")
    return make_hermitian(X @ X.conj().T / X.shape[1])


def hermitian_eig(A: HermitianMatrix) -> EigenDecomposition:
    A = np.asarray(A, dtype=complex)
    _check_hermitian(A)
    values, vectors = la.eigh(make_hermitian(A))
    # eigh is ascending
    return EigenDecomposition(eigenvalues=values[::-1].copy(), eigenvectors=vectors[:, ::-1].copy())


class HermitianSolver:
    """
    Factor once, solve many. Cholesky first; if it fails, fall back to the
    eigendecomposition and reject matrices whose smallest eigenvalue is not positive.
    """

    def __init__(self, A: HermitianMatrix):
        A = np.asarray(A, dtype=complex)
        _check_hermitian(A)
        A = make_hermitian(A)
        self.size = A.shape[0]
        self.matrix = A
        self._cho = None
        self._eig = None
        try:
            self._cho = la.cho_factor(A, lower=True, check_finite=True)
        except la.LinAlgError:
            values, vectors = la.eigh(A)
            tol = self.size * np.finfo(float).eps * max(abs(values[-1]), np.finfo(float).tiny)
            if values[0] <= tol:
                raise ConditioningError(
                    f"matrix is not positive definite (min eigenvalue {values[0]:.3g})"
                )
            logger.debug("Cholesky failed, solving through the eigendecomposition")
            self._eig = (values, vectors)

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=complex)
        if b.shape[0] != self.size:
            raise DomainError(f"right-hand side has {b.shape[0]} rows, expected {self.size}")
        if self._cho is not None:
            return la.cho_solve(self._cho, b)
        values, vectors = self._eig
        coeffs = vectors.conj().T @ b
        if coeffs.ndim == 1:
            return vectors @ (coeffs / values)
        return vectors @ (coeffs / values[:, None])


def hermitian_solve(A: HermitianMatrix, b) -> np.ndarray:
    """Solve A x = b for Hermitian positive definite A."""
    return HermitianSolver(A).solve(b)


def diagonal_load(A: HermitianMatrix, factor: float = LOADING_FACTOR) -> HermitianMatrix:
    """A + factor * trace(A)/M * I."""
    A = np.asarray(A, dtype=complex)
    M = A.shape[0]
    level = factor * float(np.real(np.trace(A))) / M
    if level <= 0:
        level = factor
    return A + level * np.eye(M)


def loaded_solver(A: HermitianMatrix, context: str = "") -> HermitianSolver:
    """HermitianSolver, retried once with 1e-12 trace/M loading if the factorization fails."""
    try:
        return HermitianSolver(A)
    except ConditioningError:
        logger.warning("Singular matrix%s; retrying with diagonal loading", f" in {context}" if context else "")
        return HermitianSolver(diagonal_load(A))


def noise_power_estimate(R: HermitianMatrix) -> float:
    """Minimum eigenvalue of R."""
    R = np.asarray(R, dtype=complex)
    _check_hermitian(R)
    return float(la.eigh(make_hermitian(R), eigvals_only=True)[0])


def true_ipncm(
    geometry: ArrayGeometry,
    interferers: list[SourceSpec],
    noise_power: float,
    steering: list[np.ndarray] | None = None,
) -> HermitianMatrix:
    """
    sum_p sigma_p^2 a_p a_p^H + sigma_n^2 I. steering overrides the nominal a(theta_p)
    (one vector per interferer) when the data follows perturbed vectors.
    """
    M = geometry.num_sensors
    if steering is not None and len(steering) != len(interferers):
        raise DomainError("one steering vector per interferer is required")
    R = noise_power * np.eye(M, dtype=complex)
    for i, src in enumerate(interferers):
        if src.kind == "desired":
            raise DomainError("the desired source must not be part of the IPNCM")
        a = steering[i] if steering is not None else steering_vector(geometry, src.angle)
        R += src.power * np.outer(a, a.conj())
    return make_hermitian(R)
