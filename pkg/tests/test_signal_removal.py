"""Verify desired-signal removal: covariance-like matrix, projector, quasi-covariance."""
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.array_model import ArrayGeometry, SourceSpec, generate_snapshots, steering_vector
from src.covariance import hermitian_eig, noise_power_estimate, sample_covariance
from src.errors import DegeneracyError, DomainError
from src.signal_removal import (
    build_covariance_like,
    default_alpha,
    projection_matrix,
    quasi_covariance,
    removal_response,
)


def _table_snapshots(snr_db: float = 20.0, K: int = 30, seed: int = 4):
    geometry = ArrayGeometry(10)
    sources = [SourceSpec(10.0, 10 ** (snr_db / 10), "desired"), SourceSpec(-30.0, 100.0), SourceSpec(40.0, 100.0)]
    return geometry, generate_snapshots(geometry, sources, 1.0, K, seed)


def test_covariance_like_spectrum():
    a0 = steering_vector(ArrayGeometry(10), 10.0)
    eig = hermitian_eig(build_covariance_like(a0, 1e4))
    assert_allclose(eig.eigenvalues[0], 1e4 * 10 + 1, rtol=1e-9)
    p1 = eig.eigenvectors[:, 0]
    assert abs(abs(np.vdot(p1, a0)) / np.linalg.norm(a0) - 1.0) < 1e-12
    with pytest.raises(DomainError):
        build_covariance_like(a0, 5.0)


def test_default_alpha():
    R = np.diag([1.0, 2.0, 3.0])
    assert default_alpha(R) == 600.0


def test_projector_properties():
    for M in (2, 4, 10):
        a0 = steering_vector(ArrayGeometry(M), 10.0)
        B = projection_matrix(build_covariance_like(a0, 1e4))
        assert np.linalg.norm(B @ a0) <= 1e-10 * np.linalg.norm(a0)
        assert np.linalg.norm(B @ B - B) < 1e-12
        assert np.linalg.norm(B - B.conj().T) < 1e-12
        assert abs(np.trace(B).real - (M - 1)) < 1e-12


def test_projector_degenerate():
    with pytest.raises(DegeneracyError):
        projection_matrix(np.eye(4))


def test_quasi_covariance_of_identity():
    a0 = steering_vector(ArrayGeometry(6), -20.0)
    B = projection_matrix(build_covariance_like(a0, 1e4))
    eig = hermitian_eig(quasi_covariance(np.eye(6), B, 1.0))
    assert_allclose(eig.eigenvalues, [2.0] * 5 + [1.0], atol=1e-12)
    with pytest.raises(DomainError):
        quasi_covariance(np.eye(6), B, 0.0)


def test_desired_signal_removed_interference_kept():
    geometry, X = _table_snapshots()
    R_hat = sample_covariance(X)
    sigma = noise_power_estimate(R_hat)
    a0 = steering_vector(geometry, 10.0)
    B = projection_matrix(build_covariance_like(a0, default_alpha(R_hat)))
    R_tilde = quasi_covariance(R_hat, B, sigma)
    leak = np.vdot(a0, (R_tilde - sigma * np.eye(10)) @ a0).real
    assert abs(leak) <= 1e-8 * np.vdot(a0, R_hat @ a0).real
    a1 = steering_vector(geometry, -30.0)
    kept = np.vdot(a1, R_tilde @ a1).real / np.vdot(a1, R_hat @ a1).real
    assert 10 * np.log10(kept) > -3.0


def test_removal_response_minimum():
    geometry = ArrayGeometry(10)
    B = projection_matrix(build_covariance_like(steering_vector(geometry, 10.0), 1e4))
    grid = np.round(np.arange(-89.9, 90.0, 0.1), 10)
    response = removal_response(B, geometry, grid)
    assert grid[np.argmin(response)] == 10.0
    assert response.min() < 1e-20


def test_removal_phase_invariant():
    geometry, X = _table_snapshots(K=50, seed=9)
    R_hat = sample_covariance(X)
    a0 = steering_vector(geometry, 10.0)
    B1 = projection_matrix(build_covariance_like(a0, 1e4))
    B2 = projection_matrix(build_covariance_like(np.exp(0.7j) * a0, 1e4))
    R1 = quasi_covariance(R_hat, B1, 0.5)
    R2 = quasi_covariance(R_hat, B2, 0.5)
    assert np.linalg.norm(R1 - R2) <= 1e-10 * np.linalg.norm(R1)


if __name__ == "__main__":
    test_covariance_like_spectrum()
    test_default_alpha()
    test_projector_properties()
    test_projector_degenerate()
    print("Projector OK")
    test_quasi_covariance_of_identity()
    test_desired_signal_removed_interference_kept()
    test_removal_response_minimum()
    test_removal_phase_invariant()
    print("Signal removal OK")
