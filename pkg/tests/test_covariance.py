"""Verify covariance kernels: SCM, Hermitian eigendecomposition, solves, noise estimate, true IPNCM."""
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.array_model import ArrayGeometry, SourceSpec, generate_snapshots, steering_vector
from src.covariance import (
    HermitianSolver,
    hermitian_eig,
    hermitian_solve,
    loaded_solver,
    noise_power_estimate,
    sample_covariance,
    true_ipncm,
)
from src.errors import ConditioningError, DomainError


def _random_pd(M: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((M, 3 * M)) + 1j * rng.standard_normal((M, 3 * M))
    return X @ X.conj().T / (3 * M) + 0.1 * np.eye(M)


def test_sample_covariance_rank_one():
    x = np.array([[1.0 + 1j], [2.0], [-1j]])
    assert_allclose(sample_covariance(x), np.outer(x[:, 0], x[:, 0].conj()), atol=1e-15)
    with pytest.raises(DomainError):
        sample_covariance(np.zeros((3, 0)))


def test_hermitian_eig():
    eig = hermitian_eig(np.diag([1.0, 3.0, 2.0]))
    assert_allclose(eig.eigenvalues, [3.0, 2.0, 1.0], atol=1e-14)

    a = steering_vector(ArrayGeometry(10), 10.0)
    C = 1e4 * np.outer(a, a.conj()) + np.eye(10)
    eig = hermitian_eig(C)
    assert_allclose(eig.eigenvalues[0], 10 * 1e4 + 1, rtol=1e-9)
    assert_allclose(eig.eigenvalues[1:], np.ones(9), rtol=1e-9, atol=1e-8)

    A = _random_pd(6, 0)
    eig = hermitian_eig(A)
    assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(A)[::-1], rtol=1e-9)
    V = eig.eigenvectors
    assert np.linalg.norm(V.conj().T @ V - np.eye(6)) < 1e-12
    recon = V @ np.diag(eig.eigenvalues) @ V.conj().T
    assert np.linalg.norm(recon - A) <= 1e-12 * np.linalg.norm(A)


def test_non_hermitian_rejected():
    with pytest.raises(DomainError):
        hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_hermitian_solve():
    b = np.array([1.0, 2j, -3.0])
    assert_allclose(hermitian_solve(np.eye(3), b), b, atol=1e-15)
    assert_allclose(hermitian_solve(np.diag([2.0, 4.0]), np.array([2.0, 4.0])), [1.0, 1.0], atol=1e-15)
    A = _random_pd(8, 1)
    rhs = np.arange(8) + 1j
    x = hermitian_solve(A, rhs)
    assert np.linalg.norm(A @ x - rhs) <= 1e-10 * np.linalg.norm(rhs)


def test_singular_matrix():
    with pytest.raises(ConditioningError):
        HermitianSolver(np.ones((3, 3)))
    # loaded retry succeeds and keeps the loaded matrix
    solver = loaded_solver(np.ones((3, 3)), "test")
    assert np.all(np.isfinite(solver.solve(np.array([1.0, 0.0, 0.0]))))
    assert np.real(solver.matrix[0, 0]) > 1.0


def test_noise_power_estimate():
    assert abs(noise_power_estimate(np.diag([1.0, 2.0, 3.0])) - 1.0) < 1e-14
    assert abs(noise_power_estimate(0.25 * np.eye(5)) - 0.25) < 1e-14
    X = generate_snapshots(ArrayGeometry(10), [], 1.0, 10_000, 2)
    sigma = noise_power_estimate(sample_covariance(X))
    assert 0.5 < sigma < 1.0


def test_true_ipncm():
    geometry = ArrayGeometry(10)
    assert_allclose(true_ipncm(geometry, [], 1.0), np.eye(10), atol=0)
    R = true_ipncm(geometry, [SourceSpec(-30.0, 100.0)], 1.0)
    assert abs(np.trace(R).real - 10 * 101) < 1e-9
    R = true_ipncm(geometry, [SourceSpec(-30.0, 100.0), SourceSpec(40.0, 100.0)], 1.0)
    assert abs(np.trace(R).real - 2010.0) < 1e-9
    with pytest.raises(DomainError):
        true_ipncm(geometry, [SourceSpec(10.0, 1.0, "desired")], 1.0)


if __name__ == "__main__":
    test_sample_covariance_rank_one()
    test_hermitian_eig()
    test_non_hermitian_rejected()
    print("Eigen OK")
    test_hermitian_solve()
    test_singular_matrix()
    print("Solve OK")
    test_noise_power_estimate()
    test_true_ipncm()
    print("Covariance OK")
