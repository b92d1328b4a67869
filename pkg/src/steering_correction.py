"""
Steering-vector correction. Solves

    min_e  (a0 + e)^H R^-1 (a0 + e)
    s.t.   a0^H e = 0,
           (a0 + e)^H R (a0 + e) <= a0^H R a0

R_inf is always loaded by 1e-12 trace/M first. The reduced model parameterizes
e = Q y over an orthonormal basis Q of the complement of a0, which turns the
problem into a convex generalized trust-region subproblem. It is solved in the
eigenbasis of R, where the stationary point for multiplier mu is
a = nu (R^-1 + mu R)^-1 a0; mu is the root of the monotone secular equation
on the constraint.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
from scipy.optimize import brentq

from src.array_model import SteeringVector
from src.covariance import HermitianMatrix, diagonal_load, loaded_solver, make_hermitian
from src.errors import ConditioningError, ConvergenceError, DomainError

logger = logging.getLogger(__name__)

MAX_ITER = 200
CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class CorrectionResult:
    corrected: SteeringVector = field(repr=False)
    e_perp: np.ndarray = field(repr=False)
    objective: float
    kkt_residual: float
    active_inequality: bool
    multiplier: float = 0.0


@dataclass(frozen=True)
class ReducedProblem:
    """
    f(y) = y^H A y + 2 Re(b^H y) + f0   (objective, f0 = a0^H R^-1 a0)
    g(y) = y^H G y + 2 Re(h^H y)        (constraint g(y) <= 0, c = a0^H R a0)
    """
    Q: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    f0: float
    G: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    c: float
    R: np.ndarray = field(repr=False)
    R_inv: np.ndarray = field(repr=False)

    def lift(self, y: np.ndarray) -> np.ndarray:
        """e_perp = Q y."""
        return self.Q @ y

    def objective(self, y: np.ndarray) -> float:
        return float(np.real(np.vdot(y, self.A @ y)) + 2.0 * np.real(np.vdot(self.b, y)) + self.f0)

    def constraint(self, y: np.ndarray) -> float:
        return float(np.real(np.vdot(y, self.G @ y)) + 2.0 * np.real(np.vdot(self.h, y)))


def reduce_to_subproblem(a0: SteeringVector, R_inf: HermitianMatrix) -> ReducedProblem:
    a0 = np.asarray(a0, dtype=complex)
    R_inf = np.asarray(R_inf, dtype=complex)
    if a0.ndim != 1 or R_inf.shape != (a0.shape[0], a0.shape[0]):
        raise DomainError(f"a0 of length {a0.shape} does not match R_inf of shape {R_inf.shape}")
    if not np.any(a0):
        raise DomainError("presumed steering vector must be nonzero")
    R = diagonal_load(R_inf)
    logger.debug("Steering correction: R_inf loaded by %.3g", float(np.real(R[0, 0] - R_inf[0, 0])))
    solver = loaded_solver(R, "steering correction")
    R = solver.matrix
    P = make_hermitian(solver.solve(np.eye(a0.shape[0], dtype=complex)))
    Q = la.null_space(a0.conj()[None, :])
    PQ = P @ Q
    RQ = R @ Q
    return ReducedProblem(
        Q=Q,
        A=make_hermitian(Q.conj().T @ PQ),
        b=PQ.conj().T @ a0,
        f0=float(np.real(np.vdot(a0, P @ a0))),
        G=make_hermitian(Q.conj().T @ RQ),
        h=RQ.conj().T @ a0,
        c=float(np.real(np.vdot(a0, R @ a0))),
        R=R,
        R_inv=P,
    )


def _kkt_residual(problem: ReducedProblem, y: np.ndarray, lam: float) -> float:
    r = (problem.A + lam * problem.G) @ y + problem.b + lam * problem.h
    scale = (
        np.linalg.norm(problem.A, 2) * np.linalg.norm(y)
        + np.linalg.norm(problem.b)
        + lam * (np.linalg.norm(problem.G, 2) * np.linalg.norm(y) + np.linalg.norm(problem.h))
        + np.finfo(float).tiny
    )
    g = problem.constraint(y)
    residual = max(np.linalg.norm(r) / scale, max(g, 0.0) / problem.c)
    if lam > 0:
        # complementary slackness
        residual = max(residual, abs(g) / problem.c)
    return float(residual)


def _result(problem: ReducedProblem, a0: np.ndarray, y: np.ndarray, lam: float, active: bool,
            kkt: float | None = None) -> CorrectionResult:
    e_perp = problem.lift(y)
    corrected = a0 + e_perp
    objective = float(np.real(np.vdot(corrected, problem.R_inv @ corrected)))
    if kkt is None:
        kkt = _kkt_residual(problem, y, lam)
    return CorrectionResult(
        corrected=corrected,
        e_perp=e_perp,
        objective=objective,
        kkt_residual=kkt,
        active_inequality=active,
        multiplier=float(lam),
    )


def correct_steering(a0: SteeringVector, R_inf: HermitianMatrix) -> CorrectionResult:
    """
    Corrected desired steering vector a0 + e_perp. Raises ConvergenceError (with the
    best feasible point in .best) when the multiplier search hits its cap.
    """
    a0 = np.asarray(a0, dtype=complex)
    problem = reduce_to_subproblem(a0, R_inf)
    n = problem.Q.shape[1]
    if n == 0:
        return _result(problem, a0, np.zeros(0, dtype=complex), 0.0, False, kkt=0.0)

    try:
        lam_R, U = la.eigh(problem.R)
    except la.LinAlgError as e:
        raise ConditioningError(f"eigendecomposition of the loaded IPNCM failed: {e}") from e
    if lam_R[0] <= 0:
        raise ConditioningError(f"loaded IPNCM is not positive definite (min eigenvalue {lam_R[0]:.3g})")
    u0 = U.conj().T @ a0
    w0 = np.abs(u0) ** 2
    norm0 = float(np.sum(w0))

    # stationary point of the Lagrangian on a0^H e = 0: (R^-1 + mu R) a = nu a0
    def y_of(mu: float) -> np.ndarray:
        t = lam_R / (1.0 + mu * lam_R ** 2)
        u = (norm0 / float(np.sum(w0 * t))) * t * u0
        return problem.Q.conj().T @ (U @ u - a0)

    def g_of(mu: float) -> float:
        t = lam_R / (1.0 + mu * lam_R ** 2)
        nu = norm0 / float(np.sum(w0 * t))
        return float(nu ** 2 * np.sum(lam_R * w0 * t ** 2)) - problem.c

    g0 = g_of(0.0)
    if g0 <= CONSTRAINT_TOL * problem.c:
        logger.debug("Steering correction: interior solution (g=%.3g)", g0)
        return _checked(problem, a0, y_of(0.0), 0.0, active=False)

    g_inf = norm0 ** 2 / float(np.sum(w0 / lam_R)) - problem.c
    if g_inf >= -CONSTRAINT_TOL * problem.c:
        # R is flat over the support of a0; the constraint only holds at e_perp = 0
        logger.debug("Steering correction: degenerate constraint, keeping a0")
        return _result(problem, a0, np.zeros(n, dtype=complex), 0.0, True, kkt=0.0)

    lam_hi = 1.0 / float(lam_R[-1]) ** 2
    for _ in range(MAX_ITER):
        if g_of(lam_hi) < 0:
            break
        lam_hi *= 4.0
    else:
        best = _result(problem, a0, np.zeros(n, dtype=complex), 0.0, True)
        raise ConvergenceError(
            f"no multiplier bracket after {MAX_ITER} expansions (lambda={lam_hi:.3g})", best=best
        )

    lam, info = brentq(
        g_of, 0.0, lam_hi,
        xtol=1e-30 * lam_hi, rtol=4 * np.finfo(float).eps,
        maxiter=MAX_ITER, full_output=True, disp=False,
    )
    if not info.converged:
        best = _result(problem, a0, y_of(lam_hi), lam_hi, True)
        raise ConvergenceError(
            f"multiplier search did not converge in {MAX_ITER} iterations ({info.flag})", best=best
        )
    logger.debug("Steering correction: active constraint, lambda=%.6g after %d iterations", lam, info.iterations)
    return _checked(problem, a0, y_of(lam), lam, active=True)


def _checked(problem: ReducedProblem, a0: np.ndarray, y: np.ndarray, lam: float, active: bool) -> CorrectionResult:
    # y = 0 is always feasible with objective f0
    if problem.objective(y) > problem.f0 * (1.0 + 1e-12):
        logger.warning("Steering correction: solution worse than a0 (objective %.6g > %.6g), keeping a0",
                       problem.objective(y), problem.f0)
        return _result(problem, a0, np.zeros_like(y), 0.0, True)
    return _result(problem, a0, y, lam, active)
