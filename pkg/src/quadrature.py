"""
Gauss-Legendre quadrature (fixed 3-point rule and general order) and the midpoint
Riemann sum used by the summation baseline. Matrix integrands are callables
theta -> (M, M) array, integrated entrywise.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial.legendre import Legendre

from src.errors import DomainError

MatrixIntegrand = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class GlqRule:
    """Nodes on [-1, 1] (strictly increasing, symmetric) with positive weights summing to 2."""
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != (self.order,) or weights.shape != (self.order,):
            raise DomainError("rule needs exactly `order` nodes and weights")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("weights must be positive")
        if abs(weights.sum() - 2.0) > 1e-12:
            raise DomainError(f"weights must sum to 2, got {weights.sum()!r}")
        if np.max(np.abs(nodes + nodes[::-1])) > 1e-12:
            raise DomainError("nodes must be symmetric about 0")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes l_n = (a+b)/2 + z_n (b-a)/2 and weights scaled by (b-a)/2."""
        half = 0.5 * (b - a)
        return 0.5 * (a + b) + half * self.nodes, half * self.weights


def legendre_polynomial(N: int, z: float) -> float:
    """P_N(z), normalized so that P_N(1) = 1."""
    if N < 0:
        raise DomainError(f"Legendre degree must be >= 0, got {N}")
    return float(Legendre.basis(N)(z))


def legendre_weight(N: int, z: float) -> float:
    """Closed-form Gauss weight at a root z of P_N: 2 / ((1 - z^2) P_N'(z)^2)."""
    dp = Legendre.basis(N).deriv()(z)
    return float(2.0 / ((1.0 - z * z) * dp * dp))


def glq_rule_3() -> GlqRule:
    """Roots of P_3(z) = (5z^3 - 3z)/2 with weights 5/9, 8/9, 5/9."""
    r = np.sqrt(15.0) / 5.0
    return GlqRule(
        nodes=np.array([-r, 0.0, r]),
        weights=np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]),
        order=3,
    )


def glq_rule(N: int) -> GlqRule:
    """General N-point rule. N=3 returns the closed form."""
    if N < 1:
        raise DomainError(f"rule order must be >= 1, got {N}")
    if N == 3:
        return glq_rule_3()
    nodes, weights = legendre.leggauss(N)
    # leggauss weights can sum to 2 only up to rounding
    weights = weights * (2.0 / weights.sum())
    return GlqRule(nodes=nodes, weights=weights, order=N)


def _check_interval(a: float, b: float) -> None:
    if not a < b:
        raise DomainError(f"integration interval needs a < b, got [{a}, {b}]")


def glq_integrate_scalar(f: Callable[[float], float], a: float, b: float, rule: GlqRule) -> float:
    _check_interval(a, b)
    points, weights = rule.mapped(a, b)
    return float(sum(w * f(x) for x, w in zip(points, weights)))


def glq_integrate_matrix(F: MatrixIntegrand, a: float, b: float, rule: GlqRule) -> np.ndarray:
    _check_interval(a, b)
    points, weights = rule.mapped(a, b)
    total = None
    for x, w in zip(points, weights):
        term = w * np.asarray(F(x))
        total = term if total is None else total + term
    return total


def riemann_sum_integrate(F: MatrixIntegrand, a: float, b: float, L: int) -> np.ndarray:
    """sum_l F(theta_l) * dtheta on L uniform subintervals, theta_l at the midpoints."""
    _check_interval(a, b)
    if int(L) != L or L < 1:
        raise DomainError(f"number of discretizations must be an integer >= 1, got {L}")
    step = (b - a) / L
    total = None
    for l in range(int(L)):
        term = step * np.asarray(F(a + (l + 0.5) * step))
        total = term if total is None else total + term
    return total
