"""
Capon spatial spectrum and IPNCM reconstruction over interference sectors:
R_INF = sum over intervals of the integral of a(theta) a(theta)^H / (a^H R^-1 a) dtheta,
by Gauss-Legendre quadrature (proposed) or the midpoint Riemann sum (baseline).
The integration variable is theta in radians.
"""
import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.array_model import ArrayGeometry, SteeringVector, steering_matrix_rad, steering_matrix
from src.covariance import HermitianMatrix, HermitianSolver, make_hermitian
from src.errors import ConfigurationError, DomainError
from src.quadrature import glq_integrate_matrix, glq_rule, riemann_sum_integrate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AngularSector:
    """Union of closed, pairwise disjoint angle intervals in degrees, kept sorted."""
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        cleaned = tuple(sorted((float(lo), float(hi)) for lo, hi in self.intervals))
        for lo, hi in cleaned:
            if not lo < hi:
                raise ConfigurationError(f"sector interval needs lo < hi, got [{lo}, {hi}]")
            if lo <= -90.0 or hi >= 90.0:
                raise ConfigurationError(f"sector interval [{lo}, {hi}] leaves (-90, 90) degrees")
        for (_, hi), (lo_next, _) in zip(cleaned, cleaned[1:]):
            if lo_next <= hi:
                raise ConfigurationError("sector intervals overlap")
        object.__setattr__(self, "intervals", cleaned)

    def contains(self, angle: float) -> bool:
        return any(lo <= angle <= hi for lo, hi in self.intervals)

    def intervals_rad(self) -> list[tuple[float, float]]:
        return [(np.deg2rad(lo), np.deg2rad(hi)) for lo, hi in self.intervals]


@dataclass(frozen=True)
class ReconstructionMethod:
    """glq(order, panels) or riemann(L). panels > 1 is composite GLQ (same rule per panel)."""
    kind: Literal["glq", "riemann"] = "glq"
    order: int = 3
    panels: int = 1
    num_discretizations: int = 20

    def __post_init__(self):
        if self.kind not in ("glq", "riemann"):
            raise ConfigurationError(f"unknown reconstruction method: {self.kind}")
        if self.order < 1 or self.panels < 1 or self.num_discretizations < 1:
            raise ConfigurationError("order, panels and num_discretizations must be >= 1")

    @classmethod
    def glq(cls, order: int = 3, panels: int = 1) -> "ReconstructionMethod":
        return cls(kind="glq", order=order, panels=panels)

    @classmethod
    def riemann(cls, L: int) -> "ReconstructionMethod":
        return cls(kind="riemann", num_discretizations=L)

    @classmethod
    def parse(cls, text: str) -> "ReconstructionMethod":
        """'glq3', 'glq5', 'riemann:20'."""
        text = text.strip().lower()
        if text.startswith("glq"):
            return cls.glq(order=int(text[3:] or 3))
        if text.startswith("riemann:"):
            return cls.riemann(int(text.split(":", 1)[1]))
        raise ConfigurationError(f"cannot parse reconstruction method: {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "riemann":
            return f"riemann:{self.num_discretizations}"
        return f"glq{self.order}" + (f"x{self.panels}" if self.panels > 1 else "")


def capon_power(R: HermitianMatrix, a: SteeringVector) -> float:
    """1 / (a^H R^-1 a)."""
    a = np.asarray(a, dtype=complex)
    x = HermitianSolver(R).solve(a)
    return float(1.0 / np.real(np.vdot(a, x)))


def capon_spectrum(R: HermitianMatrix, geometry: ArrayGeometry, grid) -> np.ndarray:
    """Capon power at each grid angle (degrees), one factorization for the whole grid."""
    A = steering_matrix(geometry, grid)
    X = HermitianSolver(R).solve(A)
    return 1.0 / np.real(np.sum(A.conj() * X, axis=0))


def interference_sectors(
    presumed_doas,
    half_width: float,
    desired_doa: float | None = None,
) -> AngularSector:
    """Union of [theta_i - half_width, theta_i + half_width]; must not contain the desired DOA."""
    if not half_width > 0:
        raise ConfigurationError(f"half_width must be > 0, got {half_width}")
    sector = AngularSector(tuple((t - half_width, t + half_width) for t in presumed_doas))
    if desired_doa is not None and sector.contains(desired_doa):
        raise ConfigurationError(
            f"interference sector {sector.intervals} contains the desired DOA {desired_doa}"
        )
    return sector


def reconstruct_ipncm(
    R_basis: HermitianMatrix,
    sectors: AngularSector,
    geometry: ArrayGeometry,
    method: ReconstructionMethod = ReconstructionMethod(),
) -> HermitianMatrix:
    """Quadrature of f(theta) = a a^H / (a^H R_basis^-1 a) over every sector interval, summed."""
    if not sectors.intervals:
        raise DomainError("reconstruction needs at least one sector interval")
    solver = HermitianSolver(R_basis)

    def integrand(theta: float) -> np.ndarray:
        a = steering_matrix_rad(geometry, theta)[:, 0]
        denom = np.real(np.vdot(a, solver.solve(a)))
        return np.outer(a, a.conj()) / denom

    M = geometry.num_sensors
    total = np.zeros((M, M), dtype=complex)
    for lo, hi in sectors.intervals_rad():
        if method.kind == "riemann":
            total = total + riemann_sum_integrate(integrand, lo, hi, method.num_discretizations)
            continue
        rule = glq_rule(method.order)
        edges = np.linspace(lo, hi, method.panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            total = total + glq_integrate_matrix(integrand, a, b, rule)
    return make_hermitian(total)
