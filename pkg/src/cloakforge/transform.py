"""Blow-up map F_rho and push-forward of (A, q) = (1/mu, eps) under it.

F_rho is radial, maps the rho-disk onto the unit disk and is the identity
outside radius 2:

    f(r) = r / rho                                   r <= rho
         = 1/2 + r / (2 rho)                         rho <= r <= 2 rho
         = (3 - 4 rho) / (2 (1 - rho)) + r / (4 (1 - rho))   2 rho <= r <= 2
         = r                                         r >= 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidArgumentError, OutsideImageError, SingularPointError
from .layered import LayeredStructure, scale_structure

EDGE_TOL = 1e-12


@dataclass(frozen=True)
class RadialMap:
    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and 0 < self.rho <= 0.5):
            raise InvalidArgumentError(f"rho must lie in (0, 1/2], got {self.rho!r}")

    @property
    def breakpoints(self) -> tuple:
        return (self.rho, 2 * self.rho, 2.0)

    def f(self, r: float) -> float:
        rho = self.rho
        if r >= 2:
            return r
        if r >= 2 * rho:
            return (3 - 4 * rho) / (2 * (1 - rho)) + r / (4 * (1 - rho))
        if r >= rho:
            return 0.5 + r / (2 * rho)
        return r / rho

    def fprime(self, r: float) -> float:
        """Outer-branch one-sided derivative at breakpoints."""
        rho = self.rho
        if r >= 2:
            return 1.0
        if r >= 2 * rho:
            return 1 / (4 * (1 - rho))
        if r >= rho:
            return 1 / (2 * rho)
        return 1 / rho

    def f_inverse(self, s: float) -> float:
        rho = self.rho
        if s >= 2:
            return s
        if s >= 1.5:
            return 4 * (1 - rho) * s - 2 * (3 - 4 * rho)
        if s >= 1:
            return 2 * rho * (s - 0.5)
        raise OutsideImageError(f"radius {s!r} < 1 lies in the image of the cloaked core")


def _polar(x):
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise InvalidArgumentError(f"expected a point (x1, x2), got shape {x.shape}")
    return x, float(math.hypot(x[0], x[1]))


def map_forward(F: RadialMap, x) -> np.ndarray:
    x, r = _polar(x)
    if r == 0:
        return np.zeros(2)
    if r >= 2:
        return x.copy()
    return x * (F.f(r) / r)


def map_inverse(F: RadialMap, y) -> np.ndarray:
    y, s = _polar(y)
    if s >= 2:
        return y.copy()
    if s < 1:
        raise OutsideImageError(f"|y| = {s!r} < 1 is not in the image of the exterior of the core")
    return y * (F.f_inverse(s) / s)


def jacobian(F: RadialMap, x) -> np.ndarray:
    """DF = f'(r) xhat xhat^T + (f(r)/r) (I - xhat xhat^T)."""
    x, r = _polar(x)
    if r == 0:
        raise SingularPointError("the Jacobian of the radial map is undefined at the origin")
    if r >= 2:
        return np.eye(2)
    xh = x / r
    P = np.outer(xh, xh)
    return F.fprime(r) * P + (F.f(r) / r) * (np.eye(2) - P)


@dataclass(frozen=True)
class TensorFieldSample:
    point: tuple  # (radius, angle) in the image coordinates
    A_push: np.ndarray  # pushed 1/mu, symmetric positive definite
    q_push: float  # pushed eps
    mu_push: np.ndarray  # inverse of A_push

    def eigen(self) -> tuple:
        """(radial, tangential) eigenvalues of A_push."""
        r, th = self.point
        e = np.array([math.cos(th), math.sin(th)])
        et = np.array([-e[1], e[0]])
        return float(e @ self.A_push @ e), float(et @ self.A_push @ et)


def push_forward(F: RadialMap, s: LayeredStructure, y) -> TensorFieldSample:
    """(F_* A, F_* q) at y for the rho-scaled copy of s, with A = 1/mu and q = eps."""
    y, radius = _polar(y)
    if 1 - EDGE_TOL <= radius < 1:  # rounding of points placed on the unit circle
        y, radius = y / radius, 1.0
    x = map_inverse(F, y)
    r = F.f_inverse(radius)
    medium = scale_structure(s, F.rho).material_at(max(r, F.rho * s.core_radius))
    if medium is None:
        raise OutsideImageError(f"|y| = {radius!r} maps into the Neumann core")
    D = jacobian(F, x)
    det = float(np.linalg.det(D))
    A = (D @ D.T) / (medium.mu * det)
    A = 0.5 * (A + A.T)
    return TensorFieldSample(point=(radius, math.atan2(y[1], y[0])), A_push=A,
                             q_push=medium.eps / det, mu_push=np.linalg.inv(A))


def sample_grid(F: RadialMap, s: LayeredStructure, radial_nodes: int, angular_nodes: int,
                r_inner: float = 1.0, r_outer: float = 3.0) -> list:
    """Polar grid, radius-major; a single radial node sits at r_outer."""
    if radial_nodes < 1 or angular_nodes < 1:
        raise InvalidArgumentError("grid needs at least one node in each direction")
    if not 1.0 <= r_inner <= r_outer:
        raise InvalidArgumentError(f"need 1 <= r_inner <= r_outer, got {r_inner}, {r_outer}")
    radii = [r_outer] if radial_nodes == 1 else np.linspace(r_inner, r_outer, radial_nodes)
    out = []
    for r in radii:
        for k in range(angular_nodes):
            th = 2 * math.pi * k / angular_nodes
            smp = push_forward(F, s, (r * math.cos(th), r * math.sin(th)))
            out.append(replace(smp, point=(float(r), th)))  # nominal grid coordinates
    return out
