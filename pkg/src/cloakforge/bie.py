"""Boundary-integral route to W_nm for a single penetrable disk.

On a circle of radius R the single-layer potential with kernel
Gamma_k(x) = -(i/4) H_0^(1)(k|x|) is diagonal in Fourier modes:

    S^k[e^{im.}](r, theta) = -(i pi R / 2) J_m(k r_<) H_m(k r_>) e^{im theta},

with r_< = min(r, R), r_> = max(r, R).  The transmission system for the
interior density phi and exterior density psi therefore splits into one 2x2
system per mode.  The constants above are checked against trapezoid
quadrature of the kernel in the test-suite helpers below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidArgumentError, NearResonanceError
from .specfun import cyl_values

COND_LIMIT = 1e12
QUAD_NODES = 2048


@dataclass(frozen=True)
class DiskScatterer:
    radius: float = 1.0
    inside: tuple = (1.0, 1.0)  # (mu_1, eps_1)
    outside: tuple = (1.0, 1.0)  # (mu_0, eps_0)
    omega: float = 1.0

    def __post_init__(self):
        vals = (self.radius, *self.inside, *self.outside, self.omega)
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise InvalidArgumentError(f"disk parameters must be finite and positive, got {vals}")

    @property
    def k_in(self) -> float:
        return self.omega * math.sqrt(self.inside[0] * self.inside[1])

    @property
    def k_out(self) -> float:
        return self.omega * math.sqrt(self.outside[0] * self.outside[1])


def single_layer_mode(k: float, R: float, m: int, r: float) -> complex:
    """S^k[e^{im.}] at radius r (angle 0)."""
    lo, hi = min(r, R), max(r, R)
    j = special.jv(m, k * lo)
    h = special.hankel1(m, k * hi)
    return complex(-0.5j * math.pi * R * j * h)


def single_layer_mode_dr(k: float, R: float, m: int, r: float, side: int) -> complex:
    """d/dr of S^k[e^{im.}] at radius r; at r = R, side=-1 / +1 picks the interior / exterior limit."""
    c = -0.5j * math.pi * R * k
    if r < R or (r == R and side < 0):
        return complex(c * special.jvp(m, k * r) * special.hankel1(m, k * R))
    return complex(c * special.jv(m, k * R) * special.h1vp(m, k * r))


def mode_matrix(d: DiskScatterer, m: int) -> tuple:
    """(matrix, rhs) of the mode-m transmission system in (phi_m, psi_m)."""
    R, k, k0 = d.radius, d.k_in, d.k_out
    mu1, mu0 = d.inside[0], d.outside[0]
    vi, vo = cyl_values(m, k * R), cyl_values(m, k0 * R)
    c = -0.5j * math.pi * R
    A = np.array([
        [c * vi.j * vi.h, -c * vo.j * vo.h],
        [c * (k / mu1) * vi.jp * vi.h, -c * (k0 / mu0) * vo.j * vo.hp],
    ], dtype=complex)
    rhs = np.array([vo.j, (k0 / mu0) * vo.jp], dtype=complex)
    return A, rhs


def mode_densities(d: DiskScatterer, m: int) -> tuple:
    """Fourier coefficients (phi_m, psi_m) for the incident field J_m(k_0 r) e^{im theta}."""
    A, rhs = mode_matrix(d, m)
    cond = np.linalg.cond(A)
    if not cond < COND_LIMIT:
        raise NearResonanceError(f"mode {m}: condition number {cond:.3g} exceeds {COND_LIMIT:g}")
    phi, psi = np.linalg.solve(A, rhs)
    return complex(phi), complex(psi)


def scattering_coefficient_bie(d: DiskScatterer, n: int, m: int) -> complex:
    """W_nm = integral over the circle of J_n(k_0|y|) e^{-in theta_y} psi_m(y)."""
    if n != m:
        return 0j
    _, psi = mode_densities(d, m)
    return 2 * math.pi * d.radius * special.jv(n, d.k_out * d.radius) * psi


# --- quadrature checks of the diagonal form ----------------------------------

def single_layer_quadrature(k: float, R: float, m: int, r: float, nodes: int = QUAD_NODES) -> complex:
    """Trapezoid rule for S^k[e^{im.}] at (r, 0); spectrally accurate off the circle."""
    th = 2 * math.pi * np.arange(nodes) / nodes
    dist = np.sqrt(r * r + R * R - 2 * r * R * np.cos(th))
    vals = -0.25j * special.hankel1(0, k * dist) * np.exp(1j * m * th)
    return complex(vals.sum() * R * 2 * math.pi / nodes)


def single_layer_dr_quadrature(k: float, R: float, m: int, r: float, nodes: int = QUAD_NODES) -> complex:
    th = 2 * math.pi * np.arange(nodes) / nodes
    dist = np.sqrt(r * r + R * R - 2 * r * R * np.cos(th))
    # d/dr H_0(k d) = -k H_1(k d) (r - R cos th) / d
    vals = 0.25j * k * special.hankel1(1, k * dist) * (r - R * np.cos(th)) / dist * np.exp(1j * m * th)
    return complex(vals.sum() * R * 2 * math.pi / nodes)


def jump_residual(k: float, R: float, m: int) -> float:
    """|d_r S|_+ - d_r S|_- - 1| for the unit mode density."""
    jump = single_layer_mode_dr(k, R, m, R, +1) - single_layer_mode_dr(k, R, m, R, -1)
    return abs(jump - 1.0)
