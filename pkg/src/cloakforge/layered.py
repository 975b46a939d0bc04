"""Concentric layered structures and their scattering coefficients W_n.

A structure is a stack of annuli r_1 > r_2 > ... > r_{L+1} around a core.
Mode n of the field in annulus j is a_j J_n(k_j r) + b_j H_n(k_j r); across
each interface u and (1/mu) du/dr are continuous, which is the 2x2 relation

    M_j(r_j) (a_j, b_j)^T = M_{j-1}(r_j) (a_{j-1}, b_{j-1})^T,
    M(r) = [[J_n(kr), H_n(kr)], [sqrt(eps/mu) J_n'(kr), sqrt(eps/mu) H_n'(kr)]].

The core supplies one linear condition on (a_L, b_L).  Pulling that row out
through all interfaces gives (p21, p22) with p21 + p22 b_0 = 0 for a_0 = 1,
and W_n = 4i b_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from . import specfun
from .errors import DegenerateStructureError, InvalidArgumentError, TruncationError

MAX_ORDER = 200


@dataclass(frozen=True)
class Medium:
    mu: float
    eps: float

    def __post_init__(self):
        for name in ("mu", "eps"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be finite and > 0, got {v!r}")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "eps", float(self.eps))

    @property
    def index(self) -> float:
        """sqrt(mu eps); the wavenumber is omega times this."""
        return math.sqrt(self.mu * self.eps)

    @property
    def admittance(self) -> float:
        """sqrt(eps/mu), the factor in front of the radial derivative."""
        return math.sqrt(self.eps / self.mu)


@dataclass(frozen=True)
class NeumannCore:
    """Perfectly insulating core (mu = infinity): du/dr = 0 on its boundary."""


@dataclass(frozen=True)
class PenetrableCore:
    mu: float
    eps: float

    def __post_init__(self):
        Medium(self.mu, self.eps)  # validation only
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "eps", float(self.eps))

    @property
    def medium(self) -> Medium:
        return Medium(self.mu, self.eps)


Core = Union[NeumannCore, PenetrableCore]


@dataclass(frozen=True)
class LayeredStructure:
    radii: tuple
    layers: tuple = ()
    core: Core = field(default_factory=NeumannCore)
    background: Medium = field(default_factory=lambda: Medium(1.0, 1.0))

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        layers = tuple(m if isinstance(m, Medium) else Medium(*m) for m in self.layers)
        if not radii:
            raise InvalidArgumentError("at least one radius is required")
        if any(not (math.isfinite(r) and r > 0) for r in radii):
            raise InvalidArgumentError(f"radii must be finite and > 0: {radii}")
        if any(a <= b for a, b in zip(radii, radii[1:])):
            raise InvalidArgumentError(f"radii must be strictly decreasing: {radii}")
        if len(layers) != len(radii) - 1:
            raise InvalidArgumentError(
                f"{len(radii)} radii need {len(radii) - 1} layers, got {len(layers)}"
            )
        if not isinstance(self.core, (NeumannCore, PenetrableCore)):
            raise InvalidArgumentError(f"unknown core {self.core!r}")
        bg = self.background if isinstance(self.background, Medium) else Medium(*self.background)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "background", bg)

    @property
    def L(self) -> int:
        return len(self.layers)

    @property
    def outer_radius(self) -> float:
        return self.radii[0]

    @property
    def core_radius(self) -> float:
        return self.radii[-1]

    def medium(self, j: int) -> Medium:
        """Medium of annulus j; j = 0 is the background."""
        return self.background if j == 0 else self.layers[j - 1]

    def material_at(self, r: float):
        """Medium at radius r, or None inside a Neumann core."""
        if r >= self.radii[0]:
            return self.background
        for j in range(1, self.L + 1):
            if r >= self.radii[j]:
                return self.layers[j - 1]
        if isinstance(self.core, PenetrableCore):
            return self.core.medium
        return None

    @property
    def mus(self) -> tuple:
        return tuple(m.mu for m in self.layers)

    @property
    def epss(self) -> tuple:
        return tuple(m.eps for m in self.layers)


def bare_neumann_disk(radius: float = 1.0) -> LayeredStructure:
    return LayeredStructure(radii=(radius,))


def neumann_coated(mu: Sequence[float], eps: Sequence[float], radii: Sequence[float] | None = None):
    """Neumann core coated by len(mu) layers; radii default to equispaced in [1, 2]."""
    L = len(mu)
    if len(eps) != L:
        raise InvalidArgumentError("mu and eps must have equal length")
    if radii is None:
        radii = default_radii(L)
    return LayeredStructure(radii=tuple(radii), layers=tuple(Medium(m, e) for m, e in zip(mu, eps)))


def default_radii(L: int, outer: float = 2.0, inner: float = 1.0) -> tuple:
    if L == 0:
        return (inner,)
    return tuple(float(r) for r in np.linspace(outer, inner, L + 1))


def matched_structure(radii: Sequence[float] = (2.0, 1.5, 1.0)) -> LayeredStructure:
    """Every region, core included, equal to the unit background: no scatterer."""
    L = len(radii) - 1
    return LayeredStructure(
        radii=tuple(radii),
        layers=tuple(Medium(1.0, 1.0) for _ in range(L)),
        core=PenetrableCore(1.0, 1.0),
    )


def scale_structure(s: LayeredStructure, rho: float) -> LayeredStructure:
    """Dilate all radii by rho; materials unchanged."""
    if not (math.isfinite(rho) and rho > 0):
        raise InvalidArgumentError(f"rho must be > 0, got {rho!r}")
    if rho == 1:
        return s
    return replace(s, radii=tuple(r * rho for r in s.radii))


# --- transfer matrices -----------------------------------------------------

def interface_matrix(n: int, k: float, r: float, mu: float, eps: float) -> np.ndarray:
    """[[J_n(kr), H_n(kr)], [a J_n'(kr), a H_n'(kr)]] with a = sqrt(eps/mu)."""
    v = specfun.cyl_values(n, k * r)
    a = math.sqrt(eps / mu)
    return np.array([[v.j, v.h], [a * v.jp, a * v.hp]], dtype=complex)


def interface_inverse(n: int, k: float, r: float, mu: float, eps: float) -> np.ndarray:
    """Inverse of interface_matrix via its adjugate and the exact Wronskian.

    det = sqrt(eps/mu) * (J H' - J' H) = sqrt(eps/mu) * 2i / (pi k r).
    """
    v = specfun.cyl_values(n, k * r)
    a = math.sqrt(eps / mu)
    det = a * 2j / (math.pi * k * r)
    adj = np.array([[a * v.hp, -v.h], [-a * v.jp, v.j]], dtype=complex)
    return adj / det


def _core_row(n: int, s: LayeredStructure, omega: float) -> np.ndarray:
    """Row vector c with c . (a_L, b_L) = 0 imposed by the core."""
    rc = s.core_radius
    outer = s.medium(s.L)
    v = specfun.cyl_values(n, omega * outer.index * rc)
    if isinstance(s.core, NeumannCore):
        return np.array([v.jp, v.hp], dtype=complex)
    inner = s.core.medium
    w = specfun.cyl_values(n, omega * inner.index * rc)
    # field in the core is a J_n only, so M_L (a_L, b_L) must be parallel to (J, a J')_core
    a_out, a_in = outer.admittance, inner.admittance
    core_j, core_dj = w.j, a_in * w.jp
    return np.array(
        [core_j * (a_out * v.jp) - core_dj * v.j, core_j * (a_out * v.hp) - core_dj * v.h],
        dtype=complex,
    )


def transfer_p(n: int, s: LayeredStructure, omega: float) -> tuple:
    """(p21, p22) up to a common nonzero scalar.

    The row is rescaled to unit max-modulus after every interface, so the
    conventional prefactor (-i pi omega / 2)^L prod mu_j r_j never appears.
    """
    if not (math.isfinite(omega) and omega > 0):
        raise InvalidArgumentError(f"omega must be > 0, got {omega!r}")
    n = abs(int(n))
    row = _core_row(n, s, omega)
    row = row / np.max(np.abs(row))
    for j in range(s.L, 0, -1):
        inner, outer = s.medium(j), s.medium(j - 1)
        if inner == outer:
            continue
        r = s.radii[j - 1]
        row = row @ interface_inverse(n, omega * inner.index, r, inner.mu, inner.eps)
        row = row @ interface_matrix(n, omega * outer.index, r, outer.mu, outer.eps)
        row = row / np.max(np.abs(row))
    if not np.all(np.isfinite(row)):
        raise DegenerateStructureError(f"non-finite transfer row for n={n}, omega={omega}")
    p21, p22 = complex(row[0]), complex(row[1])
    if abs(p22) < 1e-300:
        raise DegenerateStructureError(f"|p22| underflow for n={n}, omega={omega}")
    return p21, p22


def scattering_coefficient(s: LayeredStructure, omega: float, n: int) -> complex:
    p21, p22 = transfer_p(n, s, omega)
    if p21 == 0:
        return 0j
    return 4j * (-p21 / p22)


@dataclass(frozen=True)
class ScatteringSpectrum:
    omega: float
    n_max: int
    w: np.ndarray  # W_0 .. W_{n_max}

    def __getitem__(self, n: int) -> complex:
        return complex(self.w[abs(n)])

    def full(self) -> tuple:
        """(orders -n_max..n_max, W values) with W_{-n} = W_n."""
        orders = np.arange(-self.n_max, self.n_max + 1)
        return orders, self.w[np.abs(orders)]


def spectrum(s: LayeredStructure, omega: float, n_max: int | None = None, tol: float = 1e-15):
    if n_max is None:
        n_max = auto_truncation(s, omega, tol)
    w = np.array([scattering_coefficient(s, omega, n) for n in range(n_max + 1)], dtype=complex)
    return ScatteringSpectrum(omega=float(omega), n_max=int(n_max), w=w)


def auto_truncation(s: LayeredStructure, omega: float, tol: float = 1e-15) -> int:
    """Smallest order beyond which the geometric tail bound of |W_n| is below tol."""
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be > 0, got {tol!r}")
    floor = math.ceil(omega * s.outer_radius) + 8
    if math.isinf(tol):
        return floor
    prev = abs(scattering_coefficient(s, omega, 0))
    for n in range(1, MAX_ORDER + 1):
        cur = abs(scattering_coefficient(s, omega, n))
        if n >= floor:
            if cur == 0.0:
                return n
            ratio = cur / prev if prev > 0 else math.inf
            if cur < tol and ratio < 1 and 2 * cur * ratio / (1 - ratio) < tol:
                return n
        prev = cur
    raise TruncationError(f"multipole sum not converged by n = {MAX_ORDER} (omega={omega})")


def far_field(s, omega, theta, theta_p, n_max: int | None = None):
    """A_inf(theta, theta') = sum_{|n|<=n_max} exp(i n (theta' - theta)) W_n."""
    sp = spectrum(s, omega, n_max)
    delta = np.asarray(theta_p, dtype=float) - np.asarray(theta, dtype=float)
    orders, w = sp.full()
    out = np.exp(1j * np.multiply.outer(delta, orders)) @ w
    return complex(out) if out.ndim == 0 else out


def cross_section(s, omega, theta_p: float = 0.0, n_max: int | None = None) -> float:
    """S = 2 pi sum_{|n|<=n_max} |W_n|^2; the same for every theta'."""
    sp = spectrum(s, omega, n_max)
    _, w = sp.full()
    return float(2 * math.pi * np.sum(np.abs(w) ** 2))


OPTICAL_CONSTANT = 0.25


def optical_theorem_residual(s, omega, n_max: int | None = None, constant: float = OPTICAL_CONSTANT) -> float:
    """|Im sum W_n + c sum |W_n|^2| / sum |W_n|^2 over |n| <= n_max.

    Flux conservation of each outgoing mode gives Re b = -|b|^2, i.e.
    Im W_n = -|W_n|^2 / 4, for any lossless structure and any frequency, so
    the default c = 1/4.  Other constants can be passed to test alternatives.
    """
    sp = spectrum(s, omega, n_max)
    _, w = sp.full()
    energy = float(np.sum(np.abs(w) ** 2))
    if energy == 0.0:
        return 0.0
    return abs(float(np.sum(w).imag) + constant * energy) / energy
