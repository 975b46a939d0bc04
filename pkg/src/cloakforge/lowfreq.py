"""Low-frequency expansion of W_n for Neumann-core layered structures.

With t the (dimensionless) frequency, every W_n has the form

    W_n(t) = t^{2n} (W_n^0 + sum_{l=1}^{N-n} sum_{j} W_n^{l,j} t^{2l} (ln t)^j) + o(t^{2N}).

The coefficients are obtained by running the transfer-matrix product with
:class:`PowerLogSeries` entries instead of numbers and reading them off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, WindowError
from .layered import LayeredStructure, Medium, NeumannCore, default_radii
from .powerlog import PowerLogSeries, leading_power, pi, real_type, series_bessel, series_inv

MAX_ORDER = 4


def max_log_power(n: int, l: int, N: int, L: int) -> int:
    """Largest ln-t power kept in the table for W_n^{l,j}."""
    return (L + 1) * (N - n)


def _bessel(kind, n, a, depth, precision):
    return series_bessel(kind, n, a, leading_power(kind, n) + depth, precision=precision)


def transfer_row_series(s: LayeredStructure, n: int, depth: int,
                        precision: str = "double") -> tuple:
    """(p21, p22) as series in t, including the (pi t mu_j r_j / 2i) factor per interface.

    With that normalization the leading t^{-n-1} coefficient of p22 is the
    g_0 of the small-frequency analysis.
    """
    if not isinstance(s.core, NeumannCore):
        raise InvalidArgumentError("series expansion requires a Neumann core")
    n = abs(int(n))
    R = real_type(precision)

    def index(m):
        return np.sqrt(R(m.mu) * R(m.eps))

    def adm(m):
        return np.sqrt(R(m.eps) / R(m.mu))

    def b(kind, a):
        return _bessel(kind, n, a, depth, precision)

    a_core = index(s.medium(s.L)) * R(s.core_radius)
    row = [b("J'", a_core), b("H1'", a_core)]
    for j in range(s.L, 0, -1):
        inner, outer = s.medium(j), s.medium(j - 1)
        r = R(s.radii[j - 1])
        ai, ao = index(inner) * r, index(outer) * r
        si, so = adm(inner), adm(outer)
        Ji, Hi, dJi, dHi = b("J", ai), b("H1", ai), b("J'", ai), b("H1'", ai)
        Jo, Ho, dJo, dHo = b("J", ao), b("H1", ao), b("J'", ao), b("H1'", ao)
        # adj(M_inner) @ M_outer
        t11 = si * (dHi * Jo) - so * (Hi * dJo)
        t12 = si * (dHi * Ho) - so * (Hi * dHo)
        t21 = -si * (dJi * Jo) + so * (Ji * dJo)
        t22 = -si * (dJi * Ho) + so * (Ji * dHo)
        scale = PowerLogSeries.monomial(-0.5j * pi(precision) * R(inner.mu) * r, 1)
        new0 = (row[0] * t11 + row[1] * t21) * scale
        new1 = (row[0] * t12 + row[1] * t22) * scale
        row = [new0.stripped(), new1.stripped()]
    return row[0], row[1]


def w_series(s: LayeredStructure, n: int, kmax: int, precision: str = "double") -> PowerLogSeries:
    """Series of W_n(t) = -4i p21 / p22 valid at least through t^kmax."""
    depth = max(2, kmax - 2 * abs(n) + 2)
    for _ in range(8):
        p21, p22 = transfer_row_series(s, n, depth, precision)
        w = (p21 * series_inv(p22)) * (-4j)
        if w.kmax >= kmax:
            return w.truncate(kmax)
        depth += max(2, kmax - w.kmax)
    raise WindowError(f"could not reach t^{kmax} for n={n}")


def _label(n: int, l: int, j: int) -> str:
    return f"W_{n}^{0}" if l == 0 else f"W_{n}^{{{l},{j}}}"


@dataclass
class ExpansionTable:
    N: int
    L: int
    w0: dict = field(default_factory=dict)  # n -> W_n^0
    wlj: dict = field(default_factory=dict)  # (n, l, j) -> W_n^{l,j}

    def labels(self) -> list:
        out = []
        for n in range(self.N + 1):
            out.append((n, 0, 0))
            out.extend(k for k in sorted(self.wlj) if k[0] == n)
        return out

    def value(self, label) -> complex:
        n, l, j = label
        return self.w0[n] if l == 0 else self.wlj[(n, l, j)]

    def items(self):
        return [(lab, self.value(lab)) for lab in self.labels()]

    def evaluate(self, n: int, t):
        """The truncated expansion of W_n at t."""
        t = np.asarray(t, dtype=float)
        lt = np.log(t)
        inner = np.full(t.shape, self.w0[n], dtype=complex)
        for (m, l, j), v in self.wlj.items():
            if m == n:
                inner = inner + v * t ** (2 * l) * lt ** j
        out = t ** (2 * n) * inner
        return complex(out) if out.ndim == 0 else out

    def section(self, n: int, weights=None) -> float:
        """|W_n^0|^2 + sum |W_n^{l,j}|^2 for one n."""
        total = abs(self.w0[n]) ** 2
        total += sum(abs(v) ** 2 for (m, _, _), v in self.wlj.items() if m == n)
        return float(total)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "L": self.L,
            "coefficients": [
                {"label": _label(*lab), "n": lab[0], "l": lab[1], "j": lab[2],
                 "re": v.real, "im": v.imag, "abs": abs(v)}
                for lab, v in self.items()
            ],
        }


def extract_expansion(s: LayeredStructure, N: int, extra: int = 0,
                      precision: str = "double") -> ExpansionTable:
    """Coefficients W_n^0 and W_n^{l,j} for n = 0..N.

    ``extra`` widens the internal series window; the table does not depend on it.
    ``precision="extended"`` runs the series arithmetic in long double, which
    matters when the truncated expansion is compared with W_n at small t.
    """
    if not (0 <= N <= MAX_ORDER):
        raise InvalidArgumentError(f"N must be in [0, {MAX_ORDER}], got {N}")
    table = ExpansionTable(N=N, L=s.L)
    for n in range(N + 1):
        w = w_series(s, n, 2 * N + extra, precision)
        table.w0[n] = w.coefficient(2 * n, 0)
        for l in range(1, N - n + 1):
            for j in range(max_log_power(n, l, N, s.L) + 1):
                table.wlj[(n, l, j)] = w.coefficient(2 * n + 2 * l, j)
    return table


def label_name(label) -> str:
    return _label(*label)


def nonzero_coefficient_list(N: int, L: int, samples: int = 3, seed: int = 7,
                             rtol: float = 1e-9) -> list:
    """Table labels whose coefficient is not identically zero in (mu, eps).

    Zero-ness is decided empirically on a few fixed pseudo-random structures
    with L layers; an entry counts as zero when it is below rtol relative to
    the largest entry of the same n in every sample.
    """
    rng = np.random.default_rng(seed)
    structures = []
    for _ in range(samples if L > 0 else 1):
        mu = np.exp(rng.uniform(np.log(0.3), np.log(3.0), L))
        eps = np.exp(rng.uniform(np.log(0.3), np.log(3.0), L))
        structures.append(LayeredStructure(
            radii=default_radii(L), layers=tuple(Medium(m, e) for m, e in zip(mu, eps))))
    keep = set()
    for s in structures:
        tab = extract_expansion(s, N)
        for n in range(N + 1):
            labs = [lab for lab in tab.labels() if lab[0] == n]
            scale = max(abs(tab.value(lab)) for lab in labs)
            for lab in labs:
                if scale > 0 and abs(tab.value(lab)) > rtol * scale:
                    keep.add(lab)
    return [lab for lab in ExpansionTable(N=N, L=L, w0={n: 0 for n in range(N + 1)},
                                          wlj={k: 0 for k in _shape(N, L)}).labels()
            if lab in keep]


def _shape(N: int, L: int) -> list:
    return [(n, l, j) for n in range(N + 1) for l in range(1, N - n + 1)
            for j in range(max_log_power(n, l, N, L) + 1)]
