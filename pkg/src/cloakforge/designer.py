"""Gradient-descent search for layer materials that flatten the low-frequency expansion.

Free parameters are log(mu_j), log(eps_j) (and optionally the interior radii).
The objective is the weighted sum of squared expansion coefficients up to order N.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CloakforgeError, InvalidArgumentError, OptimizationFailedError
from .layered import (LayeredStructure, Medium, bare_neumann_disk, default_radii, neumann_coated,
                      scattering_coefficient)
from .lowfreq import ExpansionTable, extract_expansion

# Reference low-frequency profiles with 0, 1 and 2 layers on the unit Neumann disk.
REFERENCE_PROFILES = {
    0: bare_neumann_disk(),
    1: neumann_coated((0.6,), (4 / 3,), (2.0, 1.0)),
    2: neumann_coated((1.4905, 0.27594), (1.09271, 1.6702), (2.0, 1.5, 1.0)),
}

GRAD_FLOOR = 1e-12
MIN_STEP = 1e-14
RADIUS_GAP = 1e-3


@dataclass(frozen=True)
class DesignProblem:
    N: int = 2
    L: int = 2
    radii: tuple | None = None  # None -> equispaced from 2 down to 1
    optimize_radii: bool = False
    bounds: tuple = (0.05, 20.0)
    weights: dict | None = None  # {(n, l, j): w}; missing labels weigh 1
    seed: int = 0
    restarts: int = 20
    max_iters: int = 150
    step: float = 0.5
    grad_eps: float = 1e-6
    tol: float = 1e-12
    threads: int = 1

    def __post_init__(self):
        lo, hi = self.bounds
        if not (0 < lo < hi and math.isfinite(hi)):
            raise InvalidArgumentError(f"bounds must satisfy 0 < lo < hi < inf, got {self.bounds}")
        if self.restarts < 1:
            raise InvalidArgumentError("restarts must be >= 1")
        if self.N < 0 or self.L < 0:
            raise InvalidArgumentError("N and L must be >= 0")
        if self.max_iters < 0 or not self.step > 0 or not self.grad_eps > 0:
            raise InvalidArgumentError("max_iters >= 0, step > 0 and grad_eps > 0 are required")
        if self.weights is not None and any(w < 0 for w in self.weights.values()):
            raise InvalidArgumentError("weights must be nonnegative")
        if self.radii is not None and len(self.radii) != self.L + 1:
            raise InvalidArgumentError(f"need L+1 = {self.L + 1} radii, got {len(self.radii)}")

    def start_radii(self) -> tuple:
        return tuple(float(r) for r in self.radii) if self.radii is not None else default_radii(self.L)


@dataclass
class DesignResult:
    structure: LayeredStructure
    objective: float
    table: ExpansionTable
    iterations: int
    converged: bool
    history: list = field(default_factory=list)  # [(iteration, objective)] of the winning restart
    restart: int = 0
    restart_objectives: list = field(default_factory=list)


def objective(s: LayeredStructure, N: int, weights: dict | None = None, table: ExpansionTable | None = None) -> float:
    """Weighted sum over n <= N of |W_n^0|^2 + sum_{l,j} |W_n^{l,j}|^2."""
    tab = table if table is not None else extract_expansion(s, N)
    w = weights or {}
    return float(sum(w.get(lab, 1.0) * abs(v) ** 2 for lab, v in tab.items()))


# --- parameter vector <-> structure ------------------------------------------

def _structure(p: DesignProblem, x: np.ndarray) -> LayeredStructure:
    L = p.L
    mats = np.exp(x[:2 * L])
    radii = list(p.start_radii())
    if p.optimize_radii and L > 1:
        radii[1:L] = x[2 * L:]
    layers = tuple(Medium(float(mats[2 * j]), float(mats[2 * j + 1])) for j in range(L))
    return LayeredStructure(radii=tuple(radii), layers=layers)


def _project(p: DesignProblem, x: np.ndarray) -> np.ndarray:
    lo, hi = math.log(p.bounds[0]), math.log(p.bounds[1])
    x = x.copy()
    x[:2 * p.L] = np.clip(x[:2 * p.L], lo, hi)
    if p.optimize_radii and p.L > 1:
        r = p.start_radii()
        inner = np.sort(x[2 * p.L:])[::-1]
        top, bottom = r[0], r[-1]
        for i in range(len(inner)):
            upper = top - RADIUS_GAP * (i + 1)
            lower = bottom + RADIUS_GAP * (len(inner) - i)
            inner[i] = min(max(inner[i], lower), upper)
        x[2 * p.L:] = inner
    return x


def _f(p: DesignProblem, x: np.ndarray) -> float:
    try:
        val = objective(_structure(p, x), p.N, p.weights)
    except (CloakforgeError, FloatingPointError, ZeroDivisionError):
        return math.inf
    return val if math.isfinite(val) else math.inf


def _gradient(p: DesignProblem, x: np.ndarray) -> np.ndarray:
    g = np.zeros_like(x)
    for i in range(x.size):
        h = p.grad_eps * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (_f(p, x + e) - _f(p, x - e)) / (2 * h)
    return g


def _initial_points(p: DesignProblem) -> list:
    rng = np.random.default_rng(p.seed)
    lo, hi = math.log(p.bounds[0]), math.log(p.bounds[1])
    n_r = p.L - 1 if (p.optimize_radii and p.L > 1) else 0
    r0 = np.array(p.start_radii()[1:p.L], float) if n_r else np.zeros(0)
    out = [np.concatenate([np.zeros(2 * p.L), r0])]
    for _ in range(p.restarts - 1):
        mats = rng.uniform(lo, hi, 2 * p.L)
        rad = np.sort(rng.uniform(p.start_radii()[-1], p.start_radii()[0], n_r))[::-1] if n_r else np.zeros(0)
        out.append(np.concatenate([mats, rad]))
    return [_project(p, x) for x in out]


def _descend(p: DesignProblem, x0: np.ndarray):
    """One restart; returns (x, f, iterations, converged, history)."""
    x = x0
    fx = _f(p, x)
    history = [(0, fx)]
    if not math.isfinite(fx):
        return x, fx, 0, False, history
    step = p.step
    it = 0
    converged = fx < p.tol
    while it < p.max_iters and not converged:
        g = _gradient(p, x)
        gnorm = float(np.linalg.norm(g))
        if not math.isfinite(gnorm):
            break
        if gnorm < GRAD_FLOOR:
            converged = True
            break
        d = -g / gnorm
        trial_step = min(2.0 * step, p.step)
        while trial_step > MIN_STEP:
            xn = _project(p, x + trial_step * d)
            fn = _f(p, xn)
            if fn < fx:
                break
            trial_step *= 0.5
        else:
            break  # no descent along the projected direction
        it += 1
        x, fx, step = xn, fn, trial_step
        history.append((it, fx))
        converged = fx < p.tol
    return x, fx, it, converged, history


def _run_restart(args):
    p, x0 = args
    return _descend(p, x0)


def design(p: DesignProblem) -> DesignResult:
    """Best-of-restarts projected gradient descent; deterministic for a given problem."""
    starts = _initial_points(p)
    jobs = [(p, x0) for x0 in starts]
    threads = max(1, int(p.threads))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
            runs = list(pool.map(_run_restart, jobs))
    else:
        runs = [_run_restart(j) for j in jobs]

    best = None
    for i, run in enumerate(runs):
        if math.isfinite(run[1]) and (best is None or run[1] < runs[best][1]):
            best = i
    if best is None:
        raise OptimizationFailedError("every restart produced a non-finite objective",
                                      best=(starts[0], math.inf))
    x, fx, iters, converged, history = runs[best]
    s = _structure(p, x)
    table = extract_expansion(s, p.N)
    return DesignResult(structure=s, objective=objective(s, p.N, p.weights, table), table=table,
                        iterations=iters, converged=converged, history=history, restart=best,
                        restart_objectives=[r[1] for r in runs])


def baseline_objective(N: int, weights: dict | None = None) -> float:
    """Objective of the uncoated unit Neumann disk (L = 0)."""
    return objective(bare_neumann_disk(), N, weights)


def sweep_report(s: LayeredStructure, t_list, n_max: int = 4) -> list:
    """Rows (n, t, |W_n(t)|) for n = 0..n_max; background index 1 so omega = t."""
    rows = []
    for t in t_list:
        if not t > 0:
            raise InvalidArgumentError(f"t must be > 0, got {t!r}")
    for n in range(n_max + 1):
        for t in t_list:
            rows.append((n, float(t), abs(scattering_coefficient(s, float(t), n))))
    return rows


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CLOAKFORGE_THREADS", "1")))
    except ValueError:
        return 1
