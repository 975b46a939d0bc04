"""Command-line entry point: ``cloakforge <command> [--config FILE] [--out PATH] ...``.

Exit codes: 0 success, 2 configuration error, 3 computation error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io, svgplot
from .bie import DiskScatterer, scattering_coefficient_bie
from .designer import (REFERENCE_PROFILES, DesignProblem, baseline_objective, design,
                       sweep_report)
from .errors import CloakforgeError, ConfigError
from .layered import (LayeredStructure, PenetrableCore, bare_neumann_disk, optical_theorem_residual,
                      scale_structure, scattering_coefficient)
from .lowfreq import extract_expansion, label_name, nonzero_coefficient_list
from .transform import RadialMap, sample_grid

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_VERIFY = 0, 2, 3, 4
TABLE_FORMATS = ("csv", "json")


class Ctx:
    def __init__(self, args, cfg: dict, base: Path | None):
        self.args, self.cfg, self.base = args, cfg, base

    def structure(self, default: LayeredStructure) -> LayeredStructure:
        if "structure" not in self.cfg:
            return default
        return io.resolve_structure(self.cfg["structure"], "structure", self.base)

    def get(self, key, default):
        return self.cfg.get(key, default)


def _emit_table(ctx: Ctx, header, rows, meta: dict, chart=None):
    """Write a table in the selected format; with --format svg write the chart plus a CSV beside it."""
    fmt = ctx.args.format or "csv"
    out = ctx.args.out
    if fmt == "svg":
        if chart is None:
            raise ConfigError(f"--format svg is not available for '{ctx.args.command}'")
        if out is None:
            raise ConfigError("--format svg needs --out")
        io.write_text(out, chart())
        io.write_text(Path(out).with_suffix(".csv"), io.to_csv(header, rows))
        return
    if fmt == "csv":
        text = io.to_csv(header, rows)
    else:
        text = io.to_json({**meta, "columns": list(header), "rows": [list(r) for r in rows]})
    _write(out, text)


def _write(out, text: str):
    if out is None:
        sys.stdout.write(text)
    else:
        io.write_text(out, text)


# --- commands --------------------------------------------------------------------

def cmd_coeffs(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("structure", "omegas", "n_max"), "config")
    s = ctx.structure(bare_neumann_disk())
    omegas = io.as_float_list(ctx.get("omegas", [1.0]), "omegas", positive=True)
    n_max = io.as_int(ctx.get("n_max", 10), "n_max", lo=0)
    rows = []
    for om in omegas:
        for n in range(n_max + 1):
            w = scattering_coefficient(s, om, n)
            rows.append((om, n, w.real, w.imag, abs(w)))
    _emit_table(ctx, ("omega", "n", "re", "im", "abs"), rows, {"structure": io.structure_to_dict(s)})
    return EXIT_OK


def cmd_expand(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("structure", "N", "precision", "table"), "config")
    s = ctx.structure(bare_neumann_disk())
    N = io.as_int(ctx.get("N", 2), "N", lo=0)
    precision = ctx.get("precision", "double")
    if precision not in ("double", "extended"):
        raise ConfigError(f"precision: expected 'double' or 'extended', got {precision!r}")
    which = ctx.get("table", "nonzero")
    if which not in ("nonzero", "full"):
        raise ConfigError(f"table: expected 'nonzero' or 'full', got {which!r}")
    tab = extract_expansion(s, N, precision=precision)
    labels = tab.labels() if which == "full" else nonzero_coefficient_list(N, s.L)
    rows = [(label_name(lab), *lab, tab.value(lab).real, tab.value(lab).imag, abs(tab.value(lab)))
            for lab in labels]

    def chart():
        return svgplot.bar_chart(f"Expansion coefficients, N={N}, L={s.L}", [r[0] for r in rows],
                                 {f"L={s.L}": [r[6] for r in rows]})

    _emit_table(ctx, ("label", "n", "l", "j", "re", "im", "abs"), rows,
                {"N": N, "L": s.L, "structure": io.structure_to_dict(s)}, chart)
    return EXIT_OK


def _weights(v) -> dict | None:
    if v is None:
        return None
    if not isinstance(v, list):
        raise ConfigError("weights: expected a list of {n, l, j, weight}")
    out = {}
    for i, w in enumerate(v):
        where = f"weights[{i}]"
        io.check_keys(w, ("n", "l", "j", "weight"), where, required=("n", "l", "j", "weight"))
        out[(io.as_int(w["n"], f"{where}.n", 0), io.as_int(w["l"], f"{where}.l", 0),
             io.as_int(w["j"], f"{where}.j", 0))] = io.as_float(w["weight"], f"{where}.weight")
    return out


DESIGN_KEYS = ("N", "L", "radii", "optimize_radii", "bounds", "weights", "seed", "restarts", "max_iters",
               "step", "grad_eps", "tol")


def design_problem(cfg: dict, seed=None, threads: int = 1) -> DesignProblem:
    io.check_keys(cfg, DESIGN_KEYS, "config")
    kw = {}
    for key in ("N", "L", "seed", "restarts", "max_iters"):
        if key in cfg:
            kw[key] = io.as_int(cfg[key], key, lo=0)
    for key in ("step", "grad_eps", "tol"):
        if key in cfg:
            kw[key] = io.as_float(cfg[key], key, positive=True)
    if "radii" in cfg:
        kw["radii"] = tuple(io.as_float_list(cfg["radii"], "radii", positive=True))
    if "bounds" in cfg:
        b = io.as_float_list(cfg["bounds"], "bounds", positive=True)
        if len(b) != 2:
            raise ConfigError("bounds: expected [lo, hi]")
        kw["bounds"] = tuple(b)
    if "optimize_radii" in cfg:
        if not isinstance(cfg["optimize_radii"], bool):
            raise ConfigError("optimize_radii: expected true or false")
        kw["optimize_radii"] = cfg["optimize_radii"]
    kw["weights"] = _weights(cfg.get("weights"))
    if seed is not None:
        kw["seed"] = seed
    try:
        return DesignProblem(threads=threads, **kw)
    except CloakforgeError as exc:
        raise ConfigError(f"config: {exc}") from exc


def cmd_design(ctx: Ctx) -> int:
    p = design_problem(ctx.cfg, ctx.args.seed, ctx.args.threads)
    res = design(p)
    fmt = ctx.args.format or "json"
    if fmt == "csv":
        _write(ctx.args.out, io.to_csv(("iteration", "objective"), res.history))
        return EXIT_OK
    if fmt != "json":
        raise ConfigError(f"--format {fmt} is not available for 'design'")
    report = {
        "N": p.N, "L": p.L, "seed": p.seed, "restarts": p.restarts,
        "objective": res.objective,
        "baseline_objective": baseline_objective(p.N, p.weights),
        "converged": res.converged, "iterations": res.iterations, "best_restart": res.restart,
        "mu": [m.mu for m in res.structure.layers],
        "eps": [m.eps for m in res.structure.layers],
        "structure": io.structure_to_dict(res.structure),
        "restart_objectives": res.restart_objectives,
        "history": [[i, f] for i, f in res.history],
        "coefficients": res.table.to_dict()["coefficients"],
    }
    _write(ctx.args.out, io.to_json(report))
    return EXIT_OK


def cmd_sweep(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("structure", "t", "n_max"), "config")
    s = ctx.structure(REFERENCE_PROFILES[2])
    ts = io.as_float_list(ctx.get("t", [1.0, 0.1, 0.01]), "t", positive=True)
    n_max = io.as_int(ctx.get("n_max", 4), "n_max", lo=0)
    rows = sweep_report(s, ts, n_max)

    def chart():
        series = {f"t={t:g}": [r[2] for r in rows if r[1] == t] for t in ts}
        return svgplot.line_chart(f"|W_n(t)|, L={s.L}", list(range(n_max + 1)), series)

    _emit_table(ctx, ("n", "t", "abs_W"), rows, {"structure": io.structure_to_dict(s)}, chart)
    return EXIT_OK


def cmd_pushforward(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("structure", "rho", "radial_nodes", "angular_nodes", "r_inner", "r_outer"), "config")
    s = ctx.structure(REFERENCE_PROFILES[2])
    try:
        F = RadialMap(io.as_float(ctx.get("rho", 0.1), "rho", positive=True))
    except CloakforgeError as exc:
        raise ConfigError(f"rho: {exc}") from exc
    grid = sample_grid(F, s, io.as_int(ctx.get("radial_nodes", 100), "radial_nodes", 1),
                       io.as_int(ctx.get("angular_nodes", 64), "angular_nodes", 1),
                       io.as_float(ctx.get("r_inner", 1.0), "r_inner"), io.as_float(ctx.get("r_outer", 3.0), "r_outer"))
    rows = []
    for smp in grid:
        a, m = smp.A_push, smp.mu_push
        lr, lt = smp.eigen()
        rows.append((smp.point[0], smp.point[1], a[0, 0], a[0, 1], a[1, 1], smp.q_push,
                     m[0, 0], m[0, 1], m[1, 1], lr, lt))
    header = ("radius", "angle", "A11", "A12", "A22", "q", "mu11", "mu12", "mu22", "A_radial", "A_tangential")
    _emit_table(ctx, header, rows, {"rho": F.rho, "structure": io.structure_to_dict(s)})
    return EXIT_OK


def verify_rows(s: LayeredStructure, omegas, rhos, n_max: int) -> list:
    """(check, parameter, residual, tolerance, passed) for the invariant suite."""
    rows = []
    for om in omegas:
        r = optical_theorem_residual(s, om)
        rows.append(("optical_theorem", om, r, 1e-9, bool(r < 1e-9)))
    for rho in rhos:
        worst = 0.0
        for om in omegas:
            for n in range(n_max + 1):
                a = scattering_coefficient(scale_structure(s, rho), om, n)
                b = scattering_coefficient(s, rho * om, n)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        rows.append(("scaling_identity", rho, worst, 1e-12, bool(worst < 1e-12)))
    if s.L == 0 and isinstance(s.core, PenetrableCore):
        worst = 0.0
        for om in omegas:
            d = DiskScatterer(s.core_radius, (s.core.mu, s.core.eps), (s.background.mu, s.background.eps), om)
            for n in range(-min(n_max, 8), min(n_max, 8) + 1):
                a = scattering_coefficient_bie(d, n, n)
                b = scattering_coefficient(s, om, n)
                worst = max(worst, abs(a - b) / (1 + abs(b)))
        rows.append(("bie_cross_validation", "", worst, 1e-10, bool(worst < 1e-10)))
    return rows


def cmd_verify(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("structure", "omegas", "rhos", "n_max"), "config")
    s = ctx.structure(bare_neumann_disk())
    rows = verify_rows(s, io.as_float_list(ctx.get("omegas", [0.01, 1.0]), "omegas", positive=True),
                       io.as_float_list(ctx.get("rhos", [0.5, 0.1, 0.01]), "rhos", positive=True),
                       io.as_int(ctx.get("n_max", 10), "n_max", lo=0))
    _emit_table(ctx, ("check", "parameter", "residual", "tolerance", "passed"), rows, {})
    return EXIT_OK if all(r[4] for r in rows) else EXIT_VERIFY


def figure_data(profiles: dict, N: int, ts, n_max: int = 4) -> tuple:
    """Coefficient table (per L) and |W_n(t)| sweep (per L) behind the two figures."""
    coeff_rows, sweep_rows = [], []
    # plotted entries: those not identically zero for the bare disk
    labels = [lab for lab, v in extract_expansion(bare_neumann_disk(), N).items() if v != 0]
    for L, s in profiles.items():
        tab = extract_expansion(s, N)
        for lab in labels:
            coeff_rows.append((L, label_name(lab), abs(tab.value(lab))))
        for n, t, w in sweep_report(s, ts, n_max):
            sweep_rows.append((L, n, t, w))
    return coeff_rows, sweep_rows


def cmd_figures(ctx: Ctx) -> int:
    io.check_keys(ctx.cfg, ("N", "t", "n_max", "design", "design_config"), "config")
    N = io.as_int(ctx.get("N", 2), "N", lo=0)
    ts = io.as_float_list(ctx.get("t", [1.0, 0.1, 0.01]), "t", positive=True)
    n_max = io.as_int(ctx.get("n_max", 4), "n_max", lo=0)
    profiles = dict(REFERENCE_PROFILES)
    if ctx.get("design", False):
        for L in (1, 2):
            cfg = {"N": N, "L": L, **ctx.get("design_config", {})}
            profiles[L] = design(design_problem(cfg, ctx.args.seed, ctx.args.threads)).structure
    coeff_rows, sweep_rows = figure_data(profiles, N, ts, n_max)
    out = Path(ctx.args.out or "figures")
    out.mkdir(parents=True, exist_ok=True)

    labels = list(dict.fromkeys(r[1] for r in coeff_rows))
    fig1 = svgplot.bar_chart(f"Low-frequency coefficients (N={N})", labels,
                             {f"L={L}": [r[2] for r in coeff_rows if r[0] == L] for L in profiles},
                             ylabel="|coefficient|")
    io.write_text(out / "fig1_coefficients.svg", fig1)
    io.write_text(out / "fig1_coefficients.csv", io.to_csv(("L", "label", "abs"), coeff_rows))
    for t in ts:
        series = {f"L={L}": [r[3] for r in sweep_rows if r[0] == L and r[2] == t] for L in profiles}
        io.write_text(out / f"fig2_sweep_t{t:g}.svg",
                      svgplot.line_chart(f"|W_n| at t={t:g}", list(range(n_max + 1)), series, ylabel="|W_n|"))
    io.write_text(out / "fig2_sweep.csv", io.to_csv(("L", "n", "t", "abs_W"), sweep_rows))
    if ctx.get("design", False):
        io.write_text(out / "profiles.json", io.to_json({f"L={L}": io.structure_to_dict(s)
                                                         for L, s in profiles.items()}))
    for f in sorted(out.iterdir()):
        print(f)
    return EXIT_OK


COMMANDS = {
    "coeffs": (cmd_coeffs, "scattering coefficients W_n at given frequencies"),
    "expand": (cmd_expand, "low-frequency expansion coefficients"),
    "design": (cmd_design, "gradient-descent design of layer materials"),
    "sweep": (cmd_sweep, "|W_n(t)| for n = 0..n_max over a list of t"),
    "pushforward": (cmd_pushforward, "anisotropic material tensors of the blown-up device"),
    "verify": (cmd_verify, "optical theorem, scaling identity and BIE cross-check"),
    "figures": (cmd_figures, "coefficient and sweep figures with their data tables"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cloakforge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    env_threads = os.environ.get("CLOAKFORGE_THREADS")
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--out", help="output path (directory for 'figures'); stdout by default")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker processes (default: $CLOAKFORGE_THREADS or 1; now {env_threads or 1})")
    return ap


def _threads(v) -> int:
    if v is not None:
        return max(1, v)
    try:
        return max(1, int(os.environ.get("CLOAKFORGE_THREADS", "1")))
    except ValueError:
        raise ConfigError("CLOAKFORGE_THREADS must be an integer") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.threads = _threads(args.threads)
        cfg, base = {}, None
        if args.config is not None:
            cfg = io.load_json(args.config)
            base = args.config.parent
            if not isinstance(cfg, dict):
                raise ConfigError(f"{args.config}: top level must be an object")
        return COMMANDS[args.command][0](Ctx(args, cfg, base))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CloakforgeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
