"""Design the one- and two-layer coatings and compare them with the bare disk.

    python3 scripts/run_design.py [--restarts K] [--threads T]
"""

import argparse
import time
from dataclasses import replace

from cloakforge.designer import REFERENCE_PROFILES, DesignProblem, baseline_objective, design, objective
from cloakforge.layered import bare_neumann_disk, scattering_coefficient

CASES = (
    ("L=1, N=1", DesignProblem(N=1, L=1, radii=(2.0, 1.0))),
    ("L=2, N=2", DesignProblem(N=2, L=2, radii=(2.0, 1.5, 1.0))),
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    bare = bare_neumann_disk()
    for name, p in CASES:
        p = replace(p, restarts=a.restarts, threads=a.threads, seed=a.seed)
        t0 = time.perf_counter()
        res = design(p)
        base = baseline_objective(p.N)
        ref = objective(REFERENCE_PROFILES[p.L], p.N)
        print(f"{name}: objective {res.objective:.4g} (bare {base:.4g}, stored profile {ref:.4g}), "
              f"restart {res.restart}, {time.perf_counter() - t0:.1f} s")
        for i, m in enumerate(res.structure.layers):
            print(f"  layer {i}: mu = {m.mu:.6g}, eps = {m.eps:.6g}")
        for n in range(p.N + 1):
            w, w0 = (abs(scattering_coefficient(s, 0.01, n)) for s in (res.structure, bare))
            print(f"  |W_{n}(0.01)| = {w:.3e}  (bare {w0:.3e})")


if __name__ == "__main__":
    main()
