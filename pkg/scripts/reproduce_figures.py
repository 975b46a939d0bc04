"""Regenerate the coefficient and sweep figures (SVG plus CSV) into a directory.

    python3 scripts/reproduce_figures.py [OUT_DIR] [--design]

With --design the L=1 and L=2 profiles are re-optimized first (a few minutes
on one core); otherwise the stored reference profiles are used.
"""

import json
import sys
import tempfile
from pathlib import Path

from cloakforge.cli import main


def run(out: str, redesign: bool) -> int:
    cfg = {"N": 2, "t": [1.0, 0.1, 0.01], "n_max": 4, "design": redesign}
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "figures.json"
        path.write_text(json.dumps(cfg))
        return main(["figures", "--config", str(path), "--out", out, "--seed", "0"])


if __name__ == "__main__":
    args = [a for a in sys.argv[1:] if not a.startswith("--")]
    sys.exit(run(args[0] if args else "figures", "--design" in sys.argv))
