"""Run the acceptance suite and print only the per-criterion verdict lines."""

import re
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[1]
proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                       str(root / "tests" / "test_acceptance.py")],
                      cwd=root, capture_output=True, text=True)
for line in proc.stdout.splitlines():
    if re.match(r"\[criterion", line):
        print(line)
print(proc.stdout.strip().splitlines()[-1])
sys.exit(proc.returncode)
