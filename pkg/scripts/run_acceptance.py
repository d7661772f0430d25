"""Run the acceptance suite and print only the per-criterion verdict lines."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-s", str(ROOT / "tests" / "test_acceptance.py")],
                          capture_output=True, text=True, cwd=ROOT)
    for line in proc.stdout.splitlines():
        if line.lstrip(".").startswith("[criterion"):
            print(line.lstrip("."))
    sys.exit(proc.returncode)
