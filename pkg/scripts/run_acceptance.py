"""Run the acceptance suite and print only the verdict lines.

    python3 scripts/run_acceptance.py [extra pytest args]

Exits with pytest's status, so a red criterion gives a nonzero exit.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-s", *argv]
    proc = subprocess.run(cmd, cwd=ROOT, capture_output=True, text=True)
    lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("ACCEPTANCE")]
    print("\n".join(lines) if lines else proc.stdout + proc.stderr)
    summary = [ln for ln in proc.stdout.splitlines() if " passed" in ln or " failed" in ln]
    if summary:
        print(summary[-1])
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
