"""Run the acceptance suite and print its PASS/FAIL lines."""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    r = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                        str(ROOT / "tests" / "test_acceptance.py")],
                       cwd=ROOT, capture_output=True, text=True)
    lines = [x for x in r.stdout.splitlines() if x.startswith("[C")]
    print("\n".join(lines))
    print(r.stdout.splitlines()[-1] if r.stdout else r.stderr)
    sys.exit(r.returncode)
