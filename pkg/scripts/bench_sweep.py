"""Parameter sweep over (n, k) producing a bench CSV.

Writes a manifest of rows, runs the CLI bench machinery over it, and prints
the resulting table. Output lands in bench_out/.

Usage: python scripts/bench_sweep.py [out_dir]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tempex.cli import main as cli_main


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("bench_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        {"n": n, "k": k, "delta": n - 1, "seed": 7 * n + k}
        for n in (10, 20, 40, 80)
        for k in (1, 2)
    ]
    manifest = out_dir / "sweep.json"
    manifest.write_text(json.dumps(rows, indent=2) + "\n")
    csv_path = out_dir / "sweep.csv"
    code = cli_main(["bench", "--manifest", str(manifest), "--out", str(csv_path)])
    if code != 0:
        return code
    print(csv_path.read_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
