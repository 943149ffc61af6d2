"""Run every bundled config through the CLI and summarise exit codes.

    python3 scripts/run_bundled.py [--out runs] [--threads 1]
"""

import argparse
import time
from pathlib import Path

from randzono.cli import main

ROOT = Path(__file__).resolve().parents[1]

# bundled config -> (subcommand, expected exit code)
RUNS = {
    "exact.json": ("exact", 0),
    "theorem1_discrete.json": ("theorem1", 0),
    "theorem1_gaussian_j1.json": ("theorem1", 0),
    "theorem1_vitale.json": ("theorem1", 0),
    "clt_gaussian_d2_j1.json": ("clt", 0),
    "clt_discrete_j1.json": ("clt", 0),
    "clt_single_atom.json": ("clt", 3),
    "zonoid_gaussian_d2.json": ("zonoid", 0),
    "zonoid_discrete.json": ("zonoid", 0),
}


def run_all(out: Path, threads: int) -> bool:
    ok = True
    for name, (command, expected) in RUNS.items():
        target = out / Path(name).stem
        print(f"== {command} {name}")
        start = time.perf_counter()
        code = main([command, "--config", str(ROOT / "configs" / name), "--out", str(target), "--threads", str(threads)])
        elapsed = time.perf_counter() - start
        status = "ok" if code == expected else "UNEXPECTED"
        print(f"   exit {code} (expected {expected}) in {elapsed:.1f} s: {status}")
        ok = ok and code == expected
    return ok


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("runs"))
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()
    raise SystemExit(0 if run_all(args.out, args.threads) else 1)
