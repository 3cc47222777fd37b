#!/usr/bin/env python3
"""
Generate demo assets under docs/demo/:
- sweep_green_constant_beta.csv, sweep_green_constant_alpha.csv
- sweep_ml_z.csv, sweep_mwright_tau.csv
- sweep_potential_alpha.csv
- sample_ggbm.csv (one 2-d path, seed 7)
- verify_specfun.json
"""
from pathlib import Path

# Make src importable when run from repo root
import sys
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.cli import cli
from src.pipeline.digest import sha256_file

DEMO_DIR = ROOT / "docs" / "demo"
DEMO_DIR.mkdir(parents=True, exist_ok=True)

SWEEPS = [
    ("sweep_green_constant_beta.csv", ["green-constant", "--param", "beta", "--start", "0.1", "--stop", "1", "--num", "19"]),
    ("sweep_green_constant_alpha.csv", ["green-constant", "--param", "alpha", "--start", "1.05", "--stop", "2", "--num", "20"]),
    ("sweep_ml_z.csv", ["ml", "--param", "z", "--start", "-10", "--stop", "0", "--num", "41"]),
    ("sweep_mwright_tau.csv", ["mwright", "--param", "tau", "--start", "0", "--stop", "5", "--num", "41"]),
    ("sweep_potential_alpha.csv", ["potential", "--param", "alpha", "--start", "1.1", "--stop", "2", "--num", "10"]),
]


def run(args):
    cli.main(args, standalone_mode=False)


def main():
    written = []
    for name, args in SWEEPS:
        run(["sweep", *args, "--out", str(DEMO_DIR / name)])
        written.append(name)

    run(["sample", "ggbm", "--dim", "2", "--steps", "1024", "--seed", "7", "--out", str(DEMO_DIR / "sample_ggbm.csv")])
    written.append("sample_ggbm.csv")

    try:
        run(["verify", "specfun", "--out", str(DEMO_DIR / "verify_specfun.json")])
    except SystemExit as exc:
        if exc.code:
            print("specfun suite reported failures")
    written.append("verify_specfun.json")

    print("Demo assets generated in docs/demo/")
    for f in written:
        print(" -", f, sha256_file(DEMO_DIR / f)[:16])


if __name__ == "__main__":
    main()
