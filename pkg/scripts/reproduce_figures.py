"""Regenerate the eight regime CSVs and per-panel SVGs, then summarize peak locations."""

import argparse
import sys
from pathlib import Path

import numpy as np

from chargeq import runner
from chargeq.config import ScenarioConfig


def summarize(out_dir: Path) -> None:
    for csv in sorted(out_dir.glob("*.csv")):
        d = runner.read_csv(csv)
        tau = np.array(d["tau"])
        cc, qc = np.array(d["Cc"]), np.array(d["Qc"])
        print(f"{csv.stem:14s} max Cc {cc.max():.4f} at {tau[cc.argmax()]:6.2f}   "
              f"max Qc {qc.max():.4f} at {tau[qc.argmax()]:6.2f}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="paper_figs", type=Path)
    ap.add_argument("--steps", type=int, default=251)
    args = ap.parse_args()
    code, _ = runner.figures(args.out_dir, ScenarioConfig(steps=args.steps))
    summarize(args.out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
