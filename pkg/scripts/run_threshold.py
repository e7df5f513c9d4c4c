#!/usr/bin/env python3
"""Appearance threshold sweep for the triangle.

Measures containment frequency of K3 in G(n, n^-alpha) on both sides of
the threshold alpha = 1: absent at alpha = 13/10, present at alpha = 7/10.
"""

import argparse
import json
import sys
from pathlib import Path

from zolab.cli import main as zolab_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results/threshold")
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    plan = {
        "id": "threshold-k3",
        "target": "threshold",
        "nGrid": [args.n],
        "trials": args.trials,
        "seed": args.seed,
        "params": {"patternName": "K3", "exponents": ["13/10", "7/10"]},
    }
    plan_path = outdir / "plan.json"
    plan_path.write_text(json.dumps(plan, indent=2))
    return zolab_main(
        [
            "exp", "threshold",
            "--plan", str(plan_path),
            "--csv", str(outdir / "estimates.csv"),
            "--json", str(outdir / "report.json"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
