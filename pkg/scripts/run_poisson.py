#!/usr/bin/env python3
"""Triangle-count distribution against its Poisson limit.

Samples G(n, p) at the critical scaling p = n^(-1) and compares the
empirical triangle-count distribution with Poisson(1/6).  Writes the CSV,
the JSON report, and a run manifest into the output directory.
"""

import argparse
import json
import sys
from pathlib import Path

from zolab.cli import main as zolab_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results/poisson")
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    plan = {
        "id": "poisson-k3",
        "target": "poisson",
        "nGrid": [args.n],
        "trials": args.trials,
        "seed": args.seed,
        "params": {"patternName": "K3", "c": "1"},
    }
    plan_path = outdir / "plan.json"
    plan_path.write_text(json.dumps(plan, indent=2))
    return zolab_main(
        [
            "exp", "poisson",
            "--plan", str(plan_path),
            "--csv", str(outdir / "estimates.csv"),
            "--json", str(outdir / "report.json"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
