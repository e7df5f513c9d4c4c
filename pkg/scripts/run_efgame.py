#!/usr/bin/env python3
"""Duplicator-agent survival on independent random graph pairs.

Plays the strategy-tree Duplicator for N rounds of the k-pebble game on
independent G(n, n^-1/2) pairs against random and greedy Spoilers and
reports survival frequency plus a breakdown of resignations by reason
code.
"""

import argparse
import json
import sys
from pathlib import Path

from zolab.cli import main as zolab_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results/efgame")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--rounds", type=int, default=3)
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    plan = {
        "id": "efgame-survival",
        "target": "ef-game",
        "nGrid": [],
        "trials": args.trials,
        "seed": args.seed,
        "alpha": "1/2",
        "params": {
            "nRange": [300, 600],
            "mRange": [300, 600],
            "k": 3,
            "N": args.rounds,
            "spoilers": ["random", "greedy"],
        },
    }
    plan_path = outdir / "plan.json"
    plan_path.write_text(json.dumps(plan, indent=2))
    return zolab_main(
        [
            "exp", "efgame",
            "--plan", str(plan_path),
            "--csv", str(outdir / "estimates.csv"),
            "--json", str(outdir / "report.json"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
