"""Matching success probability against the Schmidt weight of a shared qubit pair.

For alpha = (sqrt(w), sqrt(1 - w)) the matching outcome succeeds with
p = w (1 - w); each row checks that value against the engine and the oracle.

    python scripts/probability_scan.py --steps 19 --csv scan.csv
"""

import argparse
import csv
import sys

import numpy as np

from entmatch.antilinear import AntilinearOp, measurement_state_from_op, state_from_op
from entmatch.linalg import random_pure_state
from entmatch.matching import matching_outcome, success_probability
from entmatch.oracle import simulate_outcome
from entmatch.teleport import outcome_probability


def scan(steps: int, seed: int) -> list[dict]:
    rows = []
    for k, w in enumerate(np.linspace(0, 1, steps + 2)[1:-1]):
        shared = AntilinearOp(np.diag([np.sqrt(w), np.sqrt(1 - w)]))
        res = matching_outcome(shared)
        phi = random_pure_state(2, seed + k)
        oracle = simulate_outcome(state_from_op(shared), measurement_state_from_op(res.outcome), phi)
        rows.append(
            {
                "weight": float(w),
                "closed_form": float(w * (1 - w)),
                "success_probability": success_probability(shared),
                "engine": outcome_probability(shared, res.outcome, phi),
                "oracle": oracle.probability,
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=19)
    ap.add_argument("--seed", type=int, default=20011019)
    ap.add_argument("--csv", help="write rows to this file instead of stdout")
    args = ap.parse_args()

    rows = scan(args.steps, args.seed)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    writer = csv.DictWriter(out, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if args.csv:
        out.close()
    worst = max(abs(r[key] - r["closed_form"]) for r in rows for key in ("success_probability", "engine", "oracle"))
    print(f"max deviation from w(1-w): {worst:.2e}", file=sys.stderr)


if __name__ == "__main__":
    main()
