"""Survey of linearity and reversibility over random (shared, outcome) pairs.

Random pairs almost never give an input-independent outcome probability;
matching pairs always do.  The spectral test is compared with sampled
probability spreads on every pair.

    python scripts/linearity_survey.py --pairs 300 --dim 3
"""

import argparse
from collections import Counter

from entmatch.antilinear import AntilinearOp
from entmatch.linalg import random_unitary, random_vector
from entmatch.matching import matching_outcome
from entmatch.teleport import channel_linearity, probability_spread


def random_op(n: int, seed: int) -> AntilinearOp:
    return AntilinearOp(random_vector(n * n, seed).reshape(n, n))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=20011019)
    args = ap.parse_args()

    n = args.dim
    tally = Counter()
    disagreements = 0
    for k in range(args.pairs):
        s = args.seed + 3 * k
        shared = random_op(n, s)
        for label, outcome in (
            ("random", random_op(n, s + 1)),
            ("matching", matching_outcome(shared, random_unitary(n, s + 2)).outcome),
        ):
            linear, reversible = channel_linearity(shared, outcome)
            lo, hi = probability_spread(shared, outcome, args.samples, s)
            disagreements += linear != (hi - lo <= 1e-10)
            tally[label, linear, reversible] += 1

    print(f"{'pairs':>10} {'linear':>7} {'reversible':>11} {'count':>6}")
    for (label, linear, reversible), count in sorted(tally.items()):
        print(f"{label:>10} {linear!s:>7} {reversible!s:>11} {count:>6}")
    print(f"spectral vs sampled disagreements: {disagreements}")


if __name__ == "__main__":
    main()
