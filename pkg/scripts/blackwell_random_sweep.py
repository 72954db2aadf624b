#!/usr/bin/env python3
"""Stress the Blackwell policy solver on random MDPs.

For each random MDP the script computes the Blackwell-optimal pure
stationary policy and checks, symbolically, that it dominates every
pure stationary rival in the discount order near 1; it also samples the
discounted values at a few rational factors as an independent cross
check.  Prints a summary line per batch and exits nonzero on any
violation.
"""

import argparse
import random
import sys
import time
from fractions import Fraction

from chargemdp.blackwell import (blackwell_policy, discounted_value,
                                 discounted_value_at, sign_near_one)
from chargemdp.mdp import enumerate_pure_stationary, random_mdp


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--states", type=int, default=3)
    parser.add_argument("--actions", type=int, default=2)
    parser.add_argument("--seed", type=int, default=20260823)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    betas = [1 - Fraction(1, 10 ** k) for k in range(2, 7)]
    violations = 0
    comparisons = 0
    t0 = time.perf_counter()
    for _ in range(args.count):
        m = random_mdp(rng, n_states=args.states, n_actions=args.actions)
        pi = blackwell_policy(m)
        v = discounted_value(m, pi)
        for other in enumerate_pure_stationary(m):
            w = discounted_value(m, other)
            for s in m.states:
                comparisons += 1
                if sign_near_one(v[s] - w[s]) < 0:
                    violations += 1
                    print(f"violation: state {s} of {m}")
        # spot check the symbolic solution against the numeric solver
        beta = rng.choice(betas)
        num = discounted_value_at(m, pi, beta)
        for s in m.states:
            if v[s].evaluate(beta) != num[s]:
                violations += 1
                print(f"symbolic/numeric mismatch at {beta} for state {s}")
    wall = time.perf_counter() - t0
    print(f"{args.count} MDPs ({args.states} states x {args.actions} actions), "
          f"{comparisons} dominance comparisons, {violations} violations, "
          f"{wall:.1f}s")
    return 0 if violations == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
