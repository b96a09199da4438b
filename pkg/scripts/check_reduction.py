"""Compare the reduced LP, the dense LP and the dual on random profiles.

    python3 scripts/check_reduction.py --count 500 --seed 1
"""

import argparse
import random
import time

from drcr.model import ProblemSpec
from drcr.skirental import build_dense_oracle, build_dual, build_primal, objective_value


def random_profile(rng: random.Random, max_B: int, max_n: int) -> ProblemSpec:
    B = rng.randint(2, max_B)
    n = rng.randint(1, max_n)
    lo = rng.randint(1, 2 * B)
    hi = rng.randint(lo, 2 * B + 3)
    intervals = [(lo, hi)]
    for _ in range(n - 1):
        lo = rng.randint(max(1, lo - B), lo)
        hi = rng.randint(hi, hi + B)
        intervals.append((lo, hi))
    deltas = sorted((rng.random() for _ in range(n)), reverse=True)
    return ProblemSpec.build(B, intervals, deltas)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-B", type=int, default=12)
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    gap_dense = gap_dual = 0.0
    worst = None
    for _ in range(args.count):
        spec = random_profile(rng, args.max_B, args.max_n)
        p = objective_value(build_primal(spec))
        d = abs(p - objective_value(build_dense_oracle(spec)))
        gap_dual = max(gap_dual, abs(p - objective_value(build_dual(spec))))
        if d > gap_dense:
            gap_dense, worst = d, spec
    print(f"{args.count} profiles in {time.perf_counter() - t0:.2f}s")
    print(f"max |reduced - dense| = {gap_dense:.3e}")
    print(f"max |primal - dual|   = {gap_dual:.3e}")
    if worst is not None and gap_dense > 1e-7:
        print("worst profile:", worst.to_json())


if __name__ == "__main__":
    main()
