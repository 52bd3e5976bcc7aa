"""Random search for circulant bicycle codes with a target logical count.

Reproduces the pinned [[100, 20]] shifts with the defaults.
"""

from __future__ import annotations

import argparse

from ferroc import codes
from ferroc.distance import random_logical_upper_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--half-n", type=int, default=50)
    ap.add_argument("--row-weight", type=int, default=8)
    ap.add_argument("--k", type=int, default=20)
    ap.add_argument("--seed", type=int, default=codes.BICYCLE_SEED)
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--distance-trials", type=int, default=200)
    args = ap.parse_args()

    code = codes.bicycle_search(args.half_n, args.row_weight, args.k, seed=args.seed, budget=args.budget,
                                distance_trials=args.distance_trials)
    if code is None:
        print("no code reached the target")
        return
    shifts = code.family_tag["shifts"]
    print(f"n={code.n} k_q={code.k_q} k_f={code.k_f} shifts={shifts} distance <= {code.distance_hint}")
    print(f"longer random bound: {random_logical_upper_bound(code, 20 * args.distance_trials, seed=args.seed)}")


if __name__ == "__main__":
    main()
