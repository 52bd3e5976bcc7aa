"""Feedback dynamics on four memory sites: mean occupations per module.

Example:
    python3 scripts/dynamics.py --steps 6 --p 0.005 --shots 200 --threads 8
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ferroc import experiments as E


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=6)
    ap.add_argument("--p", type=float, default=0.005)
    ap.add_argument("--shots", type=int, default=200)
    ap.add_argument("--no-correction", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    print("noiseless reference:")
    for t, row in enumerate(E.skin_pattern(args.steps)):
        print(t, row)
    res = E.dynamics_run(steps=args.steps, p=args.p, with_correction=not args.no_correction, seed=args.seed,
                         shots=args.shots, threads=args.threads)
    print(res.csv(), end="")
    if args.out:
        args.out.write_text(res.csv())


if __name__ == "__main__":
    main()
