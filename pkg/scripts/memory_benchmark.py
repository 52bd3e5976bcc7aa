"""Memory benchmark: logical failure rate per cycle versus physical error rate.

Examples:
    python3 scripts/memory_benchmark.py --code eg:m=2,q=4
    python3 scripts/memory_benchmark.py --code bicycle --full-scale --threads 8
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from ferroc import experiments as E
from ferroc.cli import load_code


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="eg:m=2,q=4", help="family spec or .f2m path")
    ap.add_argument("--p-min", type=float, default=3e-3)
    ap.add_argument("--p-max", type=float, default=1e-2)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--groups", type=int, default=5)
    ap.add_argument("--cycles", type=int, default=10)
    ap.add_argument("--check", choices=("class", "state"), default="class")
    ap.add_argument("--final-decode", action="store_true")
    ap.add_argument("--full-scale", action="store_true", help="10^4 samples below p = 0.01, 20 groups")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None, help="CSV destination (a .json sidecar is added)")
    args = ap.parse_args()

    code = load_code(args.code)
    grid = np.geomspace(args.p_min, args.p_max, args.points)
    cfg = E.BenchmarkConfig(n_c=args.cycles, n_sample=args.samples, n_group=args.groups, seed=args.seed,
                            threads=args.threads, check=args.check, final_decode=args.final_decode,
                            full_scale=args.full_scale)
    res = E.memory_benchmark(code, grid, cfg)
    print(f"{code.name}: n={code.n} k_f={code.k_f}")
    print(res.csv(), end="")
    P = E.unencoded_failure(res.p, code.k_f)
    for p, pl, u in zip(res.p, res.p_L, P):
        print(f"p={p:.4g}  p_L={pl:.3e}  P(p,k)={u:.3e}")
    try:
        print(f"alpha = {E.fit_exponent(res.p, res.p_L):.3f}")
    except ValueError as exc:
        print(f"alpha: {exc}")
    try:
        print(f"pseudo-threshold = {E.pseudo_threshold(res, code.k_f):.4g}")
    except ValueError as exc:
        print(f"pseudo-threshold: {exc}")
    if args.out:
        args.out.write_text(res.csv())
        args.out.with_suffix(args.out.suffix + ".json").write_text(json.dumps(res.to_dict(), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
