"""Stabilizer weights and ancilla counts of merged codes under both surgery methods."""

from __future__ import annotations

import argparse

from ferroc import surgery as S
from ferroc.cli import load_code


def describe(m: S.MergedCode) -> str:
    parts = [f"method {m.method}", f"ancillas={m.n_ancilla}"]
    for name in ("modified", "measurement", "gauge"):
        ws = [s.weight for s in getattr(m, name)]
        parts.append(f"{name}: {len(ws)} max w={max(ws, default=0)}")
    return ", ".join(parts)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("codes", nargs="*", default=["steane", "color:d=5", "eg:m=2,q=4"])
    ap.add_argument("--partner", default="color:d=5", help="code B of every merge")
    args = ap.parse_args()
    b = load_code(args.partner)
    for spec in args.codes:
        a = load_code(spec)
        print(f"{a.name} + {b.name} (logical weights {int(a.logicals[0].sum()) if a.logicals else '-'}"
              f" and {int(b.logicals[0].sum())})")
        for merge in (lambda: S.method1_merge(a, 0, b), lambda: S.method2_merge(a, 0, b, 0)):
            try:
                m = merge()
            except ValueError as exc:
                print(f"  skipped: {exc}")
                continue
            ok = S.verify_merged(m).ok
            print(f"  {describe(m)}, valid={ok}")


if __name__ == "__main__":
    main()
