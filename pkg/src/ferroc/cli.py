"""Command-line front end.

Every subcommand writes its outputs under ``--out-dir`` together with a JSON
run manifest (``<command>.manifest.json``) holding the argument vector, the
resolved configuration, input and output sha256 digests, the tool version
and wall-clock time. ``ferroc replay`` reruns a manifest into a scratch
directory and compares digests.

Exit codes: 0 success, 1 validation or replay failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, f2
from .codes import FermionCode, build, validate
from .decoder import DecoderConfig, FermionDecoder
from .logicals import attach_logicals

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _json_dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------------ code I/O


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def code_sidecar(code: FermionCode) -> dict:
    tag = {k: v for k, v in code.family_tag.items() if k != "search"}
    return {
        "n": code.n,
        "k_q": code.k_q,
        "k_f": code.k_f,
        "family_tag": tag,
        "distance_hint": code.distance_hint,
        "logicals": [[int(i) for i in np.flatnonzero(v)] for v in code.logicals],
    }


def write_code(code: FermionCode, path: Path) -> list[Path]:
    path.write_text(f2.dumps_f2m(code.A))
    side = _sidecar_path(path)
    _json_dump(code_sidecar(code), side)
    return [path, side]


def load_code(spec: str, extract: bool = True) -> FermionCode:
    """A code from an f2m file (logicals from its sidecar if present) or a family spec.

    Family specs look like ``eg:m=2,q=4`` or ``steane``.
    """
    path = Path(spec)
    if path.exists():
        A = f2.loads_f2m(path.read_text())
        side = _sidecar_path(path)
        if side.exists():
            meta = json.loads(side.read_text())
            logs = [f2.as_matrix([s], cols=A.shape[1])[0] for s in meta.get("logicals", [])]
            tag = dict(meta.get("family_tag", {}))
            tag.setdefault("name", path.stem)
            return FermionCode(A, logicals=logs, distance_hint=meta.get("distance_hint"), family_tag=tag)
        code = FermionCode(A, family_tag={"name": path.stem})
        return attach_logicals(code) if extract else code
    family, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        k, _, v = item.partition("=")
        params[k.strip().replace("-", "_")] = v.strip()
    try:
        return build(family, **params)
    except (KeyError, ValueError) as e:
        raise UsageError(f"cannot build code from {spec!r}: {e}") from None


# ------------------------------------------------------------------ commands


def _out(args, name: str) -> Path:
    p = Path(name)
    return p if p.is_absolute() else Path(args.out_dir) / p


def cmd_build(args) -> tuple[int, list[Path], dict]:
    params = {}
    for k in ("m", "q", "d", "half_n"):
        if getattr(args, k) is not None:
            params[k] = getattr(args, k)
    if args.shifts:
        params["shifts"] = [int(s) for s in args.shifts.split(",")]
    try:
        code = build(args.family, **params)
    except KeyError as e:
        raise UsageError(f"family {args.family!r} needs parameter {e}") from None
    outs = write_code(code, _out(args, args.out))
    print(f"{code.name}: n={code.n} k_q={code.k_q} k_f={code.k_f}")
    return EXIT_OK, outs, {"family": args.family, "params": params}


def cmd_logicals(args):
    code = load_code(args.code)
    items = [{"index": j, "support": [int(i) for i in np.flatnonzero(v)], "weight": int(v.sum())}
             for j, v in enumerate(code.logicals)]
    out = _out(args, args.out)
    _json_dump({"n": code.n, "k_q": code.k_q, "k_f": code.k_f, "logicals": items}, out)
    print(f"k_f={code.k_f} weights={[it['weight'] for it in items]}")
    return EXIT_OK, [out], {}


def cmd_validate(args):
    try:
        code = load_code(args.code, extract=False)
    except ValueError as e:
        print(f"invalid: {e}")
        return EXIT_FAIL, [], {}
    rep = validate(code)
    if rep.ok and not code.logicals:
        rep = validate(attach_logicals(code))
    out = _out(args, args.out)
    _json_dump(rep.to_dict(), out)
    if rep.ok:
        print(f"ok: n={rep.n} k_q={rep.k_q} k_f={rep.k_f}")
        return EXIT_OK, [out], {}
    for v in rep.violations:
        print(f"violation: {v}")
    return EXIT_FAIL, [out], {}


def cmd_surgery(args):
    from .surgery import method1_merge, method2_merge, verify_merged

    a, b = load_code(args.codeA), load_code(args.codeB)
    if args.method == 1:
        m = method1_merge(a, args.logicalA, b)
    else:
        m = method2_merge(a, args.logicalA, b, args.logicalB)
    out = _out(args, args.out)
    doc = m.to_dict()
    doc["report"] = verify_merged(m).to_dict()
    _json_dump(doc, out)
    print(f"merged: {m.n_modes} modes, {m.n_ancilla} ancillas, {len(m.stabilizers())} stabilizers")
    return EXIT_OK, [out], {"method": args.method}


def cmd_surgery_verify(args):
    from .surgery import MergedCode, verify_merged

    try:
        m = MergedCode.from_dict(json.loads(Path(args.merged).read_text()))
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"invalid: {e}")
        return EXIT_FAIL, [], {}
    rep = verify_merged(m)
    out = _out(args, args.out)
    _json_dump(rep.to_dict(), out)
    print(json.dumps(rep.to_dict()))
    return (EXIT_OK if rep.ok else EXIT_FAIL), [out], {}


def _read_syndrome(path: str, m: int) -> tuple[np.ndarray, np.ndarray]:
    bits = [int(t) for t in Path(path).read_text().replace(",", " ").split()]
    if any(b not in (0, 1) for b in bits):
        raise UsageError("syndrome entries must be 0 or 1")
    if len(bits) == m:
        return np.array(bits, dtype=np.uint8), np.zeros(m, dtype=np.uint8)
    if len(bits) == 2 * m:
        return np.array(bits[:m], dtype=np.uint8), np.array(bits[m:], dtype=np.uint8)
    raise UsageError(f"syndrome must have {m} or {2 * m} bits, got {len(bits)}")


def cmd_decode(args):
    code = load_code(args.code)
    sg, sgp = _read_syndrome(args.syndrome, code.A.shape[0])
    cfg = DecoderConfig(osd_order=args.osd_order, bp_iters=args.bp_iters, bp_schedule=args.schedule)
    eg, egp = FermionDecoder(code.A, args.p, cfg).decode(sg, sgp)
    out = _out(args, args.out)
    _json_dump({"gamma": [int(i) for i in np.flatnonzero(eg)],
                "gamma_prime": [int(i) for i in np.flatnonzero(egp)]}, out)
    print(f"gamma: {np.flatnonzero(eg).tolist()} gamma_prime: {np.flatnonzero(egp).tolist()}")
    return EXIT_OK, [out], {"decoder": asdict(cfg)}


def cmd_bench_memory(args):
    from .experiments import BenchmarkConfig, memory_benchmark

    code = load_code(args.code)
    try:
        grid = [float(x) for x in args.p_grid.split(",")]
    except ValueError:
        raise UsageError("--p-grid must be a comma-separated list of numbers") from None
    cfg = BenchmarkConfig(n_c=args.nc, n_sample=args.samples, n_group=args.groups, seed=args.seed,
                          threads=args.threads, full_scale=args.full_scale,
                          decoder=DecoderConfig(osd_order=args.osd_order))
    res = memory_benchmark(code, grid, cfg)
    csv, js = _out(args, args.out), _out(args, args.out + ".json")
    csv.write_text(res.csv())
    _json_dump(res.to_dict(), js)
    sys.stdout.write(res.csv())
    return EXIT_OK, [csv, js], res.params


def cmd_dynamics(args):
    from .experiments import dynamics_run

    res = dynamics_run(steps=args.steps, p=args.p, with_correction=args.correct == "on", seed=args.seed,
                       shots=args.shots, threads=args.threads)
    csv, js = _out(args, args.out), _out(args, args.out + ".json")
    csv.write_text(res.csv())
    cfg = dict(res.config)
    cfg.pop("threads", None)
    doc = res.to_dict()
    doc["config"] = cfg
    _json_dump(doc, js)
    sys.stdout.write(res.csv())
    return EXIT_OK, [csv, js], cfg


def cmd_replay(args):
    man = json.loads(Path(args.manifest).read_text())
    for path, digest in man.get("inputs", {}).items():
        if not Path(path).exists() or sha256_file(path) != digest:
            print(f"input changed or missing: {path}")
            return EXIT_FAIL, [], {}
    with tempfile.TemporaryDirectory() as tmp:
        argv = ["--out-dir", tmp] + man["argv"]
        code = _run(argv, write_manifest=False)
        if code != man["exit_code"]:
            print(f"exit code {code} != recorded {man['exit_code']}")
            return EXIT_FAIL, [], {}
        bad = []
        for name, digest in man["outputs"].items():
            p = Path(tmp) / name
            if not p.exists() or sha256_file(p) != digest:
                bad.append(name)
    for name in man["outputs"]:
        print(f"{'MISMATCH' if name in bad else 'match'} {name}")
    return (EXIT_FAIL if bad else EXIT_OK), [], {}


# ------------------------------------------------------------------ parser


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ferroc", description="Fermionic LDPC code toolkit.")
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ap.add_argument("--threads", type=int, default=1, help="worker processes (FERROC_THREADS overrides)")
    ap.add_argument("--out-dir", default=".", help="directory for outputs and the run manifest")
    ap.add_argument("--version", action="version", version=f"ferroc {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("build", help="construct a code and write f2m plus a JSON sidecar")
    p.add_argument("--family", required=True, choices=["steane", "bicycle", "eg", "pg", "color", "kitaev"])
    p.add_argument("--m", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--half-n", dest="half_n", type=int)
    p.add_argument("--shifts", help="comma-separated circulant shifts for bicycle codes")
    p.add_argument("--out", default="code.f2m")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("logicals", help="list odd-weight logical supports")
    p.add_argument("--code", required=True)
    p.add_argument("--out", default="logicals.json")
    p.set_defaults(func=cmd_logicals)

    p = sub.add_parser("validate", help="check self-duality and logical consistency")
    p.add_argument("--code", required=True)
    p.add_argument("--out", default="validation.json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("surgery", help="build a merged code for a joint logical measurement")
    p.add_argument("--codeA", required=True)
    p.add_argument("--logicalA", type=int, default=0)
    p.add_argument("--codeB", required=True)
    p.add_argument("--logicalB", type=int, default=0)
    p.add_argument("--method", type=int, choices=[1, 2], default=2)
    p.add_argument("--out", default="merged.json")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("surgery-verify", help="verify a merged code document")
    p.add_argument("merged")
    p.add_argument("--out", default="merged-report.json")
    p.set_defaults(func=cmd_surgery_verify)

    p = sub.add_parser("decode", help="BP+OSD decode a syndrome")
    p.add_argument("--code", required=True)
    p.add_argument("--syndrome", required=True, help="file of m (gamma only) or 2m bits")
    p.add_argument("--p", type=float, default=0.005)
    p.add_argument("--osd-order", type=int, default=7)
    p.add_argument("--bp-iters", type=int, default=50)
    p.add_argument("--schedule", choices=["serial", "parallel"], default="serial")
    p.add_argument("--out", default="correction.json")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("bench-memory", help="memory benchmark; CSV p,P_L,p_L,stderr")
    p.add_argument("--code", required=True, help="f2m path or family spec such as eg:m=2,q=4")
    p.add_argument("--p-grid", default="0.003,0.004,0.0055,0.0074,0.01")
    p.add_argument("--nc", type=int, default=10)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--groups", type=int, default=5)
    p.add_argument("--osd-order", type=int, default=7)
    p.add_argument("--full-scale", action="store_true", help="10^4 samples below p = 0.01 and 20 groups")
    p.add_argument("--out", default="memory.csv")
    p.set_defaults(func=cmd_bench_memory)

    p = sub.add_parser("dynamics", help="feedback dynamics; CSV step,n1,n2,n3,n4")
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--p", type=float, default=0.005)
    p.add_argument("--correct", choices=["on", "off"], default="on")
    p.add_argument("--shots", type=int, default=200)
    p.add_argument("--out", default="dynamics.csv")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("replay", help="rerun a manifest and compare output digests")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return ap


def _input_paths(args) -> list[str]:
    out = []
    for k in ("code", "codeA", "codeB", "syndrome", "merged"):
        v = getattr(args, k, None)
        if v and Path(v).exists():
            out.append(v)
            side = _sidecar_path(Path(v))
            if side.exists():
                out.append(str(side))
    return out


def _strip_global(argv: list[str], inputs: list[str]) -> list[str]:
    """The argument vector without --out-dir and with absolute input paths."""
    absolute = {p: str(Path(p).resolve()) for p in inputs}
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out-dir":
            skip = True
            continue
        if tok.startswith("--out-dir="):
            continue
        out.append(absolute.get(tok, tok))
    return out


def _run(argv: list[str], write_manifest: bool = True) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
        if args.command is None:
            ap.print_help(sys.stderr)
            return EXIT_USAGE
        env = os.environ.get("FERROC_THREADS")
        if env:
            try:
                args.threads = int(env)
            except ValueError:
                raise UsageError("FERROC_THREADS must be an integer") from None
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        t0 = time.time()
        code, outs, config = args.func(args)
    except UsageError as e:
        print(f"ferroc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, ValueError) as e:
        print(f"ferroc: error: {e}", file=sys.stderr)
        return EXIT_FAIL
    if write_manifest and args.command != "replay":
        root = Path(args.out_dir)
        inputs = _input_paths(args)
        man = {
            "command": args.command,
            "argv": _strip_global(argv, inputs),
            "config": {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out_dir")} | config,
            "seed": args.seed,
            "code_hashes": {p: sha256_file(p) for p in inputs if p.endswith(".f2m")},
            "inputs": {str(Path(p).resolve()): sha256_file(p) for p in inputs},
            "version": __version__,
            "wall_clock_s": round(time.time() - t0, 3),
            "exit_code": code,
            "outputs": {str(p.relative_to(root)) if p.is_relative_to(root) else str(p): sha256_file(p)
                        for p in outs},
        }
        _json_dump(man, root / f"{args.command}.manifest.json")
    return code


def main(argv: list[str] | None = None) -> int:
    return _run(list(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
