"""Numerical experiments: memory benchmark, teleportation, feedback dynamics.

The memory benchmark tracks an error frame (two binary sector vectors) and
never builds a state: every operation in a memory cycle is a Majorana
string, so the frame alone decides whether the logical state survived. The
teleportation and dynamics drivers run on the full stabilizer tableau.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import f2
from .codes import FermionCode, direct_sum, eg_code, steane
from .decoder import DecoderConfig, FermionDecoder
from .majorana import MajoranaString, interleave
from .sim import Tableau, embed, init_product_state, logical_pair, logical_parity
from .surgery import MergedCode, joint_measure, method2_merge

# ------------------------------------------------------------------ noise


@dataclass(frozen=True)
class NoiseModel:
    """Single-site channel: gamma, gamma' or i gamma gamma', each with probability p/3.

    Attributes:
        p: Per-site error probability.
        post_gate_noise: Also apply the channel to every site touched by a
            correction.
    """

    p: float
    post_gate_noise: bool = True

    def __post_init__(self):
        if not 0.0 <= self.p < 0.75:
            raise ValueError("p must lie in [0, 0.75)")

    def sample(self, n: int, rng) -> tuple[np.ndarray, np.ndarray]:
        """Sector vectors (gamma part, gamma' part) of one channel layer on n sites."""
        hit = rng.random(n) < self.p
        kind = rng.integers(0, 3, size=n)
        # 0: gamma, 1: gamma', 2: i gamma gamma'
        return (hit & (kind != 1)).astype(np.uint8), (hit & (kind != 0)).astype(np.uint8)

    def sample_on(self, sites: np.ndarray, n: int, rng) -> tuple[np.ndarray, np.ndarray]:
        """Channel restricted to the given sites."""
        eg = np.zeros(n, dtype=np.uint8)
        egp = np.zeros(n, dtype=np.uint8)
        if sites.size and self.p > 0:
            a, b = self.sample(sites.size, rng)
            eg[sites], egp[sites] = a, b
        return eg, egp


# ------------------------------------------------------------------ memory


class _RowSpace:
    """Membership test for rowspace(A) via a reduced echelon basis."""

    def __init__(self, A):
        R, piv = f2.rref(A)
        self.R = R[: len(piv)].astype(np.int64)
        self.piv = np.array(piv, dtype=np.int64)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        return bool(np.array_equal((v[self.piv] @ self.R) & 1, v))


def _state_checks(code: FermionCode, which: str) -> np.ndarray:
    """Interleaved supports of the logical generators fixed by an initial state."""
    rows = [g.vector for g in _logical_generators(code, which)]
    for u in code.leftover_even:
        rows.append(interleave(u, np.zeros_like(u)))
        rows.append(interleave(np.zeros_like(u), u))
    return np.array(rows, dtype=np.uint8).reshape(-1, 2 * code.n)


def _logical_generators(code: FermionCode, which: str):
    from .sim import logical_state_generators

    return logical_state_generators(code, which)


def _anticommutes_any(rows: np.ndarray, v: np.ndarray) -> bool:
    if rows.size == 0:
        return False
    ov = (rows.astype(np.int64) @ v.astype(np.int64)) & 1
    par = (rows.sum(axis=1, dtype=np.int64) & 1) * (int(v.sum()) & 1)
    return bool((ov ^ par).any())


@dataclass
class _MemoryContext:
    code: FermionCode
    decoder: FermionDecoder
    rowspace: _RowSpace
    state_rows: dict


def _memory_context(code: FermionCode, p: float, cfg: DecoderConfig | None = None) -> _MemoryContext:
    dec = FermionDecoder(code.A, p, cfg or DecoderConfig())
    rows = {w: _state_checks(code, w) for w in ("vacuum", "plus")}
    return _MemoryContext(code, dec, _RowSpace(code.A), rows)


def memory_trial(code: FermionCode, noise: NoiseModel, N_c: int, rng, context: _MemoryContext | None = None,
                 init: str | None = None, check: str = "class", final_decode: bool = False) -> bool:
    """One memory experiment of N_c noisy cycles with perfect syndromes.

    Each cycle applies the channel to every site, decodes both sectors,
    applies the correction and (if enabled) the channel on the sites the
    correction touched. The residual frame is then judged as it stands, so
    noise injected by the last correction counts; ``final_decode`` adds one
    noiseless decoding round before judging instead.

    Args:
        init: "vacuum" or "plus"; drawn from ``rng`` when None.
        check: "class" declares an error when either residual sector is not
            a stabilizer (not in rowspace(A)) or a logical generator of the
            initial state flipped; "state" only looks at the flipped
            generators, i.e. compares the physical states.

    Returns:
        True when the trial ends in a logical error.
    """
    if not code.logicals:
        raise ValueError("code has no extracted logicals")
    ctx = context or _memory_context(code, noise.p)
    if init is None:
        init = "vacuum" if rng.random() < 0.5 else "plus"
    A = code.A
    n = code.n
    fg = np.zeros(n, dtype=np.uint8)
    fgp = np.zeros(n, dtype=np.uint8)
    for _ in range(N_c):
        eg, egp = noise.sample(n, rng)
        fg ^= eg
        fgp ^= egp
        cg, cgp = ctx.decoder.decode(f2.matmul(A, fg[:, None])[:, 0], f2.matmul(A, fgp[:, None])[:, 0])
        fg ^= cg
        fgp ^= cgp
        if noise.post_gate_noise:
            eg, egp = noise.sample_on(np.flatnonzero(cg | cgp), n, rng)
            fg ^= eg
            fgp ^= egp
    if final_decode:
        sg = f2.matmul(A, fg[:, None])[:, 0]
        sgp = f2.matmul(A, fgp[:, None])[:, 0]
        if sg.any() or sgp.any():
            cg, cgp = ctx.decoder.decode(sg, sgp)
            fg ^= cg
            fgp ^= cgp
    flipped = _anticommutes_any(ctx.state_rows[init], interleave(fg, fgp))
    if check == "state":
        return flipped
    if check != "class":
        raise ValueError(f"unknown check {check!r}")
    return flipped or not (ctx.rowspace.contains(fg) and ctx.rowspace.contains(fgp))


@dataclass(frozen=True)
class BenchmarkConfig:
    """Memory benchmark parameters.

    Attributes:
        n_c: Error-correction cycles per trial.
        n_sample: Trials per group (ignored when ``full_scale``).
        n_group: Independent groups per error rate.
        seed: Master seed; group (i, g) uses the substream spawn key (i, g).
        threads: Worker processes.
        check: Logical-error rule passed to ``memory_trial``.
        final_decode: Passed to ``memory_trial``.
        full_scale: 10^4 trials below p = 0.01 and 2000 above, 20 groups.
        decoder: BP+OSD settings (the prior is set from p).
    """

    n_c: int = 10
    n_sample: int = 2000
    n_group: int = 5
    seed: int = 0
    threads: int = 1
    check: str = "class"
    final_decode: bool = False
    full_scale: bool = False
    decoder: DecoderConfig = field(default_factory=DecoderConfig)

    def samples_for(self, p: float) -> int:
        if self.full_scale:
            return 10_000 if p < 0.01 else 2000
        return self.n_sample

    def groups(self) -> int:
        return 20 if self.full_scale else self.n_group


@dataclass
class BenchmarkResult:
    """Per-error-rate aggregates of a memory benchmark.

    ``P_L`` is the mean group failure probability after N_c cycles and
    ``p_L = 1 - (1 - P_L)^(1/N_c)``; ``stderr`` is the standard error of the
    group-wise p_L values and ``std`` their standard deviation.
    """

    code: str
    p: np.ndarray
    P_L: np.ndarray
    p_L: np.ndarray
    stderr: np.ndarray
    std: np.ndarray
    errors: np.ndarray  # (n_p, n_group) error counts
    samples: np.ndarray  # trials per group for each p
    params: dict

    def csv(self) -> str:
        lines = ["p,P_L,p_L,stderr"]
        for row in zip(self.p, self.P_L, self.p_L, self.stderr):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "p": self.p.tolist(),
            "P_L": self.P_L.tolist(),
            "p_L": self.p_L.tolist(),
            "stderr": self.stderr.tolist(),
            "std": self.std.tolist(),
            "errors": self.errors.tolist(),
            "samples": self.samples.tolist(),
            "params": self.params,
        }


def per_cycle_rate(P_L, N_c: int):
    return 1.0 - (1.0 - np.asarray(P_L, dtype=float)) ** (1.0 / N_c)


def total_rate(p_L, N_c: int):
    """Inverse of ``per_cycle_rate``."""
    return 1.0 - (1.0 - np.asarray(p_L, dtype=float)) ** N_c


def _group_task(args) -> int:
    code, p, n_sample, N_c, seed, key, check, final, dcfg = args
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))
    noise = NoiseModel(p)
    ctx = _memory_context(code, p, dcfg)
    return sum(memory_trial(code, noise, N_c, rng, ctx, check=check, final_decode=final) for _ in range(n_sample))


def memory_benchmark(code: FermionCode, p_list, cfg: BenchmarkConfig | None = None) -> BenchmarkResult:
    """Logical failure rate versus physical error rate.

    Every (error rate, group) pair is an independent task with its own
    random stream, so results do not depend on ``cfg.threads``.
    """
    cfg = cfg or BenchmarkConfig()
    p_arr = np.asarray(list(p_list), dtype=float)
    G = cfg.groups()
    tasks = []
    for i, p in enumerate(p_arr):
        for g in range(G):
            tasks.append((code, float(p), cfg.samples_for(p), cfg.n_c, cfg.seed, (i, g), cfg.check,
                          cfg.final_decode, cfg.decoder))
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            counts = list(ex.map(_group_task, tasks, chunksize=1))
    else:
        counts = [_group_task(t) for t in tasks]
    errors = np.array(counts, dtype=np.int64).reshape(len(p_arr), G)
    samples = np.array([cfg.samples_for(p) for p in p_arr], dtype=np.int64)
    PL_g = errors / samples[:, None]
    pl_g = per_cycle_rate(PL_g, cfg.n_c)
    P_L = PL_g.mean(axis=1)
    std = pl_g.std(axis=1, ddof=1) if G > 1 else np.zeros(len(p_arr))
    params = {"N_c": cfg.n_c, "N_sample": cfg.n_sample, "N_group": G, "seed": cfg.seed,
              "check": cfg.check, "final_decode": cfg.final_decode, "full_scale": cfg.full_scale, "decoder": asdict(cfg.decoder)}
    return BenchmarkResult(code.name, p_arr, P_L, per_cycle_rate(P_L, cfg.n_c), std / math.sqrt(G), std,
                           errors, samples, params)


def fit_exponent(p, p_L) -> float:
    """Least-squares slope of log p_L against log p (zero rates are dropped)."""
    p = np.asarray(p, dtype=float)
    y = np.asarray(p_L, dtype=float)
    ok = y > 0
    if ok.sum() < 2:
        raise ValueError("need at least two nonzero rates to fit an exponent")
    slope, _ = np.polyfit(np.log(p[ok]), np.log(y[ok]), 1)
    return float(slope)


def unencoded_failure(p, k: int):
    """P(p, k) = 1 - (1 - p)^k: at least one of k bare sites fails."""
    return 1.0 - (1.0 - np.asarray(p, dtype=float)) ** k


def pseudo_threshold(result, k: int) -> float:
    """Error rate where p_L(p) meets P(p, k), by log-log interpolation.

    ``result`` is a BenchmarkResult or a (p, p_L) pair of arrays sorted by p.
    The first bracketing pair of grid points is used.

    Raises:
        ValueError: If p_L - P(p, k) does not change sign on the grid.
    """
    if isinstance(result, BenchmarkResult):
        p, pl = result.p, result.p_L
    else:
        p, pl = (np.asarray(a, dtype=float) for a in result)
    order = np.argsort(p)
    p, pl = p[order], pl[order]
    P = unencoded_failure(p, k)
    with np.errstate(divide="ignore"):
        diff = np.log(pl) - np.log(P)
    for i in range(len(p) - 1):
        a, b = diff[i], diff[i + 1]
        if not (np.isfinite(b)) or (a < 0) == (b < 0):
            continue
        if not np.isfinite(a):
            continue
        x1, x2 = math.log(p[i]), math.log(p[i + 1])
        return float(math.exp(x1 - a * (x2 - x1) / (b - a)))
    raise ValueError("p_L(p) does not cross P(p, k) on the sampled grid")


# ------------------------------------------------------------------ teleportation


def _string_on(code: FermionCode, vec_gamma, vec_gamma_prime, offset: int, total: int) -> np.ndarray:
    out = np.zeros(2 * total, dtype=np.uint8)
    if vec_gamma is not None:
        out ^= embed(vec_gamma, 0, offset, total)
    if vec_gamma_prime is not None:
        out ^= embed(vec_gamma_prime, 1, offset, total)
    return out


def logical_s(tab: Tableau, code: FermionCode, j: int, offset: int, dagger: bool = False) -> None:
    """exp(i pi/2 n_bar_j) (or its inverse) on a code block at ``offset``."""
    P = logical_parity(code, j, offset, tab.n)
    s = -1 if not dagger else 1
    tab.apply_rotation(P.vector, s * P.sign())


def logical_z(tab: Tableau, code: FermionCode, j: int, offset: int) -> None:
    """exp(i pi n_bar_j) = i gamma_bar gamma'_bar up to a phase."""
    u = code.logicals[j]
    tab.apply_string(_string_on(code, u, u, offset, tab.n))


def logical_braid(tab: Tableau, code_a: FermionCode, ja: int, off_a: int,
                  code_b: FermionCode, jb: int, off_b: int) -> None:
    """exp(i pi/2 (c_bar_a^dag c_bar_b + h.c.)) between two logical modes."""
    n = tab.n
    ga, gpa = logical_pair(code_a, ja, off_a, n)
    gb, gpb = logical_pair(code_b, jb, off_b, n)
    for P in ((gpa * gb).scaled(1), (gpb * ga).scaled(1)):
        tab.apply_rotation(P.vector, P.sign())


def logical_fswap(tab: Tableau, code_a: FermionCode, ja: int, off_a: int,
                  code_b: FermionCode, jb: int, off_b: int) -> None:
    logical_braid(tab, code_a, ja, off_a, code_b, jb, off_b)
    logical_s(tab, code_a, ja, off_a, dagger=True)
    logical_s(tab, code_b, jb, off_b, dagger=True)


def teleport(tab: Tableau, memory_code: FermionCode, l: int, processor_code: FermionCode,
             direction: str = "forward", rng=None, merged: MergedCode | None = None,
             processor_logical: int = 0, rounds: int = 1, strict: bool = True,
             record: dict | None = None, only_measurement: bool = False,
             ancilla_region: bool = False) -> Tableau:
    """Move a logical fermion between memory mode l and a processor block.

    ``tab`` holds the memory modes, then the processor modes, then any
    spectator modes. Forward moves memory mode l onto the processor (which
    must hold |0>), backward moves the processor fermion into memory mode l
    (which must hold |0>). Steps, with X the source and Y the target:
    measure i gamma_X gamma_Y by lattice surgery and apply Z_Y on -1;
    measure n_X and apply the string i gamma_X gamma_Y when it is 1;
    apply S_Y.

    With ``ancilla_region`` the ancillas are not created here: the modes
    right after the processor must already hold at least ``n_ancilla``
    vacuum modes (they are returned to the vacuum afterwards), and the
    tableau is updated in place.

    Returns:
        The tableau on the same modes (a new one unless ``ancilla_region``).
        When ``record`` is given it receives the two feedback outcomes under
        "joint" and "parity" (+-1).
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    rng = rng if rng is not None else np.random.default_rng()
    m = merged or method2_merge(memory_code, l, processor_code, processor_logical)
    nM, nP = memory_code.n, processor_code.n
    n_data = nM + nP
    spect = tab.n - n_data
    if spect < 0:
        raise ValueError("tableau is smaller than memory plus processor")
    if m.n_a != nM or m.n_b != nP:
        raise ValueError("merged code does not match the blocks")
    if ancilla_region:
        if spect < m.n_ancilla:
            raise ValueError("ancilla region is too small for the merged code")
        t = tab
        joint, t = joint_measure(t, m, rounds=rounds, rng=rng, strict=strict, only_measurement=only_measurement)
    else:
        t = tab.copy()
        t.extend(m.n_ancilla)
        if spect:
            order = (list(range(n_data)) + list(range(n_data + spect, n_data + spect + m.n_ancilla))
                     + list(range(n_data, n_data + spect)))
            t.permute_modes(order)
        joint, t = joint_measure(t, m, rounds=rounds, rng=rng, strict=strict, only_measurement=only_measurement)
        t.discard_modes(range(n_data, n_data + m.n_ancilla))

    n = t.n
    uM = memory_code.logicals[l]
    uP = processor_code.logicals[processor_logical]
    if direction == "forward":
        src, dst = (memory_code, l, 0), (processor_code, processor_logical, nM)
        outcome = joint
    else:
        src, dst = (processor_code, processor_logical, nM), (memory_code, l, 0)
        # i gamma_P gamma_M = -i gamma_M gamma_P
        outcome = -joint
    if outcome < 0:
        logical_z(t, *dst)
    parity = t.measure(logical_parity(src[0], src[1], src[2], n), rng)
    if parity < 0:
        t.apply_string(embed(uM, 0, 0, n) ^ embed(uP, 0, nM, n))
    logical_s(t, *dst)
    if record is not None:
        record.update(joint=int(outcome), parity=int(parity))
    return t


def teleport_circuit() -> str:
    """The same protocol on two bare modes (0 = source, 1 = target), as mjc text."""
    return "\n".join([
        "mjc v1",
        "M 0 2 -> j",
        "COND j Z 1",
        "M 0 1 -> n",
        "COND n D 0 2",
        "S 1",
    ]) + "\n"


# ------------------------------------------------------------------ dynamics


@dataclass(frozen=True)
class DynamicsConfig:
    """Feedback-dynamics parameters.

    Attributes:
        steps: Number of modules (time steps).
        p: Physical error rate of the channel layer applied once per gate.
        with_correction: Decode and correct all blocks during each gate.
        shots: Independent trajectories.
        seed: Master seed; shot s uses the substream spawn key (s,).
        memory: Memory code family; only "eg28" is available.
        threads: Worker processes.
    """

    steps: int = 6
    p: float = 0.005
    with_correction: bool = True
    shots: int = 200
    seed: int = 0
    memory: str = "eg28"
    threads: int = 1


@dataclass
class DynamicsResult:
    steps: int
    n_mean: np.ndarray  # (steps + 1, 4)
    n_stderr: np.ndarray
    shots: int
    config: dict

    def csv(self) -> str:
        lines = ["step,n1,n2,n3,n4"]
        for t in range(self.n_mean.shape[0]):
            lines.append(",".join([str(t)] + [repr(float(x)) for x in self.n_mean[t]]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"steps": self.steps, "n_mean": self.n_mean.tolist(), "n_stderr": self.n_stderr.tolist(),
                "shots": self.shots, "config": self.config}


SITES = 4


@lru_cache(maxsize=4)
def _dynamics_codes(memory: str):
    """Memory code, the two-block processor code and the merged codes per (site, slot)."""
    if memory != "eg28":
        raise ValueError(f"unknown memory {memory!r}")
    mem = eg_code(2, 8)
    proc = steane()
    pair = direct_sum(proc, proc)
    merged = {(l, slot): method2_merge(mem, l, pair, slot) for l in range(SITES) for slot in (0, 1)}
    return mem, pair, merged


class _Machine:
    """Register [memory, processor pair, ancilla region] on one tableau.

    The ancilla region is sized for the largest merged code and sits in the
    vacuum between surgeries, so teleports need no register reshaping.
    """

    def __init__(self, mem: FermionCode, pair: FermionCode, merged: dict, noise: NoiseModel, correct: bool, rng):
        self.mem, self.pair, self.merged = mem, pair, merged
        self.noise, self.correct, self.rng = noise, correct, rng
        self.n_anc = max(m.n_ancilla for m in merged.values())
        self.n_data = mem.n + pair.n
        occ = [0, 1, 0, 1] + [0] * (mem.k_f - SITES)
        self.fresh = init_product_state(pair, "vacuum").direct_sum(Tableau.vacuum(self.n_anc))
        self.fresh._destabilizers()
        self.tab = init_product_state(mem, "vacuum", occ).direct_sum(self.fresh)
        self.blocks = [(mem, 0), (pair, mem.n)]
        self.decoders = [FermionDecoder(c.A, max(noise.p, 1e-3)) for c, _ in self.blocks]
        n = self.tab.n
        self.checks = [MajoranaString.hermitian(embed(r, sector, off, n))
                       for code, off in self.blocks for sector in (0, 1) for r in code.A]
        self.parities = [logical_parity(mem, j, 0, n) for j in range(SITES)]

    def occupations(self) -> np.ndarray:
        return (1 - self.tab.expectations(self.parities)) / 2.0

    def _teleport(self, site: int, slot: int, direction: str) -> None:
        teleport(self.tab, self.mem, site, self.pair, direction, self.rng, merged=self.merged[(site, slot)],
                 processor_logical=slot, strict=False, only_measurement=True, ancilla_region=True)

    def noise_layer(self) -> None:
        if self.noise.p == 0:
            return
        n = self.tab.n
        eg, egp = self.noise.sample(self.n_data, self.rng)
        pad = np.zeros(n - self.n_data, dtype=np.uint8)
        self.tab.apply_string(interleave(np.concatenate([eg, pad]), np.concatenate([egp, pad])))
        if not self.correct:
            return
        syn = (self.tab.expectations(self.checks) < 0).astype(np.uint8)
        k = 0
        touched = np.zeros(self.n_data, dtype=np.uint8)
        for (code, off), dec in zip(self.blocks, self.decoders):
            m = code.A.shape[0]
            sg, sgp = syn[k:k + m], syn[k + m:k + 2 * m]
            k += 2 * m
            if not (sg.any() or sgp.any()):
                continue
            cg, cgp = dec.decode(sg, sgp)
            self.tab.apply_string(_string_on(code, cg, cgp, off, n))
            touched[off:off + code.n] |= cg | cgp
        if self.noise.post_gate_noise:
            eg, egp = self.noise.sample_on(np.flatnonzero(touched), self.n_data, self.rng)
            self.tab.apply_string(interleave(np.concatenate([eg, pad]), np.concatenate([egp, pad])))

    def reset_processors(self) -> None:
        """Read out and drop the processor and ancilla modes, then append fresh ones."""
        nM = self.mem.n
        n = self.tab.n
        for j in range(nM, n):
            v = np.zeros(2 * n, dtype=np.uint8)
            v[2 * j] = v[2 * j + 1] = 1
            self.tab.measure(MajoranaString.hermitian(v), self.rng)
        self.tab.discard_modes(range(nM, n))
        self.tab = self.tab.direct_sum(self.fresh)

    def gate(self, kind: str, a: int, b: int) -> None:
        """Braid or fSWAP between memory sites a and b through the processors."""
        self._teleport(a, 0, "forward")
        self._teleport(b, 1, "forward")
        self.noise_layer()
        off = self.mem.n
        if kind == "braid":
            logical_braid(self.tab, self.pair, 0, off, self.pair, 1, off)
        else:
            logical_fswap(self.tab, self.pair, 0, off, self.pair, 1, off)
        self._teleport(a, 0, "backward")
        self._teleport(b, 1, "backward")
        self.reset_processors()

    def measure_site(self, j: int) -> int:
        """Occupation outcome (0 or 1) of memory site j."""
        return 0 if self.tab.measure(self.parities[j], self.rng) > 0 else 1

    def module(self) -> None:
        for j in range(SITES - 1):
            self.gate("braid", j, j + 1)
        for j in range(SITES - 1):
            if self.measure_site(j) == 0:
                self.gate("fswap", j, j + 1)


def _dynamics_shot(args) -> np.ndarray:
    cfg, shot = args
    mem, pair, merged = _dynamics_codes(cfg.memory)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(shot,)))
    mach = _Machine(mem, pair, merged, NoiseModel(cfg.p), cfg.with_correction, rng)
    out = [mach.occupations()]
    for _ in range(cfg.steps):
        mach.module()
        out.append(mach.occupations())
    return np.array(out)


def dynamics_run(steps: int = 6, p: float = 0.005, with_correction: bool = True, seed: int = 0,
                 shots: int = 200, threads: int = 1, memory: str = "eg28") -> DynamicsResult:
    """Mean logical occupations of the four memory sites after each module.

    The memory starts in |0101>. A module applies the braids B12, B23, B34,
    then for j = 1..3 measures n_j and applies fSWAP(j, j+1) when the
    outcome is 0. Every gate teleports both sites onto the processors, acts
    there, teleports back, and resets the processors.
    """
    cfg = DynamicsConfig(steps, p, with_correction, shots, seed, memory, threads)
    tasks = [(cfg, s) for s in range(shots)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            traj = list(ex.map(_dynamics_shot, tasks, chunksize=1))
    else:
        traj = [_dynamics_shot(t) for t in tasks]
    T = np.array(traj)
    err = T.std(axis=0, ddof=1) / math.sqrt(shots) if shots > 1 else np.zeros(T.shape[1:])
    return DynamicsResult(steps, T.mean(axis=0), err, shots, asdict(cfg))


def skin_pattern(steps: int) -> np.ndarray:
    """Noiseless occupations computed directly on occupation-number strings.

    Braids and fSWAPs exchange the occupations of two sites, so in the
    occupation basis the circuit is a classical permutation process.
    """
    occ = [0, 1, 0, 1]
    out = [list(occ)]
    for _ in range(steps):
        for j in range(SITES - 1):
            occ[j], occ[j + 1] = occ[j + 1], occ[j]
        for j in range(SITES - 1):
            if occ[j] == 0:
                occ[j], occ[j + 1] = occ[j + 1], occ[j]
        out.append(list(occ))
    return np.array(out, dtype=float)
