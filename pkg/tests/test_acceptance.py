"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (shown in the terminal summary)
and then asserts the same verdict.
"""

from __future__ import annotations

import itertools
import os
import time

import numpy as np
from scipy import stats

from ferroc import codes, f2
from ferroc import dense as Dn
from ferroc import experiments as E
from ferroc import surgery as S
from ferroc.decoder import FermionDecoder
from ferroc.logicals import extract_odd, logical_basis
from ferroc.majorana import MajoranaString, commutes, mul
from ferroc.sim import Tableau, init_product_state, logical_pair, logical_parity

# ---------------------------------------------------------------- criterion 1


def test_criterion_1_code_parameters(acceptance):
    t0 = time.time()
    want = {
        "EG(2,4)": ((30, 2, 2), lambda: codes.eg_code(2, 4)),
        "EG(2,8)": ((126, 38, 38), lambda: codes.eg_code(2, 8)),
        "EG(3,2)": ((42, 30, 30), lambda: codes.eg_code(3, 2)),
        "bicycle": ((100, 20, 20), codes.bicycle_100),
    }
    got, ok = {}, True
    for name, (target, build) in want.items():
        c = build()
        got[name] = (c.n, c.k_q, c.k_f)
        ok &= got[name] == target
    pg = codes.pg_code(4)
    # PG(2,4) is compared but not gated (discrepancy logged)
    pg_params = (pg.n, pg.k_q, pg.k_f)
    dt = time.time() - t0
    ok &= dt < 60
    detail = ", ".join(f"{k}={v}" for k, v in got.items())
    acceptance(1, ok, f"{detail}, PG(2,4)={pg_params} (target (16,10,10), logged); {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- criterion 2


def test_criterion_2_kitaev_negative_control(acceptance):
    A = codes.kitaev_map(codes.HAMMING_7, codes.HAMMING_7)
    ones_in_rowspace = f2.in_image(A, np.ones(A.shape[1], dtype=np.uint8))
    k_f = extract_odd(logical_basis(A)).k_f
    ok = ones_in_rowspace and k_f == 0
    acceptance(2, ok, f"all-ones in row space={ones_in_rowspace}, k_f={k_f}")
    assert ok


# ---------------------------------------------------------------- criterion 3

GATES = {"gamma": Dn.gate_gamma, "gamma_prime": Dn.gate_gamma_prime, "z": Dn.gate_z, "s": Dn.gate_s,
         "braid": Dn.gate_braid, "fswap": Dn.gate_fswap}
TWO_MODE = ("braid", "fswap")


def _gate_sites(name, n):
    if name in TWO_MODE:
        return list(itertools.permutations(range(n), 2))
    return [(j,) for j in range(n)]


def _even_vectors(n):
    for bits in itertools.product((0, 1), repeat=2 * n):
        v = np.array(bits, dtype=np.uint8)
        if v.any() and not v.sum() & 1:
            yield v


def _random_even(n, rng):
    while True:
        v = rng.integers(0, 2, 2 * n).astype(np.uint8)
        if v.any() and not v.sum() & 1:
            return MajoranaString.hermitian(v, 1 if rng.random() < 0.5 else -1)


def _stabilized(F, psi, strings):
    return all(np.allclose(F.apply_string(s, psi), psi) for s in strings)


def _random_state(n, rng, depth):
    """A tableau and the matching dense vector after a random gate/measure sequence."""
    tab = Tableau.vacuum(n)
    F = Dn.Fock(n)
    psi = F.vacuum()
    names = list(GATES) if n > 1 else [g for g in GATES if g not in TWO_MODE]
    for _ in range(depth):
        if rng.random() < 0.25:
            O = _random_even(n, rng)
            out = tab.measure(O, rng)
            psi = 0.5 * (psi + out * F.apply_string(O, psi))
            psi = psi / np.linalg.norm(psi)
        else:
            name = names[rng.integers(len(names))]
            sites = _gate_sites(name, n)
            args = sites[rng.integers(len(sites))]
            getattr(tab, name)(*args)
            psi = GATES[name](F, *args, psi)
    return tab, F, psi


def _measure_agrees(tab, F, psi, O, rng, outcomes) -> bool:
    """Expectation, outcome and post-measurement state against the dense oracle."""
    e_t = tab.expectation(O)
    if not np.isclose(Dn.expectation(F, O, psi), e_t):
        return False
    out = tab.measure(O, rng)
    if e_t == 0:
        outcomes.append(out)
    elif out != e_t:
        return False
    post = 0.5 * (psi + out * F.apply_string(O, psi))
    norm = np.linalg.norm(post)
    return norm > 1e-9 and _stabilized(F, post / norm, tab.strings())


def _gate_agrees(tab, F, psi, name, args) -> bool:
    tab = tab.copy()
    getattr(tab, name)(*args)
    return _stabilized(F, GATES[name](F, *args, psi), tab.strings())


def test_criterion_3_algebra_oracle(acceptance):
    t0 = time.time()
    rng = np.random.default_rng(2024)
    bad = 0
    outcomes: list[int] = []
    for n in (2, 3):
        F = Dn.Fock(n)
        vecs = [np.array(b, dtype=np.uint8) for b in itertools.product((0, 1), repeat=2 * n)]
        mats = {v.tobytes(): F.matrix(MajoranaString(v, 0)) for v in vecs}
        # every pair of strings, every phase on the left factor
        for va in vecs:
            for pa in range(4):
                a = MajoranaString(va, pa)
                Ma = (1j**pa) * mats[va.tobytes()]
                for vb in vecs:
                    b = MajoranaString(vb, 0)
                    Mb = mats[vb.tobytes()]
                    c = mul(a, b)
                    if not np.allclose((1j**c.phase) * mats[c.vector.tobytes()], Ma @ Mb):
                        bad += 1
                    if commutes(a, b) != np.allclose(Ma @ Mb, Mb @ Ma):
                        bad += 1
        # every gate placement and every even observable on random states
        for _ in range(8):
            tab, F, psi = _random_state(n, rng, depth=10)
            for name in GATES:
                for args in _gate_sites(name, n):
                    bad += not _gate_agrees(tab, F, psi, name, args)
            for v in _even_vectors(n):
                for sign in (1, -1):
                    bad += not _measure_agrees(tab.copy(), F, psi, MajoranaString.hermitian(v, sign), rng, outcomes)
    n = 4
    names = list(GATES)
    for _ in range(10_000):
        tab, F, psi = _random_state(n, rng, depth=int(rng.integers(1, 8)))
        kind = rng.integers(3)
        if kind == 0:
            a = MajoranaString(rng.integers(0, 2, 2 * n).astype(np.uint8), int(rng.integers(4)))
            b = MajoranaString(rng.integers(0, 2, 2 * n).astype(np.uint8), int(rng.integers(4)))
            Ma, Mb = F.matrix(a), F.matrix(b)
            bad += not np.allclose(F.matrix(mul(a, b)), Ma @ Mb)
            bad += commutes(a, b) != np.allclose(Ma @ Mb, Mb @ Ma)
        elif kind == 1:
            name = names[rng.integers(len(names))]
            sites = _gate_sites(name, n)
            bad += not _gate_agrees(tab, F, psi, name, sites[rng.integers(len(sites))])
        else:
            bad += not _measure_agrees(tab, F, psi, _random_even(n, rng), rng, outcomes)
    plus = sum(1 for o in outcomes if o > 0)
    pval = stats.chisquare([plus, len(outcomes) - plus]).pvalue
    dt = time.time() - t0
    ok = bad == 0 and pval > 0.01 and dt < 120
    acceptance(3, ok, f"mismatches={bad}, random outcomes={len(outcomes)} (+1: {plus}), "
                      f"chi2 p={pval:.3f}; {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- criterion 4

REF = 14  # bare reference mode after the memory (0-6) and processor (7-13) blocks


def _observables(code, offset, N):
    """All even products of (gamma_bar, gamma'_bar, gamma_ref, gamma'_ref), made Hermitian.

    The product is taken in that fixed order and multiplied by i^(w(w-1)/2),
    so the same abstract operator is produced for any block offset.
    """
    g, gp = logical_pair(code, 0, offset, N)
    gens = [g, gp, MajoranaString.from_modes(N, gammas=[REF]), MajoranaString.from_modes(N, gamma_primes=[REF])]
    out = {}
    for sel in itertools.product((0, 1), repeat=4):
        w = sum(sel)
        if w == 0 or w & 1:
            continue
        s = MajoranaString.identity(N)
        for use, x in zip(sel, gens):
            if use:
                s = mul(s, x)
        out[sel] = s.scaled(w * (w - 1) // 2)
    return out


def _teleport_case(prep, seed):
    s = codes.steane()
    tab = init_product_state(codes.direct_sum(s, s), "vacuum", [0, 0]).direct_sum(Tableau.vacuum(1))
    N = tab.n
    g, _ = logical_pair(s, 0, 0, N)
    if prep == "one":
        tab.apply_string(g.vector)
    elif prep == "entangled":
        # exp(i pi/4 P), P = i gamma_bar_M gamma_ref: (|0,0> + i|1,1>)/sqrt 2
        tab.apply_rotation(g.vector ^ MajoranaString.from_modes(N, gammas=[REF]).vector, 1)
    before = {k: tab.expectation(o) for k, o in _observables(s, 0, N).items()}
    rec: dict = {}
    out = E.teleport(tab, s, 0, s, rng=np.random.default_rng(seed), record=rec)
    after = {k: out.expectation(o) for k, o in _observables(s, s.n, N).items()}
    mem_empty = out.expectation(logical_parity(s, 0, 0, N)) == 1
    return before, after, mem_empty, (rec["joint"], rec["parity"])


def test_criterion_4_teleportation(acceptance):
    bad = []
    seen = {}
    for prep in ("zero", "one", "entangled"):
        branches = set()
        for seed in range(200):
            before, after, mem_empty, br = _teleport_case(prep, seed)
            if br in branches:
                continue
            branches.add(br)
            if before != after or not mem_empty:
                bad.append((prep, br))
            if len(branches) == 4:
                break
        seen[prep] = len(branches)
    ok = not bad and all(v == 4 for v in seen.values())
    acceptance(4, ok, f"outcome branches covered per input={seen}, mismatched branches={bad}")
    assert ok


# ---------------------------------------------------------------- criteria 5, 6

TABLE_PAIRS = [
    ("Steane", codes.steane, 3),
    ("color d=5", lambda: codes.color_code(5), 5),
    ("PG(2,4)", lambda: codes.pg_code(4), 3),
    ("PG(2,8)", lambda: codes.pg_code(8), 5),
]


def _merge(method, a, b):
    if method == 1:
        return S.method1_merge(a, 0, b)
    return S.method2_merge(a, 0, b, 0)


def test_criterion_5_surgery_validity(acceptance):
    c5 = codes.color_code(5)
    results = []
    ok = True
    for name, build, _ in TABLE_PAIRS:
        a = build()
        for method in (1, 2):
            try:
                rep = S.verify_merged(_merge(method, a, c5))
                good, why = rep.ok, "ok" if rep.ok else rep.violations[0]
            except ValueError as e:
                good, why = False, f"cannot merge: {e}"
            ok &= good
            results.append(f"{name}/M{method}: {why}")
    # cycle-count formula on 100 random pairs
    rng = np.random.default_rng(11)
    pool = []
    while len(pool) < 30:
        h = int(rng.integers(3, 16))
        r = int(rng.integers(1, min(4, h) + 1))
        c = codes.bicycle(h, rng.choice(np.arange(1, h + 1), r, replace=False))
        if c.k_f:
            pool.append(c)
    cyc_bad = 0
    for _ in range(100):
        a, b = pool[rng.integers(len(pool))], pool[rng.integers(len(pool))]
        m = S.method2_merge(a, int(rng.integers(a.k_f)), b, int(rng.integers(b.k_f)))
        g = S.build_graph(m)
        if not (g.n_edges - g.n_vertices + 1 == len(g.cycle_basis) == S.cycle_count_formula(m)):
            cyc_bad += 1
        if not S.verify_merged(m).ok:
            cyc_bad += 1
    ok &= cyc_bad == 0
    acceptance(5, ok, "; ".join(results) + f"; random-pair cycle/verify failures={cyc_bad}/100")
    assert ok


def test_criterion_6_dressed_distances(acceptance):
    t0 = time.time()
    c5 = codes.color_code(5)
    got = []
    ok = True
    for name, build, want in TABLE_PAIRS:
        a = build()
        try:
            try:
                m, tag = S.method1_merge(a, 0, c5), "M1"
            except ValueError:
                # no equal-weight logical representative: Method 2 instead
                m, tag = S.method2_merge(a, 0, c5, 0), "M2"
            d_ex = S.code_distance(m, "exact")
            d_rand = S.code_distance(m, "randomized", budget=2000)
            good = d_ex == want == d_rand
            got.append(f"{name}({tag}) exact={d_ex} randomized={d_rand} want={want}")
        except ValueError as e:
            good = False
            got.append(f"{name}: cannot merge ({e})")
        ok &= good
    dt = time.time() - t0
    ok &= dt < 600
    acceptance(6, ok, "; ".join(got) + f"; {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- criterion 7


def test_criterion_7_memory_scaling(acceptance):
    t0 = time.time()
    grid = np.geomspace(3e-3, 1e-2, 5)
    cfg = E.BenchmarkConfig(n_sample=2000, n_group=5, seed=0, threads=os.cpu_count() or 1)
    parts = []
    ok = True
    for name, code in (("EG(2,4)", codes.eg_code(2, 4)), ("bicycle", codes.bicycle_100())):
        res = E.memory_benchmark(code, grid, cfg)
        alpha = E.fit_exponent(res.p, res.p_L)
        try:
            pth = E.pseudo_threshold(res, code.k_f)
        except ValueError:
            pth = None
        good = 1.6 <= alpha <= 2.4 and pth is not None
        ok &= good
        parts.append(f"{name}: alpha={alpha:.2f}, p_th={'none on grid' if pth is None else f'{pth:.4g}'}, "
                     f"p_L=[{', '.join(f'{x:.2e}' for x in res.p_L)}]")
    dt = time.time() - t0
    acceptance(7, ok, "; ".join(parts) + f"; {dt:.0f}s")
    assert ok


# ---------------------------------------------------------------- criterion 8


def test_criterion_8_dynamics(acceptance):
    t0 = time.time()
    steps, window = 6, slice(4, 7)
    threads = os.cpu_count() or 1
    noiseless = E.dynamics_run(steps=steps, p=0.0, with_correction=False, shots=1, seed=0).n_mean
    reach = next((t for t in range(steps + 1) if (noiseless[t:, 0] == 1).all() and (noiseless[t:, 3] == 0).all()),
                 None)
    ok_clean = reach is not None and reach <= 3
    corr = E.dynamics_run(steps=steps, p=0.005, with_correction=True, shots=200, seed=1, threads=threads).n_mean
    raw = E.dynamics_run(steps=steps, p=0.005, with_correction=False, shots=200, seed=2, threads=threads).n_mean
    ref = noiseless[window].mean(axis=0)
    dev_corr = np.abs(corr[window].mean(axis=0) - ref)
    dev_raw = np.abs(raw[window].mean(axis=0) - ref)
    dt = time.time() - t0
    ok = ok_clean and dev_corr.max() <= 0.1 and dev_raw.max() > 0.1 and dt < 1200
    acceptance(8, ok, f"noiseless steady from module {reach}; corrected max dev={dev_corr.max():.3f}; "
                      f"uncorrected max dev={dev_raw.max():.3f}; {dt:.0f}s")
    assert ok


# ---------------------------------------------------------------- criterion 9


def _exhaustive_decoder_check(code, t):
    """Decode every sector error of weight <= t; count residuals outside rowspace(A)."""
    A = code.A
    dec = FermionDecoder(A, 0.01)
    fails = total = 0
    for w in range(t + 1):
        for idx in itertools.combinations(range(code.n), w):
            e = np.zeros(code.n, dtype=np.uint8)
            e[list(idx)] = 1
            syn = f2.matmul(A, e[:, None])[:, 0]
            for est in dec.decode(syn, syn):
                total += 1
                fails += not f2.in_image(A, e ^ est)
    return fails, total


def test_criterion_9_decoder_contract(acceptance):
    parts = []
    ok = True
    for name, code, d in (("Steane", codes.steane(), 3), ("EG(2,4)", codes.eg_code(2, 4), 5)):
        t = (d - 1) // 2
        fails, total = _exhaustive_decoder_check(code, t)
        ok &= fails == 0
        parts.append(f"{name}: t={t}, {total} sector decodes, wrong class={fails}")
    acceptance(9, ok, "; ".join(parts))
    assert ok
