from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from ferroc import codes
from ferroc import experiments as E
from ferroc.majorana import interleave
from ferroc.sim import init_product_state, logical_parity


def test_noise_model_frequencies(rng):
    noise = E.NoiseModel(0.3)
    g, gp = noise.sample(200_000, rng)
    counts = [int((g & ~gp).sum()), int((~g & gp).sum()), int((g & gp).sum())]
    none = 200_000 - sum(counts)
    exp = [0.1 * 200_000] * 3 + [0.7 * 200_000]
    assert stats.chisquare(counts + [none], exp).pvalue > 0.01


def test_noise_model_rejects_bad_p():
    with pytest.raises(ValueError):
        E.NoiseModel(0.8)


@given(st.floats(0.0, 0.99), st.integers(1, 30))
def test_rate_conversions_invert(P, N):
    assert np.isclose(E.total_rate(E.per_cycle_rate(P, N), N), P)


def test_fit_exponent_recovers_power():
    p = np.geomspace(1e-3, 1e-2, 5)
    assert np.isclose(E.fit_exponent(p, 3.0 * p**2), 2.0)


def test_pseudo_threshold_crossing():
    p = np.geomspace(1e-2, 2e-1, 6)
    pl = 20 * p**2
    pth = E.pseudo_threshold((p, pl), 2)
    # 20 p^2 = 1 - (1 - p)^2 has the root p = 2 / 21
    assert abs(pth - 2 / 21) / (2 / 21) < 0.05


def test_pseudo_threshold_no_crossing():
    p = np.geomspace(1e-3, 1e-2, 5)
    with pytest.raises(ValueError):
        E.pseudo_threshold((p, 0.1 * p**2), 2)


def test_unencoded_failure():
    assert np.isclose(E.unencoded_failure(0.1, 2), 0.19)


def test_memory_trial_noiseless():
    c = codes.steane()
    rng = np.random.default_rng(0)
    assert not any(E.memory_trial(c, E.NoiseModel(0.0), 5, rng) for _ in range(10))


def test_state_check_matches_tableau(rng):
    # error-frame verdict == flipped logical expectation on the full state
    c = codes.eg_code(2, 4)
    ctx = E._memory_context(c, 0.01)
    for which in ("vacuum", "plus"):
        tab0 = init_product_state(c, which)
        gens = [s for s in tab0.strings()]
        for _ in range(20):
            v = np.zeros(c.n, dtype=np.uint8)
            # kernel vectors keep the code space: logicals plus random checks
            for j in rng.choice(c.k_f, 2, replace=False):
                if rng.random() < 0.5:
                    v ^= c.logicals[j]
            for r in rng.choice(c.A.shape[0], 3, replace=False):
                v ^= c.A[r]
            u = np.zeros_like(v) if rng.random() < 0.5 else v
            frame = interleave(v, u)
            tab = tab0.copy()
            tab.apply_string(frame)
            flipped = any(tab.expectation(s) != tab0.expectation(s) for s in gens)
            assert E._anticommutes_any(ctx.state_rows[which], frame) == flipped


def test_benchmark_thread_independent():
    c = codes.steane()
    cfg = E.BenchmarkConfig(n_sample=40, n_group=2, seed=3)
    r1 = E.memory_benchmark(c, [0.02, 0.05], cfg)
    r2 = E.memory_benchmark(c, [0.02, 0.05], E.BenchmarkConfig(n_sample=40, n_group=2, seed=3, threads=2))
    assert r1.csv() == r2.csv()
    assert r1.csv().splitlines()[0] == "p,P_L,p_L,stderr"
    assert np.array_equal(r1.errors, r2.errors)


def test_full_scale_config():
    cfg = E.BenchmarkConfig(full_scale=True)
    assert cfg.samples_for(0.005) == 10_000 and cfg.samples_for(0.02) == 2000 and cfg.groups() == 20


def test_logical_gates_on_steane_pair():
    s = codes.steane()
    pair = codes.direct_sum(s, s)
    for occ in ([0, 1], [1, 0], [1, 1]):
        tab = init_product_state(pair, "vacuum", occ)
        E.logical_fswap(tab, s, 0, 0, s, 0, 7)
        got = [tab.expectation(logical_parity(pair, j)) for j in range(2)]
        assert got == [1 - 2 * occ[1], 1 - 2 * occ[0]]
        E.logical_braid(tab, s, 0, 0, s, 0, 7)
        got = [tab.expectation(logical_parity(pair, j)) for j in range(2)]
        assert got == [1 - 2 * occ[0], 1 - 2 * occ[1]]


def test_logical_s_and_z():
    s = codes.steane()
    for occ in (0, 1):
        tab = init_product_state(s, "vacuum", [occ])
        E.logical_z(tab, s, 0, 0)
        E.logical_s(tab, s, 0, 0)
        E.logical_s(tab, s, 0, 0, dagger=True)
        assert tab.expectation(logical_parity(s, 0)) == 1 - 2 * occ


@pytest.mark.parametrize("occ", [0, 1])
def test_teleport_steane_round_trip(occ):
    s = codes.steane()
    pair = codes.direct_sum(s, codes.color_code(3))
    tab = init_product_state(pair, "vacuum", [occ, 0])
    rng = np.random.default_rng(occ)
    rec = {}
    out = E.teleport(tab, s, 0, codes.color_code(3), rng=rng, record=rec)
    assert out.expectation(logical_parity(pair, 1)) == 1 - 2 * occ
    assert out.expectation(logical_parity(pair, 0)) == 1
    back = E.teleport(out, s, 0, codes.color_code(3), direction="backward", rng=rng)
    assert back.expectation(logical_parity(pair, 0)) == 1 - 2 * occ
    assert set(rec) == {"joint", "parity"}


def test_skin_pattern_oracle():
    pat = E.skin_pattern(4)
    assert pat[0].tolist() == [0, 1, 0, 1]
    assert (pat[2:] == [1, 0, 1, 0]).all()


def test_dynamics_noiseless_matches_pattern():
    r = E.dynamics_run(steps=2, p=0.0, with_correction=False, shots=1)
    assert np.array_equal(r.n_mean, E.skin_pattern(2))
    assert r.csv().splitlines()[0] == "step,n1,n2,n3,n4"


def test_unknown_memory():
    with pytest.raises(ValueError):
        E.dynamics_run(steps=1, p=0.0, shots=1, memory="pg28")

