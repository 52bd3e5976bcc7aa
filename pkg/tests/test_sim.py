from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ferroc import dense as Dn
from ferroc.codes import steane
from ferroc.majorana import MajoranaString
from ferroc.sim import Tableau, init_product_state, logical_parity, stabilizer_strings


def random_even(n, rng):
    while True:
        v = rng.integers(0, 2, 2 * n).astype(np.uint8)
        if v.any() and not v.sum() & 1:
            return MajoranaString.hermitian(v, 1 if rng.random() < 0.5 else -1)


def random_gate(n, rng):
    kind = rng.integers(0, 6)
    j = int(rng.integers(n))
    k = int((j + 1 + rng.integers(n - 1)) % n) if n > 1 else j
    if kind == 0:
        return ("gamma", j)
    if kind == 1:
        return ("gamma_prime", j)
    if kind == 2:
        return ("s", j)
    if kind == 3 and n > 1:
        return ("braid", j, k)
    if kind == 4 and n > 1:
        return ("fswap", j, k)
    return ("z", j)


DENSE = {"gamma": Dn.gate_gamma, "gamma_prime": Dn.gate_gamma_prime, "s": Dn.gate_s, "z": Dn.gate_z,
         "braid": Dn.gate_braid, "fswap": Dn.gate_fswap}


def stabilized_by(F, psi, strings):
    return all(np.allclose(F.apply_string(s, psi), psi) for s in strings)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_random_circuit_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    tab = Tableau.vacuum(n)
    F = Dn.Fock(n)
    psi = F.vacuum()
    for _ in range(12):
        if rng.random() < 0.3:
            obs = random_even(n, rng)
            exp_t = tab.expectation(obs)
            exp_d = Dn.expectation(F, obs, psi)
            if exp_t != 0:
                assert np.isclose(exp_d, exp_t)
            else:
                assert np.isclose(exp_d, 0.0)
            out = tab.measure(obs, rng)
            Opsi = F.apply_string(obs, psi)
            psi = 0.5 * (psi + out * Opsi)
            psi = psi / np.linalg.norm(psi)
        else:
            g = random_gate(n, rng)
            getattr(tab, g[0])(*g[1:])
            psi = DENSE[g[0]](F, *g[1:], psi)
        assert stabilized_by(F, psi, tab.strings())
        tab.check()


@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_destabilizers_stay_dual(n, seed):
    rng = np.random.default_rng(seed)
    tab = Tableau.vacuum(n)
    for _ in range(20):
        if rng.random() < 0.4:
            tab.measure(random_even(n, rng), rng)
        else:
            g = random_gate(n, rng)
            getattr(tab, g[0])(*g[1:])
    D = tab._destabilizers()
    fresh = tab.copy()
    fresh.D = None
    D2 = fresh._destabilizers()
    # both satisfy D G^T = I
    for M in (D, D2):
        G = (M.astype(np.int64) @ tab.X.T.astype(np.int64)) & 1
        assert np.array_equal(G, np.eye(n, dtype=np.int64))


def test_expectations_batch_matches_single(rng):
    n = 5
    tab = Tableau.vacuum(n)
    for _ in range(30):
        g = random_gate(n, rng)
        getattr(tab, g[0])(*g[1:])
    obs = [random_even(n, rng) for _ in range(40)] + tab.strings()
    assert list(tab.expectations(obs)) == [tab.expectation(o) for o in obs]


def test_forced_measurement(rng):
    tab = Tableau.vacuum(2)
    P = MajoranaString.hermitian(np.array([1, 0, 1, 0], dtype=np.uint8))
    assert tab.measure(P, rng, forced=-1) == -1
    assert tab.expectation(P) == -1
    assert tab.measure(P, rng, forced=1) == -1  # deterministic now


def test_observable_validation():
    tab = Tableau.vacuum(2)
    with pytest.raises(ValueError):
        tab.expectation(MajoranaString(np.array([1, 0, 0, 0], dtype=np.uint8)))
    with pytest.raises(ValueError):
        tab.expectation(MajoranaString(np.array([1, 1, 0, 0], dtype=np.uint8), 0))


def test_extend_discard_permute(rng):
    tab = Tableau.vacuum(3)
    tab.braid(0, 1)
    tab.gamma(0)
    tab.extend(2)
    assert tab.n == 5
    tab.permute_modes([4, 0, 1, 2, 3])
    F = Dn.Fock(5)
    psi = Dn.gate_gamma(F, 1, Dn.gate_braid(F, 1, 2, F.vacuum()))
    assert stabilized_by(F, psi, tab.strings())
    tab.discard_modes([0])
    assert tab.n == 4


def test_code_state_has_logical_occupations():
    c = steane()
    for occ in (0, 1):
        tab = init_product_state(c, "vacuum", [occ])
        assert tab.expectation(logical_parity(c, 0)) == (1 - 2 * occ)
        assert all(tab.expectation(s) == 1 for s in stabilizer_strings(c))


def test_direct_sum_matches_dense():
    a = Tableau.vacuum(2)
    a.gamma(1)
    b = Tableau.vacuum(1)
    t = a.direct_sum(b)
    F = Dn.Fock(3)
    psi = Dn.gate_gamma(F, 1, F.vacuum())
    assert stabilized_by(F, psi, t.strings())
