from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ferroc import codes, f2
from ferroc.decoder import Decoder, DecoderConfig, FermionDecoder, bp, decode_fermionic, osd, sector_prior


@pytest.fixture(scope="module")
def eg24():
    return codes.eg_code(2, 4)


def test_config_validation():
    for kw in ({"prior": 0.0}, {"bp_iters": 0}, {"osd_order": -1}, {"bp_schedule": "random"}):
        with pytest.raises(ValueError):
            DecoderConfig(**kw)


def test_zero_syndrome():
    A = codes.steane().A
    res = Decoder(A).decode(np.zeros(A.shape[0], dtype=np.uint8))
    assert not res.error_estimate.any() and res.converged


@pytest.mark.parametrize("schedule", ["serial", "parallel"])
def test_bp_single_error(eg24, schedule):
    A = eg24.A
    e = np.zeros(eg24.n, dtype=np.uint8)
    e[4] = 1
    post, hard, conv, it = bp(A, f2.matmul(A, e[:, None])[:, 0], DecoderConfig(bp_schedule=schedule, prior=0.01))
    assert conv and np.array_equal(hard, e)
    assert post[4] < 0 < np.delete(post, 4).min()


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_osd_solution_reproduces_syndrome(seed, w):
    rng = np.random.default_rng(seed)
    A = codes.eg_code(2, 4).A
    e = np.zeros(A.shape[1], dtype=np.uint8)
    e[rng.choice(A.shape[1], w, replace=False)] = 1
    s = f2.matmul(A, e[:, None])[:, 0]
    for order in (0, 3):
        est = osd(A, s, rng.normal(size=A.shape[1]), order).error_estimate
        assert np.array_equal(f2.matmul(A, est[:, None])[:, 0], s)
    res = Decoder(A).decode(s)
    assert np.array_equal(f2.matmul(A, res.error_estimate[:, None])[:, 0], s)
    if w <= 2:  # within the correction radius of this d = 5 code
        assert res.error_estimate.sum() <= w


def test_osd_rejects_inconsistent_syndrome():
    A = np.array([[1, 1, 0], [1, 1, 0]], dtype=np.uint8)
    with pytest.raises(ValueError):
        Decoder(A).osd(np.array([1, 0], dtype=np.uint8), np.zeros(3))


def test_syndrome_length_checked():
    with pytest.raises(ValueError):
        Decoder(codes.steane().A).decode(np.zeros(2, dtype=np.uint8))


def test_sectors_are_independent(eg24):
    A = eg24.A
    dec = FermionDecoder(A, 0.01)
    e = np.zeros(eg24.n, dtype=np.uint8)
    e[[1, 17]] = 1
    s = f2.matmul(A, e[:, None])[:, 0]
    g, gp = dec.decode(s, np.zeros_like(s))
    assert not gp.any()
    assert np.array_equal(g, e)


def test_decode_fermionic_string(eg24):
    A = eg24.A
    e = np.zeros(eg24.n, dtype=np.uint8)
    e[3] = 1
    s = f2.matmul(A, e[:, None])[:, 0]
    corr = decode_fermionic(eg24, s, s, 0.01)
    assert corr.weight == 2 and corr.vector[6] and corr.vector[7]


def test_sector_prior():
    assert np.isclose(sector_prior(0.03), 0.02)


def test_weight_one_exhaustive_steane():
    A = codes.steane().A
    dec = Decoder(A)
    for j in range(7):
        e = np.zeros(7, dtype=np.uint8)
        e[j] = 1
        est = dec.decode(f2.matmul(A, e[:, None])[:, 0]).error_estimate
        assert f2.in_image(A, e ^ est)


def test_cache_reuses_results():
    A = codes.steane().A
    dec = Decoder(A)
    s = np.array([1, 0, 0], dtype=np.uint8)
    assert dec.decode(s) is dec.decode(s)


def test_weight_two_all_pairs_small_bicycle():
    # brute-force minimum-weight decoding oracle on a small code
    c = codes.bicycle(6, [1, 2])
    A = c.A
    n = A.shape[1]
    dec = Decoder(A)
    for i, j in itertools.combinations(range(n), 2):
        e = np.zeros(n, dtype=np.uint8)
        e[[i, j]] = 1
        s = f2.matmul(A, e[:, None])[:, 0]
        est = dec.decode(s).error_estimate
        assert np.array_equal(f2.matmul(A, est[:, None])[:, 0], s)
        assert est.sum() <= 2
