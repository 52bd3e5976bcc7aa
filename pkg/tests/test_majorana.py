from __future__ import annotations

import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ferroc.dense import Fock
from ferroc.majorana import (MajoranaString, commutation_form, commutes, hermitian_phase, interleave, mul,
                             product, split)


def strings(n):
    return st.tuples(arrays(np.uint8, 2 * n, elements=st.integers(0, 1)), st.integers(0, 3)).map(
        lambda t: MajoranaString(t[0], t[1]))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(strings(n), strings(n))))
def test_mul_matches_dense(pair):
    a, b = pair
    F = Fock(a.n)
    assert np.allclose(F.matrix(mul(a, b)), F.matrix(a) @ F.matrix(b))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(strings(n), strings(n))))
def test_commutes_matches_dense(pair):
    a, b = pair
    F = Fock(a.n)
    A, B = F.matrix(a), F.matrix(b)
    assert commutes(a, b) == np.allclose(A @ B, B @ A)
    assert commutation_form(a.vector[None], b.vector[None])[0, 0] == (not commutes(a, b))


@given(st.integers(1, 4).flatmap(lambda n: arrays(np.uint8, 2 * n, elements=st.integers(0, 1))))
def test_hermitian_phase(v):
    s = MajoranaString.hermitian(v)
    M = Fock(s.n).matrix(s)
    assert np.allclose(M, M.conj().T)
    assert np.allclose(M @ M, np.eye(M.shape[0]))
    assert s.sign() == 1 and (-s).sign() == -1
    assert s.phase == hermitian_phase(v)


def test_number_operator_convention():
    # i g g' = 1 - 2n on one mode
    F = Fock(1)
    P = MajoranaString(np.array([1, 1], dtype=np.uint8), 1)
    assert np.allclose(F.matrix(P), np.diag([1, -1]))


@given(st.integers(1, 4).flatmap(lambda n: st.lists(strings(n), min_size=1, max_size=4)))
def test_product_associates(ss):
    F = Fock(ss[0].n)
    M = np.eye(F.dim)
    for s in ss:
        M = M @ F.matrix(s)
    assert np.allclose(F.matrix(product(ss)), M)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(arrays(np.uint8, n, elements=st.integers(0, 1)),
                                                      arrays(np.uint8, n, elements=st.integers(0, 1)))))
def test_interleave_split(parts):
    g, gp = parts
    a, b = split(interleave(g, gp))
    assert np.array_equal(a, g) and np.array_equal(b, gp)


def test_odd_length_rejected():
    import pytest

    with pytest.raises(ValueError):
        MajoranaString(np.zeros(3, dtype=np.uint8))
