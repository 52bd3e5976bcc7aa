from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ferroc.geometry import eg_lines, make_field, pg_incidence, prime_power


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 1), (2, 6)])
def test_field_axioms(p, s):
    F = make_field(p, s)
    els = list(F.elements())
    assert len(els) == p**s
    sample = els if len(els) <= 16 else els[:: max(1, len(els) // 12)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    for a in els[1:]:
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    # alpha is primitive: its powers hit every nonzero element once
    assert sorted(F.alpha_pow(t) for t in range(F.q - 1)) == els[1:]


@given(st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.data())
def test_field_multiplication_commutes(ps, data):
    F = make_field(*ps)
    a = data.draw(st.integers(0, F.q - 1))
    b = data.draw(st.integers(0, F.q - 1))
    assert F.mul(a, b) == F.mul(b, a)
    assert F.sub(F.add(a, b), b) == a


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power(12)


@pytest.mark.parametrize("m,q", [(2, 4), (2, 8), (3, 2)])
def test_eg_line_counts(m, q):
    all_lines = eg_lines(m, q, include_origin=True)
    n_points = q**m
    # q^(m-1) (q^m - 1) / (q - 1) lines, each of q points
    assert len(all_lines) == q ** (m - 1) * (q**m - 1) // (q - 1)
    assert all(len(L) == q for L in all_lines)
    through_origin = [L for L in all_lines if 0 in L]
    assert len(through_origin) == (q**m - 1) // (q - 1)
    ls = eg_lines(m, q)
    assert ls.num_points == n_points - 1
    assert len(ls.lines) == len(all_lines) - len(through_origin)
    assert len(ls.lines) == ls.num_classes * ls.num_points


@pytest.mark.parametrize("q", [2, 4, 8])
def test_pg_incidence_is_a_projective_plane(q):
    B = pg_incidence(q).astype(np.int64)
    N = q * q + q + 1
    assert B.shape == (N, N)
    assert (B.sum(axis=0) == q + 1).all() and (B.sum(axis=1) == q + 1).all()
    G = B @ B.T
    # two distinct points share exactly one line
    assert (G[~np.eye(N, dtype=bool)] == 1).all()
