from __future__ import annotations

import itertools

import numpy as np
import pytest

from ferroc import codes, f2
from ferroc.distance import code_distance, exhaustive_min_outside, min_weight_kernel_vector, random_min_outside


def brute_distance(A):
    """Minimum weight of a kernel vector outside the row space, by full enumeration."""
    n = A.shape[1]
    best = None
    for w in range(1, n + 1):
        for idx in itertools.combinations(range(n), w):
            v = np.zeros(n, dtype=np.uint8)
            v[list(idx)] = 1
            if not f2.matmul(A, v[:, None]).any() and not f2.in_image(A, v):
                return w
    return best


@pytest.mark.parametrize("code", [codes.steane(), codes.bicycle(6, [1, 2]), codes.bicycle(5, [1, 3])],
                         ids=["steane", "bicycle12", "bicycle10"])
def test_exact_distance_matches_brute_force(code):
    assert code_distance(code) == brute_distance(code.A)


def test_randomized_is_upper_bound():
    c = codes.eg_code(2, 4)
    d = code_distance(c)
    assert code_distance(c, "randomized", budget=300) >= d
    assert code_distance(c, "randomized", budget=300, seed=3) == d


def test_exhaustive_budget():
    K = np.eye(30, dtype=np.uint8)
    with pytest.raises(ValueError):
        exhaustive_min_outside(K, np.zeros((0, 30), dtype=np.uint8))


def test_min_weight_kernel_vector_parity():
    A = codes.steane().A
    v = min_weight_kernel_vector(A, parity=1)
    assert v.sum() == 3 and not f2.matmul(A, v[:, None]).any()


def test_random_min_outside_finds_logical():
    A = codes.steane().A
    K = np.array(f2.kernel_basis(A))
    w, v = random_min_outside(K, A, trials=50, seed=0)
    assert w == 3 and not f2.in_image(A, v)


def test_unknown_mode():
    with pytest.raises(ValueError):
        code_distance(codes.steane(), "guess")
