"""Minimum-weight searches over binary vector spaces.

Three engines share one problem shape: find the lowest-weight x in a space
C (given by parity constraints or a basis) that lies outside a subspace G.

* exhaustive enumeration of C, for dim C up to ~24;
* an exact 0/1 integer program (one solve per functional separating C from
  G), using scipy's HiGHS interface;
* randomized information-set search, an upper bound.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import f2

EXHAUSTIVE_DIM_LIMIT = 24


def _mod2_program(M, b, extra=None, time_limit: float | None = None):
    """min sum(x) over binary x with M x = b (mod 2); ``extra`` = (row, rhs) pairs."""
    M = f2.as_matrix(M)
    rows = [r for r in M]
    rhs = list(np.asarray(b, dtype=np.int64).reshape(-1))
    for r, val in extra or []:
        rows.append(np.asarray(r, dtype=np.uint8))
        rhs.append(int(val))
    m = len(rows)
    n = M.shape[1]
    R = np.array(rows, dtype=np.float64).reshape(m, n)
    # M x - 2 t = b with integer t in [0, floor(row weight / 2)]
    cap = np.floor(R.sum(axis=1) / 2)
    Acon = np.concatenate([R, -2.0 * np.eye(m)], axis=1)
    c = np.concatenate([np.ones(n), np.zeros(m)])
    lb = np.zeros(n + m)
    ub = np.concatenate([np.ones(n), cap])
    integrality = np.ones(n + m)
    rhs = np.array(rhs, dtype=np.float64)
    opts = {"disp": False}
    if time_limit:
        opts["time_limit"] = time_limit
    res = milp(c, constraints=LinearConstraint(Acon, rhs, rhs), integrality=integrality,
               bounds=Bounds(lb, ub), options=opts)
    if res.x is None:
        return None
    x = np.round(res.x[:n]).astype(np.uint8)
    if res.status != 0:
        raise RuntimeError(f"integer program did not reach optimality: {res.message}")
    return x


def coset_min_milp(v, R) -> np.ndarray:
    """Lowest-weight vector of v + rowspace(R), via x = v + R^T y."""
    v = np.asarray(v, dtype=np.uint8)
    # constraints: x lies in v + rowspace(R)  <=>  K x = K v for K spanning R^perp
    K = np.array(f2.kernel_basis(R), dtype=np.uint8).reshape(-1, v.size)
    if K.shape[0] == 0:
        return np.zeros_like(v)
    return _mod2_program(K, f2.matmul(K, v[:, None]).reshape(-1))


def min_weight_kernel_vector(A, parity: int | None = None) -> np.ndarray:
    """Lowest-weight nonzero x with A x = 0, optionally of fixed weight parity."""
    A = f2.as_matrix(A)
    n = A.shape[1]
    if parity is not None:
        x = _mod2_program(A, np.zeros(A.shape[0]), extra=[(np.ones(n, dtype=np.uint8), parity)])
        if x is None:
            raise ValueError("no kernel vector of the requested parity")
        return x
    best = None
    for j in range(n):
        e = np.zeros(n, dtype=np.uint8)
        e[j] = 1
        x = _mod2_program(A, np.zeros(A.shape[0]), extra=[(e, 1)])
        if x is not None and (best is None or x.sum() < best.sum()):
            best = x
    if best is None:
        raise ValueError("kernel is trivial")
    return best


# ------------------------------------------------------------------ engines


def exhaustive_min_outside(C_basis, G_rows) -> tuple[int, np.ndarray | None]:
    """Exact min weight of span(C_basis) minus rowspace(G_rows) by enumeration."""
    C = np.asarray(C_basis, dtype=np.uint8)
    if C.ndim == 1:
        C = C[None, :]
    k = C.shape[0]
    if k > EXHAUSTIVE_DIM_LIMIT:
        raise ValueError(f"exhaustive search over dimension {k} exceeds budget {EXHAUSTIVE_DIM_LIMIT}")
    n = C.shape[1]
    G = f2.as_matrix(G_rows, cols=n) if len(G_rows) else np.zeros((0, n), dtype=np.uint8)
    # functionals separating C from G: ell in G^perp not vanishing on C
    ells = _separating_functionals(C, G)
    if ells.shape[0] == 0:
        return 0, None
    best_w, best = n + 1, None
    lo_dim = min(k, 16)
    lo = f2.span_matrix(C[:lo_dim])
    lo_tag = f2.matmul(lo, ells.T)
    lo_w = lo.sum(axis=1)
    for h in f2.iter_span(list(C[lo_dim:])) if k > lo_dim else [np.zeros(n, dtype=np.uint8)]:
        if h.any():
            cand = lo ^ h[None, :]
            w = cand.sum(axis=1)
            tag = lo_tag ^ f2.matmul(h[None, :], ells.T)
        else:
            cand, w, tag = lo, lo_w, lo_tag
        ok = tag.any(axis=1)
        if ok.any():
            i = int(np.flatnonzero(ok)[np.argmin(w[ok])])
            if w[i] < best_w:
                best_w, best = int(w[i]), cand[i].copy()
    return best_w, best


def _separating_functionals(C, G) -> np.ndarray:
    """Basis of functionals in G^perp, modulo those vanishing on span(C)."""
    n = C.shape[1]
    Gp = np.array(f2.kernel_basis(G), dtype=np.uint8).reshape(-1, n) if G.shape[0] else np.eye(n, dtype=np.uint8)
    if Gp.shape[0] == 0:
        return Gp
    # keep functionals whose restriction to C is independent
    restr = f2.matmul(Gp, C.T)
    idx = f2.independent_rows(restr)
    return Gp[idx]


def milp_min_outside(constraints, G_rows, n: int, time_limit: float | None = None) -> tuple[int, np.ndarray | None]:
    """Exact min weight of {x : constraints x = 0} minus rowspace(G_rows)."""
    M = f2.as_matrix(constraints, cols=n) if len(constraints) else np.zeros((0, n), dtype=np.uint8)
    C = np.array(f2.kernel_basis(M), dtype=np.uint8).reshape(-1, n) if M.shape[0] else np.eye(n, dtype=np.uint8)
    G = f2.as_matrix(G_rows, cols=n) if len(G_rows) else np.zeros((0, n), dtype=np.uint8)
    ells = _separating_functionals(C, G)
    best_w, best = n + 1, None
    for ell in ells:
        x = _mod2_program(M, np.zeros(M.shape[0]), extra=[(ell, 1)], time_limit=time_limit)
        if x is not None and int(x.sum()) < best_w:
            best_w, best = int(x.sum()), x
    if best is None:
        return 0, None
    return best_w, best


def random_min_outside(C_basis, G_rows, trials: int, seed: int = 0) -> tuple[int, np.ndarray | None]:
    """Randomized information-set upper bound on min weight of span(C) minus G.

    Each trial permutes coordinates, brings the basis of C to reduced echelon
    form on the permuted order and inspects the resulting low-weight rows
    and pairwise sums.
    """
    C = np.asarray(C_basis, dtype=np.uint8)
    if C.ndim == 1:
        C = C[None, :]
    n = C.shape[1]
    G = f2.as_matrix(G_rows, cols=n) if len(G_rows) else np.zeros((0, n), dtype=np.uint8)
    ells = _separating_functionals(C, G)
    if ells.shape[0] == 0:
        return 0, None
    rng = np.random.default_rng(seed)
    best_w, best = n + 1, None
    for _ in range(trials):
        perm = rng.permutation(n)
        R, piv = f2.rref(C[:, perm])
        R = R[: len(piv)]
        cand = np.zeros_like(R)
        cand[:, perm] = R
        pairs = cand[:, None, :] ^ cand[None, :, :]
        allc = np.concatenate([cand, pairs.reshape(-1, n)], axis=0)
        ok = f2.matmul(allc, ells.T).any(axis=1)
        if not ok.any():
            continue
        w = allc.sum(axis=1)
        i = int(np.flatnonzero(ok)[np.argmin(w[ok])])
        if w[i] < best_w:
            best_w, best = int(w[i]), allc[i].copy()
    return best_w, best


# ------------------------------------------------------------- code distance


def code_distance(code, mode: str = "exact", budget: int = 1000, seed: int = 0) -> int:
    """Minimum weight of a nontrivial logical of a self-dual code.

    The logical space is ker(A) minus rowspace(A) (binary, one sector).
    ``exact`` enumerates when dim ker(A) is small and otherwise solves
    integer programs; ``randomized`` returns an information-set upper bound.
    """
    A = code.A
    K = np.array(f2.kernel_basis(A), dtype=np.uint8)
    if mode == "exact":
        if K.shape[0] <= EXHAUSTIVE_DIM_LIMIT:
            return exhaustive_min_outside(K, A)[0]
        return milp_min_outside(A, A, A.shape[1])[0]
    if mode == "randomized":
        return random_min_outside(K, A, budget, seed)[0]
    raise ValueError(f"unknown mode {mode!r}")


def random_logical_upper_bound(code, trials: int, seed: int = 0) -> int:
    return code_distance(code, "randomized", trials, seed)
