"""Odd-weight logical Majorana operators of a self-dual CSS code.

The logical space of A is ker(A)/im(A^T). Orthonormalizing a basis of it
over F2 (inner product u.v mod 2) yields odd-weight representatives with
pairwise even overlap; each becomes one logical complex fermion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import f2
from .codes import FermionCode


@dataclass
class LogicalSet:
    gamma_vectors: list[np.ndarray]
    leftover_even: list[np.ndarray] = field(default_factory=list)

    @property
    def k_f(self) -> int:
        return len(self.gamma_vectors)


def gram_matrix(basis) -> np.ndarray:
    B = np.asarray(basis, dtype=np.int64)
    if B.size == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    return (B @ B.T & 1).astype(np.uint8)


def extract_odd(basis) -> LogicalSet:
    """Greedy F2 orthonormalization.

    While some remaining vector b has odd weight (b.b = 1), take the first
    such vector, output it, and replace every other remaining b' by
    b' + (b'.b) b. Whatever is left has even self-overlap.
    """
    rest = [np.asarray(v, dtype=np.uint8).copy() for v in basis]
    out: list[np.ndarray] = []
    while True:
        idx = next((i for i, v in enumerate(rest) if int(v.sum()) & 1), None)
        if idx is None:
            break
        b = rest.pop(idx)
        for i, v in enumerate(rest):
            if f2.dot(v, b):
                rest[i] = v ^ b
        out.append(b)
    return LogicalSet(out, rest)


def orthonormalizable(G) -> bool:
    """True iff some invertible P gives P G P^T = I.

    Runs the same greedy update as ``extract_odd`` on the Gram form itself:
    pick a basis element with G_ii = 1, project it out of the others, and
    fail if a nonempty residue with all-zero diagonal remains.
    """
    G = f2.as_matrix(np.asarray(G))
    if G.shape[0] != G.shape[1] or not np.array_equal(G, G.T):
        raise ValueError("Gram matrix must be square and symmetric")
    G = G.astype(np.uint8).copy()
    alive = list(range(G.shape[0]))
    while alive:
        piv = next((i for i in alive if G[i, i]), None)
        if piv is None:
            return False
        alive.remove(piv)
        for i in alive:
            if G[i, piv]:
                # b_i <- b_i + b_piv updates row/column i of the form
                G[i, :] ^= G[piv, :]
                G[:, i] ^= G[:, piv]
    return True


def logical_basis(A) -> list[np.ndarray]:
    """Coset representatives of ker(A)/rowspace(A)."""
    A = f2.as_matrix(A)
    return f2.quotient_basis(f2.kernel_basis(A), A)


def pair_into_fermions(code: FermionCode, odd: LogicalSet) -> FermionCode:
    """Install each odd vector as the support of both gamma_bar_j and gamma'_bar_j."""
    return code.with_logicals(odd.gamma_vectors, odd.leftover_even)


def attach_logicals(code: FermionCode) -> FermionCode:
    return pair_into_fermions(code, extract_odd(logical_basis(code.A)))


def logical_strings(code: FermionCode, j: int, offset: int = 0, total_modes: int | None = None):
    """(gamma_bar_j, gamma'_bar_j) as Hermitian MajoranaStrings.

    ``offset`` places the code's modes starting at that mode index inside a
    register of ``total_modes`` modes.
    """
    from .majorana import MajoranaString

    n = code.n
    N = total_modes or n + offset
    v = code.logicals[j]
    g = np.zeros(2 * N, dtype=np.uint8)
    gp = np.zeros(2 * N, dtype=np.uint8)
    g[2 * (offset + np.flatnonzero(v))] = 1
    gp[2 * (offset + np.flatnonzero(v)) + 1] = 1
    return MajoranaString.hermitian(g), MajoranaString.hermitian(gp)


# ----------------------------------------------------------- weight reduction


def coset_min(v, A, exact_rank_limit: int = 20) -> np.ndarray:
    """Lowest-weight vector in v + rowspace(A).

    Exhaustive when rank(A) is at most ``exact_rank_limit``, otherwise an
    exact mixed-integer program.
    """
    from .distance import coset_min_milp

    v = np.asarray(v, dtype=np.uint8)
    R = f2.row_basis(A)
    if R.shape[0] <= exact_rank_limit:
        best = v.copy()
        bw = int(v.sum())
        lo = f2.span_matrix(R[:14]) if R.shape[0] else np.zeros((1, v.size), dtype=np.uint8)
        hi = list(R[14:])
        for h in f2.iter_span(hi) if hi else [np.zeros_like(v)]:
            cand = lo ^ (v ^ h)[None, :]
            w = cand.sum(axis=1)
            i = int(np.argmin(w))
            if w[i] < bw:
                bw, best = int(w[i]), cand[i].copy()
        return best
    return coset_min_milp(v, R)


def minimize_logicals(code: FermionCode) -> FermionCode:
    """Replace each logical by a minimum-weight representative of its coset.

    Adding rows of A keeps every pairwise overlap (A is self-orthogonal and
    logicals lie in ker A), so the set stays orthonormal.
    """
    new = [coset_min(v, code.A) for v in code.logicals]
    return code.with_logicals(new, code.leftover_even)


def min_weight_odd_logical(code: FermionCode) -> np.ndarray:
    """An odd-weight vector of minimum weight in ker(A) (never in im A)."""
    from .distance import min_weight_kernel_vector

    return min_weight_kernel_vector(code.A, parity=1)


def with_leading_logical(code: FermionCode, u) -> FermionCode:
    """Re-extract logicals so that u (odd, in ker A) becomes logical 0.

    The remaining logicals are the old ones orthogonalized against u and
    reduced modulo each other by the same greedy update.
    """
    u = np.asarray(u, dtype=np.uint8)
    if not (int(u.sum()) & 1) or f2.matmul(code.A, u[:, None]).any():
        raise ValueError("leading logical must be an odd kernel vector")
    basis = [u] + list(code.logicals) + list(code.leftover_even)
    # drop the basis vector that u makes dependent
    keep = f2.quotient_basis(np.vstack([np.array(basis), code.A]), code.A)
    odd = extract_odd(keep)
    if not np.array_equal(odd.gamma_vectors[0], u):
        raise AssertionError("leading logical not preserved")
    return pair_into_fermions(code, odd)
