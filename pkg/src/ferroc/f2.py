"""Exact linear algebra over GF(2).

Matrices and vectors are plain numpy ``uint8`` arrays holding 0/1 entries.
Elimination runs on a bit-packed copy (64 columns per ``uint64`` word) so a
row operation is a handful of word XORs regardless of the column count.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

BinMatrix = np.ndarray
BinVector = np.ndarray

# sparse row-index input is densified above this fill fraction; below it the
# matrix is still densified (the codes here are small), the threshold only
# decides whether a sanity pass over duplicate indices is needed
SPARSE_FILL_THRESHOLD = 0.05


def as_matrix(M, cols: int | None = None) -> BinMatrix:
    """Coerce a dense array or a list of sparse row-index lists to uint8 0/1."""
    if isinstance(M, np.ndarray):
        if M.ndim == 1:
            M = M[None, :]
        return (M.astype(np.int64) & 1).astype(np.uint8)
    rows = list(M)
    if rows and all(isinstance(r, (list, tuple, set, frozenset)) for r in rows):
        if cols is None:
            cols = 1 + max((max(r) for r in rows if len(r)), default=-1)
        out = np.zeros((len(rows), cols), dtype=np.uint8)
        for i, r in enumerate(rows):
            for j in r:
                out[i, j] ^= 1
        return out
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    return (arr & 1).astype(np.uint8)


def weight(v) -> int:
    return int(np.count_nonzero(v))


def dot(u, v) -> int:
    return int(np.count_nonzero(np.asarray(u, dtype=np.uint8) & np.asarray(v, dtype=np.uint8)) & 1)


def matmul(A, B) -> BinMatrix:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64) & 1).astype(np.uint8)


def pack(M: BinMatrix) -> np.ndarray:
    """Pack rows of a 0/1 matrix into little-endian uint64 words."""
    M = np.ascontiguousarray(M, dtype=np.uint8)
    m, n = M.shape
    nwords = max(1, (n + 63) // 64)
    padded = np.zeros((m, nwords * 64), dtype=np.uint8)
    padded[:, :n] = M
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").copy()


def unpack(P: np.ndarray, n: int) -> BinMatrix:
    bytes_ = np.ascontiguousarray(P).view(np.uint8)
    return np.unpackbits(bytes_, axis=1, bitorder="little")[:, :n].copy()


def _rref_packed(P: np.ndarray, ncols: int, pivot_limit: int | None = None):
    """In-place reduced row echelon form on packed rows.

    Pivots are taken at the first nonzero entry in each column, scanning
    columns left to right; only columns ``< pivot_limit`` may hold pivots.
    """
    m = P.shape[0]
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        w, b = divmod(c, 64)
        bit = np.uint64(1) << np.uint64(b)
        col = (P[r:, w] & bit) != 0
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            P[[r, p]] = P[[p, r]]
        hits = np.flatnonzero((P[:, w] & bit) != 0)
        hits = hits[hits != r]
        if hits.size:
            P[hits] ^= P[r]
        pivots.append(c)
        r += 1
    return pivots


def rref(M, pivot_limit: int | None = None) -> tuple[BinMatrix, list[int]]:
    """Reduced row echelon form; returns the full-height matrix and pivot columns."""
    M = as_matrix(M)
    n = M.shape[1]
    P = pack(M)
    piv = _rref_packed(P, n, pivot_limit)
    return unpack(P, n), piv


def rank(M) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return len(_rref_packed(pack(M), M.shape[1]))


def row_basis(M) -> BinMatrix:
    """Independent rows spanning the row space (reduced echelon rows)."""
    R, piv = rref(M)
    return R[: len(piv)]


def independent_rows(M) -> list[int]:
    """Indices of a greedy (first-come) maximal independent subset of rows."""
    M = as_matrix(M)
    m, n = M.shape
    # eliminate on the transpose: pivot columns of M^T are independent rows of M
    _, piv = rref(M.T.copy()) if m else (None, [])
    return list(piv)


def kernel_basis(M) -> list[BinVector]:
    """Basis of {v : M v = 0}; size is cols - rank."""
    M = as_matrix(M)
    m, n = M.shape
    R, piv = rref(M)
    free = [c for c in range(n) if c not in set(piv)]
    out = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for i, pc in enumerate(piv):
            if R[i, f]:
                v[pc] = 1
        out.append(v)
    return out


def solve(M, b) -> BinVector | None:
    """One solution x of M x = b, or None if inconsistent."""
    M = as_matrix(M)
    b = np.asarray(b, dtype=np.uint8).reshape(-1)
    m, n = M.shape
    if b.size != m:
        raise ValueError(f"rhs length {b.size} != rows {m}")
    aug = np.concatenate([M, b[:, None]], axis=1)
    R, piv = rref(aug, pivot_limit=n)
    r = len(piv)
    if np.any(R[r:, n]):
        return None
    x = np.zeros(n, dtype=np.uint8)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return x


def solve_left(M, v) -> BinVector | None:
    """Coefficients c with c @ M = v (v as combination of rows of M), or None."""
    M = as_matrix(M)
    v = np.asarray(v, dtype=np.uint8).reshape(-1)
    if v.size != M.shape[1]:
        raise ValueError(f"vector length {v.size} != cols {M.shape[1]}")
    return solve(M.T.copy(), v)


def in_image(M, v) -> bool:
    """True iff v is a GF(2) combination of the rows of M."""
    M = as_matrix(M)
    v = np.asarray(v, dtype=np.uint8).reshape(-1)
    if v.size != M.shape[1]:
        raise ValueError(f"vector length {v.size} != cols {M.shape[1]}")
    if not v.any():
        return True
    if M.shape[0] == 0:
        return False
    return rank(np.vstack([M, v])) == rank(M)


def quotient_basis(kernel: Sequence[BinVector] | BinMatrix, image_rows) -> list[BinVector]:
    """Coset representatives spanning span(kernel) / rowspace(image_rows).

    Kernel vectors are taken in order; a vector is kept when it is
    independent of the image rows plus the representatives kept so far.
    """
    K = as_matrix(np.asarray(kernel)) if len(kernel) else None
    I = as_matrix(image_rows)
    if K is None:
        return []
    n = K.shape[1]
    if I.size and I.shape[1] != n:
        raise ValueError("kernel and image have different lengths")
    rk_k = rank(K)
    if I.size and rank(np.vstack([K, I])) != rk_k:
        raise ValueError("image rows are not contained in the kernel span")
    basis = row_basis(I) if I.size else np.zeros((0, n), dtype=np.uint8)
    P = pack(basis) if basis.shape[0] else np.zeros((0, (n + 63) // 64 or 1), dtype="<u8")
    current = basis.shape[0]
    out: list[BinVector] = []
    for v in K:
        trial = np.vstack([P, pack(v[None, :])]) if P.shape[0] else pack(v[None, :])
        if len(_rref_packed(trial.copy(), n)) > current:
            out.append(v.copy())
            P = trial
            current += 1
    return out


def span_equal(U, V) -> bool:
    U = as_matrix(U)
    V = as_matrix(V)
    ru, rv = rank(U), rank(V)
    return ru == rv == rank(np.vstack([U, V]))


def iter_span(basis: Sequence[BinVector]) -> Iterable[BinVector]:
    """All 2^k combinations of ``basis`` in Gray-code order (small k only)."""
    k = len(basis)
    if k == 0:
        return
    n = basis[0].size
    v = np.zeros(n, dtype=np.uint8)
    yield v.copy()
    for i in range(1, 1 << k):
        bit = (i & -i).bit_length() - 1
        v ^= basis[bit]
        yield v.copy()


def span_matrix(basis: Sequence[BinVector] | BinMatrix) -> BinMatrix:
    """Matrix whose rows are all 2^k combinations (vectorized Gray enumeration)."""
    B = as_matrix(np.asarray(basis))
    k, n = B.shape
    coeffs = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)
    return (coeffs @ B.astype(np.int64) & 1).astype(np.uint8)


# ---------------------------------------------------------------- f2m v1 I/O


def write_f2m(M: BinMatrix, fh) -> None:
    M = as_matrix(M)
    fh.write(f"{M.shape[0]} {M.shape[1]}\n")
    for row in M:
        fh.write(" ".join(str(int(j)) for j in np.flatnonzero(row)) + "\n")
    fh.write("\n")


def dumps_f2m(M: BinMatrix) -> str:
    import io

    buf = io.StringIO()
    write_f2m(M, buf)
    return buf.getvalue()


def read_f2m(fh) -> BinMatrix:
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError("f2m header must be 'rows cols'")
    m, n = int(header[0]), int(header[1])
    out = np.zeros((m, n), dtype=np.uint8)
    for i in range(m):
        line = fh.readline()
        if line == "":
            raise ValueError(f"f2m truncated at row {i}")
        idx = [int(t) for t in line.split()]
        if any(j < 0 or j >= n for j in idx):
            raise ValueError(f"f2m row {i} has a column index out of range")
        if idx != sorted(set(idx)):
            raise ValueError(f"f2m row {i} indices must be strictly ascending")
        out[i, idx] = 1
    return out


def loads_f2m(text: str) -> BinMatrix:
    import io

    return read_f2m(io.StringIO(text))
