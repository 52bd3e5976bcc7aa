"""Majorana stabilizer tableau.

A state on n modes is stored as m <= n commuting, independent, Hermitian
even-weight Majorana strings: a binary matrix X (m x 2n) in the interleaved
order and a phase exponent per row (string = i^phase * ordered product).

Every gate in the set {gamma, gamma', Z, S, fSWAP, Braid, D} maps strings to
strings under conjugation. Single strings act by sign flips; the others are
products of quarter rotations exp(i s pi/4 P) with P a Hermitian weight-2
string, under which an anticommuting generator g becomes i s P g.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import f2
from .majorana import MajoranaString, hermitian_phase, suffix_counts

DEBUG_CHECKS = False


def _anticommute_rows(X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of X anticommuting with the string on v."""
    idx = np.flatnonzero(v)
    # observables are sparse, so gather their columns instead of a full product
    ov = np.bitwise_xor.reduce(X[:, idx], axis=1) if idx.size else np.zeros(X.shape[0], dtype=np.uint8)
    if idx.size & 1:
        ov = ov ^ (np.bitwise_xor.reduce(X, axis=1))
    return ov.astype(bool)


def _mode_vec(n: int, idx) -> np.ndarray:
    v = np.zeros(2 * n, dtype=np.uint8)
    for k in idx:
        v[k] ^= 1
    return v


@dataclass
class Tableau:
    """Stabilizer generators, plus destabilizers for pure states.

    ``D`` (optional, rebuilt on demand) holds one string per generator with
    D_i anticommuting with generator j exactly when i = j. Its phases are
    never needed, so only the supports are kept. With it, a deterministic
    outcome costs one matrix-vector product instead of an elimination.
    """

    X: np.ndarray
    phase: np.ndarray
    D: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.uint8)
        if self.X.ndim != 2 or self.X.shape[1] % 2:
            raise ValueError("tableau matrix must be m x 2n")
        self.phase = np.asarray(self.phase, dtype=np.int64).reshape(-1) % 4

    # ------------------------------------------------------------ builders

    @classmethod
    def vacuum(cls, n: int) -> "Tableau":
        X = np.zeros((n, 2 * n), dtype=np.uint8)
        X[np.arange(n), 2 * np.arange(n)] = 1
        X[np.arange(n), 2 * np.arange(n) + 1] = 1
        D = np.zeros_like(X)
        D[np.arange(n), 2 * np.arange(n)] = 1
        return cls(X, np.ones(n, dtype=np.int64), D)  # +i g g'

    @classmethod
    def from_strings(cls, strings) -> "Tableau":
        strings = list(strings)
        if not strings:
            raise ValueError("need at least one generator")
        X = np.array([s.vector for s in strings], dtype=np.uint8)
        ph = np.array([s.phase for s in strings], dtype=np.int64)
        tab = cls(X, ph)
        tab.check()
        return tab

    def copy(self) -> "Tableau":
        return Tableau(self.X.copy(), self.phase.copy(), None if self.D is None else self.D.copy())

    def _destabilizers(self) -> np.ndarray | None:
        """Supports D with D G^T = I (generators are even, so the commutation
        form against them is the plain overlap parity); None if mixed."""
        if self.D is None and self.m == self.n:
            m, n2 = self.X.shape
            R, piv = f2.rref(np.hstack([self.X, np.eye(m, dtype=np.uint8)]), pivot_limit=n2)
            if len(piv) != m:
                raise ValueError("generators are dependent")
            D = np.zeros((m, n2), dtype=np.uint8)
            D[:, piv] = R[:m, n2:].T
            self.D = D
        return self.D

    @property
    def n(self) -> int:
        return self.X.shape[1] // 2

    @property
    def m(self) -> int:
        return self.X.shape[0]

    def row(self, i: int) -> MajoranaString:
        return MajoranaString(self.X[i].copy(), int(self.phase[i]))

    def strings(self) -> list[MajoranaString]:
        return [self.row(i) for i in range(self.m)]

    def direct_sum(self, other: "Tableau") -> "Tableau":
        """State on self's modes followed by other's modes (product state)."""
        n1, n2 = self.n, other.n
        X = np.zeros((self.m + other.m, 2 * (n1 + n2)), dtype=np.uint8)
        X[: self.m, : 2 * n1] = self.X
        X[self.m:, 2 * n1:] = other.X
        # other's Majoranas all follow self's, so ordered products keep their phase
        D = None
        if self.D is not None and other.D is not None:
            D = np.zeros_like(X)
            D[: self.m, : 2 * n1] = self.D
            D[self.m:, 2 * n1:] = other.D
        return Tableau(X, np.concatenate([self.phase, other.phase]), D)

    # ------------------------------------------------------------ invariants

    def violations(self) -> list[str]:
        out = []
        w = self.X.sum(axis=1)
        for i in np.flatnonzero(w & 1):
            out.append(f"generator {int(i)} has odd weight")
        for i in range(self.m):
            h = hermitian_phase(self.X[i])
            if (self.phase[i] - h) % 2:
                out.append(f"generator {int(i)} is not Hermitian")
        C = (self.X.astype(np.int64) @ self.X.T.astype(np.int64)) & 1
        for i, j in zip(*np.nonzero(np.triu(C, 1))):
            out.append(f"generators {int(i)} and {int(j)} anticommute")
        if f2.rank(self.X) != self.m:
            out.append("generators are dependent")
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise ValueError("invalid tableau: " + "; ".join(bad[:4]))

    def _debug(self):
        if DEBUG_CHECKS:
            self.check()

    # ------------------------------------------------------------ row algebra

    def _mul_rows_into(self, targets: np.ndarray, src_vec: np.ndarray, src_phase: int, left: bool = False):
        """Row_t <- Row_t * S (or S * Row_t when left=True) for each target t."""
        if targets.size == 0:
            return
        T = self.X[targets]
        if left:
            e = (suffix_counts(src_vec) * T.astype(np.int64)).sum(axis=1) & 1
        else:
            e = (suffix_counts(T) * src_vec.astype(np.int64)).sum(axis=1) & 1
        self.phase[targets] = (self.phase[targets] + src_phase + 2 * e) % 4
        self.X[targets] = T ^ src_vec

    # ------------------------------------------------------------ gates

    def apply_string(self, v, phase: int | None = None) -> None:
        """Conjugate by a single Majorana string on support v (gamma, gamma', Z, D, errors)."""
        v = np.asarray(v, dtype=np.uint8)
        mask = _anticommute_rows(self.X, v)
        self.phase[mask] = (self.phase[mask] + 2) % 4

    def apply_rotation(self, v, s: int) -> None:
        """Conjugate by exp(i s pi/4 P), P the Hermitian even string on v, s = +-1.

        Weight-2 P gives the elementary gates; a logical parity string gives
        the logical S on a code block.
        """
        v = np.asarray(v, dtype=np.uint8)
        mask = np.flatnonzero(_anticommute_rows(self.X, v))
        # g -> i s P g
        self._mul_rows_into(mask, v, hermitian_phase(v) + (1 if s > 0 else 3), left=True)
        if self.D is not None:
            self.D[_anticommute_rows(self.D, v)] ^= v
        self._debug()

    def gamma(self, j: int) -> None:
        self.apply_string(_mode_vec(self.n, [2 * j]))

    def gamma_prime(self, j: int) -> None:
        self.apply_string(_mode_vec(self.n, [2 * j + 1]))

    def z(self, j: int) -> None:
        self.apply_string(_mode_vec(self.n, [2 * j, 2 * j + 1]))

    def s(self, j: int) -> None:
        """S = exp(i pi/2 n_j): gamma_j -> -gamma'_j, gamma'_j -> gamma_j."""
        self.apply_rotation(_mode_vec(self.n, [2 * j, 2 * j + 1]), -1)

    def s_dag(self, j: int) -> None:
        self.apply_rotation(_mode_vec(self.n, [2 * j, 2 * j + 1]), +1)

    def braid(self, j: int, k: int) -> None:
        """exp(i pi/2 (c_j^dag c_k + c_k^dag c_j))."""
        self._check_pair(j, k)
        # the two commuting quarter rotations generated by i g'_j g_k and i g'_k g_j
        self._rot_pair(2 * j + 1, 2 * k, +1)
        self._rot_pair(2 * k + 1, 2 * j, +1)

    def fswap(self, j: int, k: int) -> None:
        """Fermionic swap of modes j and k."""
        self._check_pair(j, k)
        self.braid(j, k)
        self.s_dag(j)
        self.s_dag(k)

    def _rot_pair(self, a: int, b: int, s: int) -> None:
        """exp(i s pi/4 * (i g_a g_b)) with the operator product in the written order."""
        v = _mode_vec(self.n, [a, b])
        # i g_a g_b equals the canonical Hermitian string i g_min g_max when a < b,
        # and its negative when a > b
        self.apply_rotation(v, s if a < b else -s)

    def _check_pair(self, j: int, k: int) -> None:
        if j == k or not (0 <= j < self.n and 0 <= k < self.n):
            raise ValueError(f"invalid mode pair ({j}, {k})")

    # ------------------------------------------------------------ measurement

    def _validate_observable(self, obs: MajoranaString) -> None:
        if obs.vector.size != 2 * self.n:
            raise ValueError("observable length does not match the tableau")
        if obs.parity:
            raise ValueError("observable has odd weight")
        if obs.sign() == 0:
            raise ValueError("observable is not Hermitian")

    def _solve_product(self, v: np.ndarray):
        """Coefficients c with sum c_i X_i = v, or None."""
        D = self._destabilizers()
        if D is not None:
            # a pure state's group is maximal: a commuting string always lies in it
            return _anticommute_rows(D, v).astype(np.uint8)
        return f2.solve(self.X.T.copy(), v)

    def _product_phase(self, coeffs: np.ndarray) -> tuple[np.ndarray, int]:
        """Support and phase of the ordered product of the selected generators."""
        sel = np.flatnonzero(coeffs)
        if sel.size == 0:
            return np.zeros(self.X.shape[1], dtype=np.uint8), 0
        Xs = self.X[sel]
        cum = np.bitwise_xor.accumulate(Xs, axis=0)
        prev = np.vstack([np.zeros((1, Xs.shape[1]), dtype=np.uint8), cum[:-1]])
        e = int((suffix_counts(prev) * Xs).sum() & 1)
        return cum[-1].copy(), int(self.phase[sel].sum() + 2 * e) % 4

    def expectation(self, obs: MajoranaString) -> int:
        """+1/-1 if +-obs is in the stabilizer group, 0 otherwise."""
        self._validate_observable(obs)
        if _anticommute_rows(self.X, obs.vector).any():
            return 0
        c = self._solve_product(obs.vector)
        if c is None:
            return 0
        _, ph = self._product_phase(c)
        d = (ph - obs.phase) % 4
        if d == 0:
            return 1
        if d == 2:
            return -1
        raise AssertionError("stabilizer product phase is not real relative to observable")

    def expectations(self, strings) -> np.ndarray:
        """Batched ``expectation`` for many observables (one elimination).

        The phase of a product of generators is bilinear in the selected
        rows, so all observables are resolved with matrix products.
        """
        strings = list(strings)
        if not strings:
            return np.zeros(0, dtype=np.int64)
        for s in strings:
            self._validate_observable(s)
        V = np.array([s.vector for s in strings], dtype=np.uint8)
        obs_ph = np.array([s.phase for s in strings], dtype=np.int64)
        n2, m = self.X.shape[1], self.m

        def mm(a, b):
            # exact 0/1 products through BLAS (counts stay far below 2^53)
            return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) & 1

        par = np.outer(V.sum(axis=1, dtype=np.int64) & 1, self.X.sum(axis=1, dtype=np.int64) & 1)
        anti = (mm(V, self.X.T) ^ par).any(axis=1)
        D = self._destabilizers()
        if D is not None:
            C = mm(V, D.T)
        else:
            R, piv = f2.rref(np.hstack([self.X, np.eye(m, dtype=np.uint8)]), pivot_limit=n2)
            C = mm(V[:, piv], R[: len(piv), n2:])
        inspan = (mm(C, self.X) == V).all(axis=1)
        K = np.triu(mm(suffix_counts(self.X), self.X.T), 1)
        e = (mm(C, K) * C).sum(axis=1) & 1
        d = (C @ self.phase + 2 * e - obs_ph) % 4
        out = np.where(d == 0, 1, -1)
        ok = inspan & ~anti
        if (d[ok] % 2).any():
            raise AssertionError("stabilizer product phase is not real relative to observable")
        return np.where(ok, out, 0)

    def measure(self, obs: MajoranaString, rng, forced: int | None = None) -> int:
        """Projectively measure a Hermitian even string; returns +1 or -1.

        ``forced`` selects the outcome of a random measurement (used to
        sweep feedback branches); deterministic outcomes ignore it.
        """
        self._validate_observable(obs)
        anti = np.flatnonzero(_anticommute_rows(self.X, obs.vector))
        if anti.size == 0:
            val = self.expectation(obs)
            if val == 0:
                # obs commutes with an incomplete generator set: extend the group
                out = forced if forced is not None else (1 if rng.random() < 0.5 else -1)
                self.X = np.vstack([self.X, obs.vector[None, :]])
                self.phase = np.append(self.phase, obs.phase + (0 if out > 0 else 2)) % 4
                self.D = None
                return out
            return val
        p = int(anti[0])
        others = anti[1:]
        gp = self.X[p].copy()
        self._mul_rows_into(others, gp, int(self.phase[p]))
        if self.D is not None:
            hit = _anticommute_rows(self.D, obs.vector)
            hit[p] = False
            self.D[hit] ^= gp
            self.D[p] = gp
        out = forced if forced is not None else (1 if rng.random() < 0.5 else -1)
        self.X[p] = obs.vector
        self.phase[p] = (obs.phase + (0 if out > 0 else 2)) % 4
        self._debug()
        return out

    # ------------------------------------------------------------ registers

    def extend(self, k: int) -> None:
        """Append k modes in the vacuum state."""
        n = self.n
        X = np.zeros((self.m + k, 2 * (n + k)), dtype=np.uint8)
        X[: self.m, : 2 * n] = self.X
        for t in range(k):
            X[self.m + t, 2 * (n + t)] = 1
            X[self.m + t, 2 * (n + t) + 1] = 1
        if self.D is not None:
            D = np.zeros_like(X)
            D[: self.m, : 2 * n] = self.D
            for t in range(k):
                D[self.m + t, 2 * (n + t)] = 1
            self.D = D
        self.X = X
        self.phase = np.concatenate([self.phase, np.ones(k, dtype=np.int64)])

    def discard_modes(self, modes) -> None:
        """Remove modes that are in a definite occupation state.

        The number operators of the discarded modes must be in the
        stabilizer group (e.g. after measuring them).
        """
        modes = sorted(set(int(j) for j in modes))
        n = self.n
        for j in modes:
            z = MajoranaString.hermitian(_mode_vec(n, [2 * j, 2 * j + 1]))
            val = self.expectation(z)
            if val == 0:
                raise ValueError(f"mode {j} is entangled with the rest; measure it first")
            hit = np.flatnonzero(self.X[:, 2 * j] | self.X[:, 2 * j + 1])
            if hit.size:
                self._mul_rows_into(hit, z.vector, z.phase + (0 if val > 0 else 2))
        keep_cols = np.ones(2 * n, dtype=bool)
        for j in modes:
            keep_cols[2 * j] = keep_cols[2 * j + 1] = False
        X = self.X[:, keep_cols]
        nz = X.any(axis=1)
        X, ph = X[nz], self.phase[nz]
        idx = f2.independent_rows(X)
        self.X = X[idx].copy()
        self.phase = ph[idx].copy()
        self.D = None
        self._debug()

    def permute_modes(self, order) -> None:
        """Relabel modes: new mode t is old mode order[t].

        Only valid as a pure relabeling of the register; callers use it for
        modes that are bookkeeping positions, not physical swaps.
        """
        order = list(order)
        cols = np.array([[2 * j, 2 * j + 1] for j in order]).reshape(-1)
        Xn = self.X[:, cols]
        # reordering the operator product changes the phase of each row
        ph = (self.phase + 2 * _reorder_signs(Xn, cols)) % 4
        self.X, self.phase = Xn, ph
        if self.D is not None:
            self.D = np.ascontiguousarray(self.D[:, cols])


def _reorder_signs(Xn: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Per row, parity of the permutation sorting its Majoranas into the new order.

    Row i of ``Xn`` is in the new order; ``cols[t]`` is the old index at new
    position t. The parity counts pairs that appear in the opposite order.
    """
    inv = np.triu(cols[:, None] > cols[None, :], 1).astype(np.float32)
    Xf = Xn.astype(np.float32)
    return (np.rint(((Xf @ inv) * Xf).sum(axis=1)).astype(np.int64)) & 1


# ------------------------------------------------------------------ code states


def embed(v: np.ndarray, sector: int, offset: int, total: int) -> np.ndarray:
    """Place a binary support vector on one Majorana sector (0 = gamma, 1 = gamma')."""
    out = np.zeros(2 * total, dtype=np.uint8)
    out[2 * (offset + np.flatnonzero(v)) + sector] = 1
    return out


def stabilizer_strings(code, offset: int = 0, total: int | None = None) -> list[MajoranaString]:
    """Independent +1 stabilizers of a code: rows of A in both sectors."""
    total = total or code.n + offset
    rows = code.A[f2.independent_rows(code.A)]
    out = []
    for sector in (0, 1):
        for r in rows:
            out.append(MajoranaString.hermitian(embed(r, sector, offset, total)))
    return out


def logical_pair(code, j: int, offset: int = 0, total: int | None = None):
    total = total or code.n + offset
    v = code.logicals[j]
    return (MajoranaString.hermitian(embed(v, 0, offset, total)),
            MajoranaString.hermitian(embed(v, 1, offset, total)))


def logical_parity(code, j: int, offset: int = 0, total: int | None = None) -> MajoranaString:
    """i gamma_bar_j gamma'_bar_j; equals 1 - 2 n_bar_j."""
    g, gp = logical_pair(code, j, offset, total)
    return (g * gp).scaled(1)


def logical_state_generators(code, which: str = "vacuum", occupations=None,
                             offset: int = 0, total: int | None = None) -> list[MajoranaString]:
    """Signed logical generators fixing a product state of the logical fermions.

    ``vacuum`` fixes every n_bar_j (to ``occupations`` if given, else 0).
    ``plus`` fixes i gamma_bar_a gamma_bar_b and i gamma'_bar_a gamma'_bar_b
    for consecutive pairs (a, b); an unpaired last logical gets n_bar = 0.
    """
    k = code.k_f
    out = []
    if which == "vacuum":
        occ = list(occupations) if occupations is not None else [0] * k
        for j in range(k):
            z = logical_parity(code, j, offset, total)
            out.append(-z if occ[j] else z)
    elif which == "plus":
        for a in range(0, k - 1, 2):
            ga, gpa = logical_pair(code, a, offset, total)
            gb, gpb = logical_pair(code, a + 1, offset, total)
            out.append((ga * gb).scaled(1))
            out.append((gpa * gpb).scaled(1))
        if k % 2:
            out.append(logical_parity(code, k - 1, offset, total))
    else:
        raise ValueError(f"unknown logical state {which!r}")
    return out


def _complete(strings: list[MajoranaString], candidates, n: int) -> list[MajoranaString]:
    """Greedily add commuting independent candidates until n generators."""
    X = np.array([s.vector for s in strings], dtype=np.uint8).reshape(-1, 2 * n)
    r = f2.rank(X)
    for c in candidates:
        if r == n:
            break
        if _anticommute_rows(X, c.vector).any():
            continue
        Y = np.vstack([X, c.vector[None, :]])
        if f2.rank(Y) > r:
            strings.append(c)
            X, r = Y, r + 1
    return strings


def init_product_state(code, which: str = "vacuum", occupations=None) -> Tableau:
    """Code stabilizers plus logical generators; unpaired even logicals fixed to +1."""
    if code.k_f < 1:
        raise ValueError("code has no logical fermions")
    n = code.n
    gens = stabilizer_strings(code) + logical_state_generators(code, which, occupations)
    extra = []
    for u in code.leftover_even:
        for sector in (0, 1):
            extra.append(MajoranaString.hermitian(embed(u, sector, 0, n)))
    gens = _complete(gens, extra, n)
    if len(gens) != n:
        raise ValueError(f"could not complete the state: {len(gens)} of {n} generators")
    return Tableau.from_strings(gens)
