"""Phase-tracked arithmetic in the Majorana group Maj(2n).

A string on n complex modes is a length-2n binary vector in the interleaved
order (g_1, g'_1, g_2, g'_2, ...) together with a phase i^k, k in {0,1,2,3}.
The operator it denotes is i^k times the product of the selected Majorana
operators written in ascending index order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def suffix_counts(v: np.ndarray) -> np.ndarray:
    """c[k] = number of ones of v strictly after position k (along last axis)."""
    v = np.asarray(v, dtype=np.int64)
    total = np.cumsum(v[..., ::-1], axis=-1)[..., ::-1]
    return total - v


def sign_exponent(a: np.ndarray, b: np.ndarray) -> np.ndarray | int:
    """Exponent e (mod 2) with (prod a)(prod b) = (-1)^e prod(a xor b).

    Each Majorana of b is moved left past every Majorana of a sitting at a
    strictly larger index; the coinciding pair then squares to one.
    Broadcasts over leading axes of ``a`` and ``b``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return (suffix_counts(a) * b).sum(axis=-1) & 1


def hermitian_phase(v) -> int:
    """i-exponent that makes i^k * (ordered product over v) Hermitian."""
    w = int(np.count_nonzero(v))
    return (w * (w - 1) // 2) % 4


def commutes_vec(a, b) -> bool:
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    pa = int(np.count_nonzero(a)) & 1
    pb = int(np.count_nonzero(b)) & 1
    ov = int(np.count_nonzero(a & b)) & 1
    return ((pa & pb) ^ ov) == 0


@dataclass(frozen=True)
class MajoranaString:
    vector: np.ndarray
    phase: int = 0

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.uint8).reshape(-1)
        if v.size % 2:
            raise ValueError("Majorana vector length must be even (2n)")
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def identity(cls, n: int) -> "MajoranaString":
        return cls(np.zeros(2 * n, dtype=np.uint8), 0)

    @classmethod
    def hermitian(cls, vector, sign: int = 1) -> "MajoranaString":
        """The Hermitian string on ``vector`` with canonical phase, times sign (+-1)."""
        v = np.asarray(vector, dtype=np.uint8)
        return cls(v, hermitian_phase(v) + (0 if sign > 0 else 2))

    @classmethod
    def from_modes(cls, n: int, gammas=(), gamma_primes=(), phase: int = 0) -> "MajoranaString":
        v = np.zeros(2 * n, dtype=np.uint8)
        for j in gammas:
            v[2 * j] ^= 1
        for j in gamma_primes:
            v[2 * j + 1] ^= 1
        return cls(v, phase)

    @property
    def n(self) -> int:
        return self.vector.size // 2

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.vector))

    @property
    def parity(self) -> int:
        return self.weight & 1

    def is_hermitian(self) -> bool:
        return self.phase == hermitian_phase(self.vector) or self.phase == (hermitian_phase(self.vector) + 2) % 4

    def sign(self) -> int:
        """+1/-1 relative to the canonical Hermitian phase; 0 if not Hermitian."""
        d = (self.phase - hermitian_phase(self.vector)) % 4
        return {0: 1, 2: -1}.get(d, 0)

    def __mul__(self, other: "MajoranaString") -> "MajoranaString":
        return mul(self, other)

    def __neg__(self) -> "MajoranaString":
        return MajoranaString(self.vector, self.phase + 2)

    def scaled(self, k: int) -> "MajoranaString":
        """Multiply by i^k."""
        return MajoranaString(self.vector, self.phase + k)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MajoranaString)
            and self.phase == other.phase
            and np.array_equal(self.vector, other.vector)
        )

    def __hash__(self) -> int:
        return hash((self.vector.tobytes(), self.phase))

    def __repr__(self) -> str:
        names = []
        for k in np.flatnonzero(self.vector):
            j, prime = divmod(int(k), 2)
            names.append(f"g{j}'" if prime else f"g{j}")
        ph = ["", "i*", "-", "-i*"][self.phase]
        return f"MajoranaString({ph}{' '.join(names) or 'I'})"


def mul(a: MajoranaString, b: MajoranaString) -> MajoranaString:
    if a.vector.size != b.vector.size:
        raise ValueError("length mismatch")
    e = int(sign_exponent(a.vector, b.vector))
    return MajoranaString(a.vector ^ b.vector, a.phase + b.phase + 2 * e)


def commutes(a: MajoranaString, b: MajoranaString) -> bool:
    if a.vector.size != b.vector.size:
        raise ValueError("length mismatch")
    return commutes_vec(a.vector, b.vector)


def is_hermitian_phase(v) -> int:
    """Phase (as a complex unit) making the ordered product over v Hermitian."""
    return [1, 1j, -1, -1j][hermitian_phase(v)]


def interleave(gamma_part, gamma_prime_part) -> np.ndarray:
    """Length-2n vector from separate gamma / gamma' support vectors."""
    g = np.asarray(gamma_part, dtype=np.uint8)
    gp = np.asarray(gamma_prime_part, dtype=np.uint8)
    out = np.zeros(2 * g.size, dtype=np.uint8)
    out[0::2] = g
    out[1::2] = gp
    return out


def split(v) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(v, dtype=np.uint8)
    return v[0::2].copy(), v[1::2].copy()


def product(strings) -> MajoranaString:
    it = iter(strings)
    acc = next(it)
    for s in it:
        acc = mul(acc, s)
    return acc


def commutation_form(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix of anticommutation bits between rows of X and rows of Y."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    ov = X @ Y.T
    px = X.sum(axis=1) & 1
    py = Y.sum(axis=1) & 1
    return ((ov + np.outer(px, py)) & 1).astype(np.uint8)
