"""Exact Fock-space simulation on 2^n amplitudes, used as a verification oracle.

Basis state |x> has mode j occupied iff bit j of x is set. Creation and
annihilation carry the usual fermionic sign (-1)^(occupied modes below j).
"""

from __future__ import annotations

import numpy as np

from .majorana import MajoranaString

MAX_MODES = 10


class Fock:
    def __init__(self, n: int):
        if n > MAX_MODES:
            raise ValueError(f"dense oracle limited to n <= {MAX_MODES} modes")
        self.n = n
        self.dim = 1 << n
        x = np.arange(self.dim)
        self.occ = [((x >> j) & 1).astype(np.int64) for j in range(n)]
        below = np.zeros(self.dim, dtype=np.int64)
        self.jw = []
        for j in range(n):
            self.jw.append(np.where(below & 1, -1, 1))
            below = below + self.occ[j]
        self.index = x

    # single-mode operators acting on a vector
    def c(self, j: int, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        src = self.occ[j] == 1
        out[self.index[src] ^ (1 << j)] = (self.jw[j][src] * psi[src])
        return out

    def cdag(self, j: int, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        src = self.occ[j] == 0
        out[self.index[src] ^ (1 << j)] = (self.jw[j][src] * psi[src])
        return out

    def gamma(self, k: int, psi: np.ndarray) -> np.ndarray:
        """Majorana index k in interleaved order (2j = g_j, 2j+1 = g'_j)."""
        j, prime = divmod(k, 2)
        if prime:
            return 1j * (self.c(j, psi) - self.cdag(j, psi))
        return self.c(j, psi) + self.cdag(j, psi)

    def apply_string(self, s: MajoranaString, psi: np.ndarray) -> np.ndarray:
        out = psi.astype(complex)
        for k in np.flatnonzero(s.vector)[::-1]:
            out = self.gamma(int(k), out)
        return (1j**s.phase) * out

    def matrix(self, s: MajoranaString) -> np.ndarray:
        eye = np.eye(self.dim, dtype=complex)
        return np.stack([self.apply_string(s, eye[:, b]) for b in range(self.dim)], axis=1)

    def number(self, j: int, psi: np.ndarray) -> np.ndarray:
        return self.occ[j] * psi

    def hop(self, j: int, k: int, psi: np.ndarray) -> np.ndarray:
        return self.cdag(j, self.c(k, psi)) + self.cdag(k, self.c(j, psi))

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1
        return psi

    def basis(self, occupations) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[sum(1 << j for j, o in enumerate(occupations) if o)] = 1
        return psi


# -------------------------------------------------------------------- gates


def gate_gamma(F: Fock, j, psi):
    return F.gamma(2 * j, psi)


def gate_gamma_prime(F: Fock, j, psi):
    return F.gamma(2 * j + 1, psi)


def gate_z(F: Fock, j, psi):
    return (1 - 2 * F.occ[j]) * psi


def gate_s(F: Fock, j, psi):
    return np.where(F.occ[j] == 1, 1j, 1) * psi


def gate_sdag(F: Fock, j, psi):
    return np.where(F.occ[j] == 1, -1j, 1) * psi


def gate_braid(F: Fock, j, k, psi):
    # exp(i pi/2 h) = 1 - h^2 + i h, since h^3 = h
    h = F.hop(j, k, psi)
    return psi - F.hop(j, k, h) + 1j * h


def gate_fswap(F: Fock, j, k, psi):
    return psi - F.number(j, psi) - F.number(k, psi) + F.hop(j, k, psi)


def gate_string(F: Fock, s: MajoranaString, psi):
    """Apply a unitary Majorana string (Hermitian string times its phase)."""
    return F.apply_string(s, psi)


def gate_rotation(F: Fock, P: MajoranaString, angle: float, psi):
    """exp(i angle P) for a Hermitian string P with P^2 = 1."""
    return np.cos(angle) * psi + 1j * np.sin(angle) * F.apply_string(P, psi)


def expectation(F: Fock, O: MajoranaString, psi) -> float:
    return float(np.real(np.vdot(psi, F.apply_string(O, psi))))


def measure(F: Fock, O: MajoranaString, psi, rng) -> tuple[int, np.ndarray]:
    """Projective measurement of a Hermitian, squaring-to-one string."""
    Opsi = F.apply_string(O, psi)
    plus = 0.5 * (psi + Opsi)
    p_plus = float(np.real(np.vdot(plus, plus)))
    if rng.random() < p_plus:
        return 1, plus / np.sqrt(p_plus)
    minus = psi - plus
    return -1, minus / np.linalg.norm(minus)


def run_circuit(n: int, circuit, seed: int = 0, state=None):
    """Run a list of instructions (see ``ferroc.circuit``) on a dense state.

    Returns (final state vector, outcome trace dict register -> +-1).
    """
    from .circuit import execute_dense

    F = Fock(n)
    psi = F.vacuum() if state is None else np.asarray(state, dtype=complex)
    rng = np.random.default_rng(seed)
    return execute_dense(F, circuit, psi, rng)
