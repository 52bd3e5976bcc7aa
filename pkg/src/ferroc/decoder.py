"""Belief propagation with ordered-statistics post-processing (BP+OSD).

Each Majorana sector of a fermionic code is decoded independently with the
same binary check matrix A. BP is sum-product in the log-likelihood-ratio
domain. OSD then solves for an estimate on the most likely-to-be-flipped
information set and sweeps low-weight flips of the remaining bits; the
lightest syndrome-consistent candidate is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from . import f2
from .majorana import MajoranaString, interleave

_LLR_CLIP = 30.0


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder settings.

    Attributes:
        bp_iters: Maximum BP iterations.
        bp_schedule: "serial" (check-layered) or "parallel" (flooding).
        osd_order: Combination-sweep depth; 0 means plain OSD-0.
        prior: Per-bit error probability for the channel LLRs.
    """

    bp_iters: int = 50
    bp_schedule: str = "serial"
    osd_order: int = 7
    prior: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.prior < 0.5:
            raise ValueError("prior must lie in (0, 0.5)")
        if self.bp_iters < 1:
            raise ValueError("bp_iters must be >= 1")
        if self.osd_order < 0:
            raise ValueError("osd_order must be >= 0")
        if self.bp_schedule not in ("serial", "parallel"):
            raise ValueError("bp_schedule must be 'serial' or 'parallel'")


@dataclass
class DecodeResult:
    error_estimate: np.ndarray
    converged: bool
    iterations_used: int
    used_osd: bool = False


# ------------------------------------------------------------------ kernels


@numba.njit(cache=True)
def _bp_kernel(chk_ptr, chk_var, var_ptr, var_edge, n, syndrome, llr0, max_iter, serial):
    m = chk_ptr.size - 1
    E = chk_var.size
    R = np.zeros(E)  # check -> variable messages, indexed by edge
    post = llr0.copy()
    hard = np.zeros(n, np.uint8)
    for it in range(1, max_iter + 1):
        if serial:
            for c in range(m):
                a, b = chk_ptr[c], chk_ptr[c + 1]
                prod = 1.0
                nz = 0
                for e in range(a, b):
                    t = post[chk_var[e]] - R[e]
                    th = np.tanh(0.5 * t)
                    if th == 0.0:
                        nz += 1
                    else:
                        prod *= th
                sgn = -1.0 if syndrome[c] else 1.0
                for e in range(a, b):
                    v = chk_var[e]
                    t = post[v] - R[e]
                    th = np.tanh(0.5 * t)
                    if th == 0.0:
                        ex = prod if nz == 1 else 0.0
                    else:
                        ex = 0.0 if nz > 0 else prod / th
                    if ex > 0.999999999999:
                        ex = 0.999999999999
                    elif ex < -0.999999999999:
                        ex = -0.999999999999
                    r = sgn * 2.0 * np.arctanh(ex)
                    post[v] = t + r
                    R[e] = r
        else:
            newR = np.empty(E)
            for c in range(m):
                a, b = chk_ptr[c], chk_ptr[c + 1]
                sgn = -1.0 if syndrome[c] else 1.0
                for e in range(a, b):
                    ex = 1.0
                    for f in range(a, b):
                        if f != e:
                            ex *= np.tanh(0.5 * (post[chk_var[f]] - R[f]))
                    if ex > 0.999999999999:
                        ex = 0.999999999999
                    elif ex < -0.999999999999:
                        ex = -0.999999999999
                    newR[e] = sgn * 2.0 * np.arctanh(ex)
            R[:] = newR
            for v in range(n):
                s = llr0[v]
                for k in range(var_ptr[v], var_ptr[v + 1]):
                    s += R[var_edge[k]]
                post[v] = s
        for v in range(n):
            hard[v] = 1 if post[v] < 0.0 else 0
        ok = True
        for c in range(m):
            acc = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                acc ^= hard[chk_var[e]]
            if acc != syndrome[c]:
                ok = False
                break
        if ok:
            return post, hard, True, it
    return post, hard, False, max_iter


@numba.njit(cache=True)
def _osd_kernel(H, syndrome, order_cols, osd_order):
    m, n = H.shape
    M = np.empty((m, n), np.uint8)
    for j in range(n):
        M[:, j] = H[:, order_cols[j]]
    s = syndrome.copy()
    pivots = np.full(m, -1, np.int64)
    is_piv = np.zeros(n, np.uint8)
    r = 0
    for j in range(n):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if M[i, j]:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(n):
                tmp = M[r, k]
                M[r, k] = M[p, k]
                M[p, k] = tmp
            tmp = s[r]
            s[r] = s[p]
            s[p] = tmp
        for i in range(m):
            if i != r and M[i, j]:
                for k in range(n):
                    M[i, k] ^= M[r, k]
                s[i] ^= s[r]
        pivots[r] = j
        is_piv[j] = 1
        r += 1
    for i in range(r, m):
        if s[i]:
            return np.zeros(n, np.uint8), False
    free = np.empty(n - r, np.int64)
    t = 0
    for j in range(n):
        if not is_piv[j]:
            free[t] = j
            t += 1
    # base solution and combination sweep over the non-pivot set
    best_w = 0
    for i in range(r):
        best_w += s[i]
    best_a = -1
    best_b = -1
    if osd_order > 0:
        for x in range(free.size):
            ja = free[x]
            w = 1
            for i in range(r):
                w += s[i] ^ M[i, ja]
            if w < best_w:
                best_w, best_a, best_b = w, ja, -1
        lim = min(osd_order, free.size)
        for x in range(lim):
            for y in range(x + 1, lim):
                ja = free[x]
                jb = free[y]
                w = 2
                for i in range(r):
                    w += s[i] ^ M[i, ja] ^ M[i, jb]
                if w < best_w:
                    best_w, best_a, best_b = w, ja, jb
    e_perm = np.zeros(n, np.uint8)
    if best_a >= 0:
        e_perm[best_a] = 1
    if best_b >= 0:
        e_perm[best_b] = 1
    for i in range(r):
        v = s[i]
        if best_a >= 0:
            v ^= M[i, best_a]
        if best_b >= 0:
            v ^= M[i, best_b]
        e_perm[pivots[i]] = v
    e = np.zeros(n, np.uint8)
    for j in range(n):
        e[order_cols[j]] = e_perm[j]
    return e, True


# ------------------------------------------------------------------ API


class Decoder:
    """BP+OSD decoder bound to one check matrix and configuration.

    Decoding is a pure function of the syndrome, so results are memoized.
    """

    def __init__(self, A, cfg: DecoderConfig | None = None, cache_size: int = 200_000):
        self.A = np.ascontiguousarray(f2.as_matrix(A), dtype=np.uint8)
        self.cfg = cfg or DecoderConfig()
        m, n = self.A.shape
        rows, cols = np.nonzero(self.A)
        self.chk_ptr = np.zeros(m + 1, dtype=np.int64)
        np.add.at(self.chk_ptr, rows + 1, 1)
        self.chk_ptr = np.cumsum(self.chk_ptr)
        self.chk_var = cols.astype(np.int64)
        order = np.argsort(cols, kind="stable")
        self.var_edge = order.astype(np.int64)
        self.var_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.var_ptr, cols + 1, 1)
        self.var_ptr = np.cumsum(self.var_ptr)
        p = self.cfg.prior
        self.llr0 = np.full(n, np.log((1 - p) / p))
        self._cache: dict[bytes, DecodeResult] = {}
        self._cache_size = cache_size

    def bp(self, syndrome):
        s = np.ascontiguousarray(syndrome, dtype=np.uint8)
        if s.size != self.A.shape[0]:
            raise ValueError(f"syndrome length {s.size} != {self.A.shape[0]} checks")
        return self._bp_with(s, self.cfg.bp_schedule == "serial")

    def osd(self, syndrome, marginals, order: int | None = None) -> np.ndarray:
        order = self.cfg.osd_order if order is None else order
        # most likely flipped bits first (lowest LLR); stable for determinism
        cols = np.argsort(np.asarray(marginals), kind="stable").astype(np.int64)
        e, ok = _osd_kernel(self.A, np.ascontiguousarray(syndrome, dtype=np.uint8), cols, order)
        if not ok:
            raise ValueError("syndrome is not in the column space of the check matrix")
        return e

    def _bp_with(self, s, serial: bool):
        return _bp_kernel(self.chk_ptr, self.chk_var, self.var_ptr, self.var_edge, self.A.shape[1],
                          s, self.llr0, self.cfg.bp_iters, serial)

    def decode(self, syndrome) -> DecodeResult:
        """BP, then OSD on the BP posteriors; the lighter estimate wins.

        If the configured schedule does not converge, the other schedule is
        tried as well and its candidates join the comparison. Every candidate
        reproduces the syndrome, so the choice is purely by Hamming weight.
        """
        s = np.ascontiguousarray(syndrome, dtype=np.uint8)
        if s.size != self.A.shape[0]:
            raise ValueError(f"syndrome length {s.size} != {self.A.shape[0]} checks")
        key = s.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not s.any():
            res = DecodeResult(np.zeros(self.A.shape[1], dtype=np.uint8), True, 1)
        else:
            serial = self.cfg.bp_schedule == "serial"
            post, hard, conv, it = self._bp_with(s, serial)
            cands = [(hard.copy(), False)] if conv else []
            cands.append((self.osd(s, post), True))
            if not conv:
                post2, hard2, conv2, _ = self._bp_with(s, not serial)
                if conv2:
                    cands.append((hard2.copy(), False))
                cands.append((self.osd(s, post2), True))
            est, used = min(cands, key=lambda c: int(c[0].sum()))
            res = DecodeResult(est, bool(conv), int(it), used_osd=used)
        if len(self._cache) < self._cache_size:
            self._cache[key] = res
        return res


def bp(A, syndrome, cfg: DecoderConfig):
    """Soft marginals (posterior LLRs), hard estimate, convergence flag, iterations."""
    post, hard, conv, it = Decoder(A, cfg).bp(syndrome)
    return post, hard, bool(conv), int(it)


def osd(A, syndrome, marginals, order: int) -> DecodeResult:
    e = Decoder(A, DecoderConfig(osd_order=order)).osd(syndrome, marginals, order)
    return DecodeResult(e, False, 0, used_osd=True)


def sector_prior(p: float) -> float:
    """Per-sector flip probability: gamma alone (p/3) or i gamma gamma' (p/3)."""
    return min(max(2.0 * p / 3.0, 1e-9), 0.499)


@dataclass
class FermionDecoder:
    """Two independent sector decoders sharing one check matrix."""

    A: np.ndarray
    p: float
    cfg: DecoderConfig = field(default_factory=DecoderConfig)

    def __post_init__(self):
        cfg = DecoderConfig(self.cfg.bp_iters, self.cfg.bp_schedule, self.cfg.osd_order, sector_prior(self.p))
        # one decoder object per sector so neither sees the other's syndrome
        self.gamma = Decoder(self.A, cfg)
        self.gamma_prime = Decoder(self.A, cfg)

    def decode(self, syn_gamma, syn_gamma_prime) -> tuple[np.ndarray, np.ndarray]:
        return self.gamma.decode(syn_gamma).error_estimate, self.gamma_prime.decode(syn_gamma_prime).error_estimate


def decode_fermionic(code, syn_gamma, syn_gamma_prime, p: float, cfg: DecoderConfig | None = None) -> MajoranaString:
    """Correction string from two independently decoded sectors."""
    dec = FermionDecoder(code.A, p, cfg or DecoderConfig())
    eg, egp = dec.decode(syn_gamma, syn_gamma_prime)
    return MajoranaString.hermitian(interleave(eg, egp))
