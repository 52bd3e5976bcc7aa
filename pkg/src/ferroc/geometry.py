"""Galois fields GF(p^s) and the finite geometries EG(m, q) and PG(2, q)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Conway polynomials, coefficients from x^0 up to the monic leading term.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
}


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^s; raises ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            s, r = 0, q
            while r % p == 0:
                r //= p
                s += 1
            if r != 1 or not _is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, s
    raise ValueError(f"{q} is not a prime power")  # pragma: no cover


@dataclass(frozen=True)
class GaloisField:
    """GF(p^s) with elements encoded as integers whose base-p digits are
    polynomial coefficients in the primitive element alpha."""

    p: int
    s: int
    primitive_poly: tuple[int, ...]
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.s

    def alpha_pow(self, t: int) -> int:
        return int(self.exp[t % (self.q - 1)])

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        out, scale = 0, 1
        while a or b:
            out += ((a % self.p + b % self.p) % self.p) * scale
            a //= self.p
            b //= self.p
            scale *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        out, scale = 0, 1
        while a:
            out += ((-(a % self.p)) % self.p) * scale
            a //= self.p
            scale *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def elements(self) -> range:
        return range(self.q)


def make_field(p: int, s: int) -> GaloisField:
    """Build GF(p^s) from the pinned Conway polynomial for (p, s)."""
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if s < 1:
        raise ValueError("exponent s must be >= 1")
    if (p, s) not in CONWAY:
        raise ValueError(f"no primitive polynomial configured for ({p},{s})")
    poly = CONWAY[(p, s)]
    q = p**s
    # element <-> coefficient vector (c_0 .. c_{s-1}); x^s = -(c_0 + ... + c_{s-1} x^{s-1})
    reduce_ = [(-c) % p for c in poly[:s]]
    exp = np.zeros(q - 1, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    coeffs = [0] * s
    coeffs[0] = 1
    if s == 1:
        # degree-1 Conway poly x + c has root -c
        root = (-poly[0]) % p
        val = 1
        for t in range(q - 1):
            exp[t] = val
            val = (val * root) % p
    else:
        for t in range(q - 1):
            exp[t] = sum(c * p**i for i, c in enumerate(coeffs))
            top = coeffs[-1]
            coeffs = [0] + coeffs[:-1]
            coeffs = [(coeffs[i] + top * reduce_[i]) % p for i in range(s)]
    for t in range(q - 1):
        if log[exp[t]] != -1:
            raise ValueError(f"polynomial for ({p},{s}) is not primitive")
        log[exp[t]] = t
    return GaloisField(p, s, poly, exp, log)


@dataclass
class LineSet:
    """Point sets of lines with an equivalence-class id per line.

    Points are indices 0..N-1; for EG these are the nonzero elements of
    GF(q^m) in alpha-power order (point t is alpha^t)."""

    lines: list[tuple[int, ...]]
    class_id: list[int]
    num_points: int

    @property
    def num_classes(self) -> int:
        return 1 + max(self.class_id) if self.class_id else 0


def eg_lines(m: int, q: int, include_origin: bool = False):
    """Lines of EG(m, q) not through the origin, grouped into alpha-orbits.

    With ``include_origin=True`` returns every line (as sets of field
    elements, 0 = origin) without class structure, for counting checks.
    """
    if m < 2:
        raise ValueError("EG requires m >= 2")
    p, s = prime_power(q)
    F = make_field(p, s * m)
    Q = F.q
    # subfield GF(q) inside GF(q^m): 0 and powers of alpha^((Q-1)/(q-1))
    step = (Q - 1) // (q - 1)
    sub = [0] + [F.alpha_pow(step * t) for t in range(q - 1)]
    seen: set[tuple[int, ...]] = set()
    for ej in range(Q):
        for ek in range(1, Q):
            pts = tuple(sorted({F.add(ej, F.mul(b, ek)) for b in sub}))
            seen.add(pts)
    if include_origin:
        return sorted(seen)
    lines_el = [L for L in seen if 0 not in L]
    # convert field elements to point indices (log)
    as_idx = {tuple(sorted(int(F.log[e]) for e in L)) for L in lines_el}
    N = Q - 1
    remaining = set(as_idx)
    lines: list[tuple[int, ...]] = []
    cls: list[int] = []
    c = 0
    for L in sorted(as_idx):
        if L not in remaining:
            continue
        orbit = []
        cur = L
        for _ in range(N):
            orbit.append(cur)
            cur = tuple(sorted((x + 1) % N for x in cur))
        if len(set(orbit)) != N:
            raise ValueError("alpha-orbit of an origin-free line has unexpected size")
        for Lk in orbit:
            remaining.discard(Lk)
            lines.append(Lk)
            cls.append(c)
        c += 1
    return LineSet(lines, cls, N)


def _normalized_triples(F: GaloisField) -> list[tuple[int, int, int]]:
    out = []
    q = F.q
    for x in range(q):
        for y in range(q):
            for z in range(q):
                v = (x, y, z)
                if v == (0, 0, 0):
                    continue
                lead = next(c for c in v if c)
                if lead == 1:
                    out.append(v)
    return sorted(out)


def pg_points(q: int) -> list[tuple[int, int, int]]:
    p, s = prime_power(q)
    return _normalized_triples(make_field(p, s))


def pg_incidence(q: int) -> np.ndarray:
    """Point-line incidence B of PG(2, q), q = 2^s; B[i, j] = 1 iff point i on line j."""
    p, s = prime_power(q)
    if p != 2:
        raise ValueError("pg_incidence requires q a power of 2")
    F = make_field(p, s)
    pts = _normalized_triples(F)
    N = len(pts)
    B = np.zeros((N, N), dtype=np.uint8)
    for j, (a, b, c) in enumerate(pts):
        for i, (x, y, z) in enumerate(pts):
            if F.add(F.add(F.mul(a, x), F.mul(b, y)), F.mul(c, z)) == 0:
                B[i, j] = 1
    return B
