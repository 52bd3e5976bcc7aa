"""Fermionic lattice surgery: merged codes that measure i gamma_A gamma_B.

Two constructions are provided. ``method1_merge`` joins a logical of any code
to the bottom-boundary logical of a triangular color code of equal weight,
reusing the color code's boundary plaquettes. ``method2_merge`` joins any two
odd logicals and takes its gauge stabilizers from the cycle space of an
auxiliary graph.

Register layout: the modes of A, then the modes of B, then ancilla modes.
Each ancilla mode places its gamma and its gamma' in one measurement
stabilizer each, and every modified or gauge stabilizer touches ancillas only
through whole number operators i gamma_m gamma'_m, so all of them are +1 on
the code state with ancillas in the vacuum.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import f2
from .codes import FermionCode
from .majorana import MajoranaString, commutation_form, product
from .sim import Tableau, embed


@dataclass(frozen=True)
class AncillaMode:
    """One ancilla complex fermion.

    Attributes:
        side: "a" (attached to a check of A), "b" (check of B) or "p"
            (parity fix for an odd measurement stabilizer).
        check: Index of the associated check (row of the code's matrix);
            for padding ancillas next to unused plaquettes it is the slot
            number past the touched checks, and -1 for parity ancillas.
        positions: Positions on the logical line of the gamma and gamma'
            Majoranas (measurement indices for parity ancillas).
        meas: Measurement stabilizers holding the gamma and the gamma'.
        mode: Global mode index in the merged register.
    """

    side: str
    check: int
    positions: tuple[int, int]
    meas: tuple[int, int]
    mode: int


@dataclass
class SurgeryGraph:
    """Measurement, ancilla and modified vertices with their cycle basis.

    ``kinds[v]`` is "measurement", "ancilla" or "modified"; ``labels[v]`` is
    the measurement index, the (mode, primed) Majorana, or the ancilla mode.
    """

    kinds: list[str]
    labels: list
    edges: list[tuple[int, int]]
    cycle_basis: list[list[int]] = field(default_factory=list)

    @property
    def n_vertices(self) -> int:
        return len(self.kinds)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def cycle_rank(self) -> int:
        return self.n_edges - self.n_vertices + 1


@dataclass
class MergedCode:
    code_a: FermionCode
    code_b: FermionCode
    logical_a: int
    logical_b: int
    method: int
    ancillas: list[AncillaMode]
    modified: list[MajoranaString]
    modified_origin: list[tuple[str, tuple[int, ...]]]
    measurement: list[MajoranaString]
    gauge: list[MajoranaString]
    untouched: list[MajoranaString]
    removed: list[MajoranaString]
    joint: MajoranaString
    joint_sign: int = 1
    joint_gauges: list[int] = field(default_factory=list)
    graph: SurgeryGraph | None = None

    @property
    def n_a(self) -> int:
        return self.code_a.n

    @property
    def n_b(self) -> int:
        return self.code_b.n

    @property
    def n_ancilla(self) -> int:
        return len(self.ancillas)

    @property
    def n_modes(self) -> int:
        return self.n_a + self.n_b + self.n_ancilla

    def stabilizers(self) -> list[MajoranaString]:
        return self.modified + self.measurement + self.gauge + self.untouched

    def measurement_data(self, i: int) -> np.ndarray:
        """Support of M_i restricted to the data modes of A and B."""
        v = self.measurement[i].vector.copy()
        v[2 * (self.n_a + self.n_b):] = 0
        return v

    def logical_count(self) -> int:
        """Logical complex fermions of the merged stabilizer group."""
        X = np.array([s.vector for s in self.stabilizers()], dtype=np.uint8)
        return self.n_modes - f2.rank(X)

    def to_dict(self) -> dict:
        def enc(strings):
            return [{"support": [int(k) for k in np.flatnonzero(s.vector)], "phase": s.phase} for s in strings]

        def code(c: FermionCode):
            return {
                "name": c.name,
                "n": c.n,
                "checks": [[int(k) for k in np.flatnonzero(r)] for r in c.A],
                "logicals": [[int(k) for k in np.flatnonzero(v)] for v in c.logicals],
                "boundary": c.boundary,
            }

        return {
            "format": "merged v1",
            "method": self.method,
            "code_a": code(self.code_a),
            "code_b": code(self.code_b),
            "logical_a": self.logical_a,
            "logical_b": self.logical_b,
            "n_modes": self.n_modes,
            "ancillas": [
                {"side": a.side, "check": a.check, "positions": list(a.positions), "meas": list(a.meas), "mode": a.mode}
                for a in self.ancillas
            ],
            "modified": enc(self.modified),
            "modified_origin": [[o[0], list(o[1])] for o in self.modified_origin],
            "measurement": enc(self.measurement),
            "gauge": enc(self.gauge),
            "untouched": enc(self.untouched),
            "removed": enc(self.removed),
            "joint": enc([self.joint])[0],
            "joint_sign": self.joint_sign,
            "joint_gauges": list(self.joint_gauges),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MergedCode":
        if d.get("format") != "merged v1":
            raise ValueError("not a merged-code document")
        N = int(d["n_modes"])

        def dec(items):
            out = []
            for it in items:
                v = np.zeros(2 * N, dtype=np.uint8)
                v[it["support"]] = 1
                out.append(MajoranaString(v, it["phase"]))
            return out

        def code(c):
            A = f2.as_matrix(c["checks"], cols=c["n"]) if c["checks"] else np.zeros((0, c["n"]), dtype=np.uint8)
            logs = [f2.as_matrix([s], cols=c["n"])[0] for s in c["logicals"]]
            return FermionCode(A, logicals=logs, family_tag={"name": c["name"]}, boundary=c.get("boundary"))

        return cls(
            code_a=code(d["code_a"]),
            code_b=code(d["code_b"]),
            logical_a=int(d["logical_a"]),
            logical_b=int(d["logical_b"]),
            method=int(d["method"]),
            ancillas=[AncillaMode(a["side"], a["check"], tuple(a["positions"]), tuple(a["meas"]), a["mode"])
                      for a in d["ancillas"]],
            modified=dec(d["modified"]),
            modified_origin=[(o[0], tuple(o[1])) for o in d["modified_origin"]],
            measurement=dec(d["measurement"]),
            gauge=dec(d["gauge"]),
            untouched=dec(d["untouched"]),
            removed=dec(d["removed"]),
            joint=dec([d["joint"]])[0],
            joint_sign=int(d["joint_sign"]),
            joint_gauges=list(d["joint_gauges"]),
        )


# ------------------------------------------------------------------ helpers


class _Register:
    """Accumulates ancilla modes for a merge; strings are built at the end."""

    def __init__(self, a: FermionCode, b: FermionCode):
        self.a, self.b = a, b
        self.ancillas: list[AncillaMode] = []

    @property
    def data_modes(self) -> int:
        return self.a.n + self.b.n

    def new_mode(self, side: str, check: int, positions, meas) -> AncillaMode:
        anc = AncillaMode(side, check, tuple(int(p) for p in positions), tuple(int(m) for m in meas),
                          self.data_modes + len(self.ancillas))
        self.ancillas.append(anc)
        return anc

    @property
    def N(self) -> int:
        return self.data_modes + len(self.ancillas)

    def check_string(self, side: str, row: int) -> MajoranaString:
        code, off = (self.a, 0) if side == "A" else (self.b, self.a.n)
        return MajoranaString.hermitian(embed(code.A[row], 0, off, self.N))

    def number(self, anc: AncillaMode) -> MajoranaString:
        v = np.zeros(2 * self.N, dtype=np.uint8)
        v[2 * anc.mode] = v[2 * anc.mode + 1] = 1
        return MajoranaString.hermitian(v)  # +i g g'

    def untouched_and_removed(self, touched_a, touched_b):
        untouched, removed = [], []
        for side, code, touched in (("A", self.a, touched_a), ("B", self.b, touched_b)):
            off = 0 if side == "A" else self.a.n
            for r in range(code.A.shape[0]):
                s = MajoranaString.hermitian(embed(code.A[r], 0, off, self.N))
                (removed if r in touched else untouched).append(s)
            for r in range(code.A.shape[0]):
                untouched.append(MajoranaString.hermitian(embed(code.A[r], 1, off, self.N)))
        return untouched, removed


def _touching_rows(A: np.ndarray, u: np.ndarray) -> list[int]:
    return [int(r) for r in range(A.shape[0]) if (A[r] & u).any()]


def _restriction(row: np.ndarray, pos: np.ndarray) -> list[int]:
    """Positions along the logical line where a check acts."""
    return [int(t) for t in np.flatnonzero(row[pos])]


def _measurement_strings(N: int, data: list[list[int]], anc: list[list[int]]) -> list[MajoranaString]:
    out = []
    for dat, extra in zip(data, anc):
        v = np.zeros(2 * N, dtype=np.uint8)
        v[dat] = 1
        v[extra] ^= 1
        out.append(MajoranaString.hermitian(v))
    return out


def _ancilla_majoranas(ancillas: list[AncillaMode], n_meas: int) -> list[list[int]]:
    per = [[] for _ in range(n_meas)]
    for a in ancillas:
        per[a.meas[0]].append(2 * a.mode)
        per[a.meas[1]].append(2 * a.mode + 1)
    return per


def _joint_operator(a: FermionCode, la: int, b: FermionCode, lb: int, N: int) -> MajoranaString:
    ga = MajoranaString.hermitian(embed(a.logicals[la], 0, 0, N))
    gb = MajoranaString.hermitian(embed(b.logicals[lb], 0, a.n, N))
    return (ga * gb).scaled(1)


def solve_joint(measurement, gauge, joint: MajoranaString) -> tuple[list[int], int]:
    """Gauge subset whose product with all M_i is +-joint, and that sign.

    Raises ValueError when the joint operator is not in the span or the
    product differs from it by a non-real phase.
    """
    P = product(measurement)
    target = P.vector ^ joint.vector
    if gauge:
        Gt = np.array([g.vector for g in gauge], dtype=np.uint8).T.copy()
        c = f2.solve(Gt, target)
    else:
        c = None if target.any() else np.zeros(0, dtype=np.uint8)
    if c is None:
        raise ValueError("joint operator is not generated by measurement and gauge stabilizers")
    subset = [int(i) for i in np.flatnonzero(c)]
    for i in subset:
        P = P * gauge[i]
    if not np.array_equal(P.vector, joint.vector):
        raise AssertionError("gauge solve returned a wrong support")
    d = (P.phase - joint.phase) % 4
    if d not in (0, 2):
        raise ValueError("product of stabilizers differs from the joint operator by +-i")
    return subset, 1 if d == 0 else -1


# ------------------------------------------------------------------ method 1


def _logical(code: FermionCode, j: int) -> np.ndarray:
    if not 0 <= j < len(code.logicals):
        raise ValueError(f"{code.name} has no logical fermion {j} (k_f = {code.k_f})")
    return code.logicals[j]


def method1_merge(code_a: FermionCode, logical_a: int, code_b: FermionCode) -> MergedCode:
    """Equal-weight merge of logical ``logical_a`` of A with a color code B.

    For every check of A touching the logical, its positions on the line are
    taken in consecutive pairs (j1, j2). Each pair adds one a-ancilla (gamma
    at j1, gamma' at j2) to the check of A, one matching b-ancilla to the
    product of plaquettes j1, ..., j2-1 of B (whose restriction to the line
    is exactly {j1, j2}), and the gauge a-ancilla times b-ancilla. Boundary
    plaquettes used by no pair get a b-ancilla and an a-ancilla of their own.
    """
    if code_b.boundary is None or not code_b.logicals:
        raise ValueError("code B must be a color code with an indexed boundary")
    uA = _logical(code_a, logical_a)
    uB = code_b.logicals[0]
    d = int(uA.sum())
    if d != int(uB.sum()):
        raise ValueError(f"logical weights differ: {d} vs {int(uB.sum())}")
    posA, posB = np.flatnonzero(uA), np.flatnonzero(uB)
    plaq = list(code_b.boundary)
    for t, r in enumerate(plaq):
        if _restriction(code_b.A[r], posB) != [t, t + 1]:
            raise ValueError("boundary plaquettes of B must cover consecutive pairs of the line")

    reg = _Register(code_a, code_b)
    touched_a = _touching_rows(code_a.A, uA)
    # (kind, check side, rows, ancilla modes) recorded first; strings need the final N
    mods: list[tuple[str, tuple[int, ...], list[AncillaMode]]] = []
    gauges: list[list[AncillaMode]] = []
    used = set()
    for i, r in enumerate(touched_a):
        J = _restriction(code_a.A[r], posA)
        if len(J) % 2:
            raise ValueError(f"check {r} of A overlaps the logical oddly")
        a_modes = []
        for n in range(0, len(J), 2):
            j1, j2 = J[n], J[n + 1]
            a = reg.new_mode("a", i, (j1, j2), (j1, j2))
            b = reg.new_mode("b", i, (j1, j2), (j1, j2))
            a_modes.append(a)
            rows = tuple(plaq[j1:j2])
            used.update(range(j1, j2))
            mods.append(("B", rows, [b]))
            gauges.append([a, b])
        mods.append(("A", (r,), a_modes))
    slot = len(touched_a)
    for t in range(len(plaq)):
        if t in used:
            continue
        b = reg.new_mode("b", slot, (t, t + 1), (t, t + 1))
        a = reg.new_mode("a", slot, (t, t + 1), (t, t + 1))
        mods.append(("B", (plaq[t],), [b]))
        gauges.append([a, b])
        slot += 1

    N = reg.N
    modified, origin = [], []
    for side, rows, modes in mods:
        s = product([reg.check_string(side, r) for r in rows] + [reg.number(m) for m in modes])
        modified.append(s)
        origin.append((side, rows))
    gauge = [product([reg.number(m) for m in g]) for g in gauges]
    data = [[2 * int(posA[t]), 2 * (code_a.n + int(posB[t]))] for t in range(d)]
    measurement = _measurement_strings(N, data, _ancilla_majoranas(reg.ancillas, d))
    untouched, removed = reg.untouched_and_removed(set(touched_a), set(plaq))
    joint = _joint_operator(code_a, logical_a, code_b, 0, N)
    subset, sign = solve_joint(measurement, gauge, joint)
    return MergedCode(code_a, code_b, logical_a, 0, 1, reg.ancillas, modified, origin, measurement, gauge,
                      untouched, removed, joint, sign, subset)


# ------------------------------------------------------------------ method 2


def _line_meas(F: int, other: int) -> list[int]:
    """Measurement index of each position on a line of F Majoranas.

    Positions below min(F, other) pair with the other line; the rest are
    grouped two by two into their own measurement stabilizers.
    """
    mn = min(F, other)
    return [t if t < mn else mn + (t - mn) // 2 for t in range(F)]


def method2_merge(code_a: FermionCode, logical_a: int, code_b: FermionCode, logical_b: int) -> MergedCode:
    """General merge of two odd logicals of arbitrary weights."""
    uA = _logical(code_a, logical_a)
    uB = _logical(code_b, logical_b)
    posA, posB = np.flatnonzero(uA), np.flatnonzero(uB)
    FA, FB = posA.size, posB.size
    if FA % 2 == 0 or FB % 2 == 0:
        raise ValueError("logicals must have odd weight")
    n_meas = (FA + FB) // 2
    measA, measB = _line_meas(FA, FB), _line_meas(FB, FA)

    reg = _Register(code_a, code_b)
    touched = {"A": _touching_rows(code_a.A, uA), "B": _touching_rows(code_b.A, uB)}
    mods = []
    for side, code, pos, meas in (("A", code_a, posA, measA), ("B", code_b, posB, measB)):
        for r in touched[side]:
            J = _restriction(code.A[r], pos)
            if len(J) % 2:
                raise ValueError(f"check {r} of {side} overlaps the logical oddly")
            modes = [reg.new_mode(side.lower(), r, (J[n], J[n + 1]), (meas[J[n]], meas[J[n + 1]]))
                     for n in range(0, len(J), 2)]
            mods.append((side, (r,), modes))

    mn = min(FA, FB)
    data = []
    for i in range(n_meas):
        if i < mn:
            data.append([2 * int(posA[i]), 2 * (code_a.n + int(posB[i]))])
        else:
            t = mn + 2 * (i - mn)
            if FA > FB:
                data.append([2 * int(posA[t]), 2 * int(posA[t + 1])])
            else:
                data.append([2 * (code_a.n + int(posB[t])), 2 * (code_a.n + int(posB[t + 1]))])
    anc = _ancilla_majoranas(reg.ancillas, n_meas)
    open_at = None
    for i in range(n_meas):
        if (len(data[i]) + len(anc[i])) % 2 == 0:
            continue
        if open_at is None:
            open_at = i
        else:
            reg.new_mode("p", -1, (open_at, i), (open_at, i))
            open_at = None
    if open_at is not None:
        raise AssertionError("odd number of odd measurement stabilizers")

    N = reg.N
    modified, origin = [], []
    for side, rows, modes in mods:
        modified.append(product([reg.check_string(side, rows[0])] + [reg.number(m) for m in modes]))
        origin.append((side, rows))
    measurement = _measurement_strings(N, data, _ancilla_majoranas(reg.ancillas, n_meas))
    graph = _build_graph(reg.ancillas, n_meas)
    by_mode = {a.mode: a for a in reg.ancillas}
    gauge = []
    for cyc in graph.cycle_basis:
        modes = sorted({graph.labels[v] for v in cyc if graph.kinds[v] == "modified"})
        gauge.append(product([reg.number(by_mode[m]) for m in modes]))
    untouched, removed = reg.untouched_and_removed(set(touched["A"]), set(touched["B"]))
    joint = _joint_operator(code_a, logical_a, code_b, logical_b, N)
    subset, sign = solve_joint(measurement, gauge, joint)
    return MergedCode(code_a, code_b, logical_a, logical_b, 2, reg.ancillas, modified, origin, measurement, gauge,
                      untouched, removed, joint, sign, subset, graph)


def _build_graph(ancillas: list[AncillaMode], n_meas: int) -> SurgeryGraph:
    kinds = ["measurement"] * n_meas
    labels: list = list(range(n_meas))
    edges = []
    for a in ancillas:
        g, gp, mod = len(kinds), len(kinds) + 1, len(kinds) + 2
        kinds += ["ancilla", "ancilla", "modified"]
        labels += [(a.mode, 0), (a.mode, 1), a.mode]
        edges += [(a.meas[0], g), (a.meas[1], gp), (mod, g), (mod, gp)]
    graph = SurgeryGraph(kinds, labels, edges)
    graph.cycle_basis = fundamental_cycles(graph.n_vertices, edges)
    return graph


def build_graph(m: MergedCode) -> SurgeryGraph:
    """Graph of a Method-2 merged code (rebuilt from its ancilla registry)."""
    if m.method != 2:
        raise ValueError("the cycle-space graph is defined for Method-2 merges")
    return _build_graph(m.ancillas, len(m.measurement))


def fundamental_cycles(n_vertices: int, edges) -> list[list[int]]:
    """One cycle per non-tree edge of a breadth-first spanning tree rooted at 0.

    Raises ValueError if the graph is disconnected.
    """
    adj = [[] for _ in range(n_vertices)]
    for k, (u, v) in enumerate(edges):
        adj[u].append((v, k))
        adj[v].append((u, k))
    for lst in adj:
        lst.sort()
    parent = [-1] * n_vertices
    parent_edge = [-1] * n_vertices
    depth = [-1] * n_vertices
    if n_vertices == 0:
        return []
    depth[0] = 0
    q = deque([0])
    while q:
        u = q.popleft()
        for v, k in adj[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = u
                parent_edge[v] = k
                q.append(v)
    if min(depth) < 0:
        raise ValueError("surgery graph is disconnected")
    tree = set(k for k in parent_edge if k >= 0)
    cycles = []
    for k, (u, v) in enumerate(edges):
        if k in tree:
            continue
        left, right = [u], [v]
        a, b = u, v
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
                left.append(a)
            else:
                b = parent[b]
                right.append(b)
        # left ends at the common ancestor, right ends there too
        cycles.append(left + right[-2::-1])
    return cycles


def cycle_count_formula(m: MergedCode) -> int:
    """Expected number of independent cycles from the ancilla bookkeeping."""
    ma = sum(1 for a in m.ancillas if a.side == "a")  # one mode per pair of Majoranas
    mb = sum(1 for a in m.ancillas if a.side == "b")
    npar = sum(1 for a in m.ancillas if a.side == "p")
    FA = int(m.code_a.logicals[m.logical_a].sum())
    FB = int(m.code_b.logicals[m.logical_b].sum())
    return ma + mb + npar - (FA + FB) // 2 + 1


# ------------------------------------------------------------------ verification


@dataclass
class MergeReport:
    ok: bool
    violations: list[str]
    n_modes: int
    n_stabilizers: int
    logical_count: int
    joint_sign: int | None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": self.violations,
            "n_modes": self.n_modes,
            "n_stabilizers": self.n_stabilizers,
            "logical_count": self.logical_count,
            "joint_sign": self.joint_sign,
        }


def verify_merged(m: MergedCode) -> MergeReport:
    """Check weights, commutation, joint-operator membership and the gamma' side."""
    bad: list[str] = []
    groups = [("modified", m.modified), ("measurement", m.measurement), ("gauge", m.gauge),
              ("untouched", m.untouched)]
    for name, strings in groups:
        for i, s in enumerate(strings):
            if s.parity:
                bad.append(f"{name} {i} has odd weight {s.weight}")
            if s.sign() == 0:
                bad.append(f"{name} {i} is not Hermitian")
    stabs = m.stabilizers()
    X = np.array([s.vector for s in stabs], dtype=np.uint8)
    C = commutation_form(X, X)
    tags = [f"{name} {i}" for name, strings in groups for i in range(len(strings))]
    for i, j in zip(*np.nonzero(np.triu(C, 1))):
        bad.append(f"{tags[i]} anticommutes with {tags[j]}")
        if len(bad) > 50:
            break
    sign = None
    try:
        _, sign = solve_joint(m.measurement, m.gauge, m.joint)
        if sign != m.joint_sign:
            bad.append(f"stored joint sign {m.joint_sign} but products give {sign}")
    except ValueError as exc:
        bad.append(str(exc))
    N = m.n_modes
    keep = {s.vector.tobytes() for s in m.untouched}
    for code, off, j, tag in ((m.code_a, 0, m.logical_a, "A"), (m.code_b, m.n_a, m.logical_b, "B")):
        for r in range(code.A.shape[0]):
            if embed(code.A[r], 1, off, N).tobytes() not in keep:
                bad.append(f"gamma' check {r} of {tag} was modified")
        gp = MajoranaString.hermitian(embed(code.logicals[j], 1, off, N))
        anti = commutation_form(X, gp.vector[None, :])[:, 0]
        if anti.any():
            bad.append(f"gamma' logical of {tag} anticommutes with {int(anti.sum())} merged stabilizers")
    return MergeReport(not bad, bad, N, len(stabs), m.logical_count() if not bad else -1, sign)


# ------------------------------------------------------------------ distance


def gauge_group(m: MergedCode) -> np.ndarray:
    """Row basis of the gauge group: old stabilizers, merged stabilizers, and
    (product of all logical parities) times gamma_bar_B."""
    N = m.n_modes
    rows = []
    for code, off in ((m.code_a, 0), (m.code_b, m.n_a)):
        for sector in (0, 1):
            for r in code.A:
                rows.append(embed(r, sector, off, N))
    for a in m.ancillas:
        v = np.zeros(2 * N, dtype=np.uint8)
        v[2 * a.mode] = v[2 * a.mode + 1] = 1
        rows.append(v)
    rows += [s.vector for s in m.stabilizers()]
    extra = np.zeros(2 * N, dtype=np.uint8)
    for code, off in ((m.code_a, 0), (m.code_b, m.n_a)):
        for v in code.logicals:
            extra ^= embed(v, 0, off, N) ^ embed(v, 1, off, N)
    extra ^= embed(m.code_b.logicals[m.logical_b], 0, m.n_a, N)
    rows.append(extra)
    return f2.row_basis(np.array(rows, dtype=np.uint8))


def _commutation_rows(M: np.ndarray) -> np.ndarray:
    """Rows g + p(g) * 1, so that x commutes with g iff x . row = 0."""
    p = (M.sum(axis=1) & 1).astype(np.uint8)
    return M ^ p[:, None]


def dressed_distance(m: MergedCode, mode: str = "exact", budget: int = 1000, seed: int = 0) -> int:
    """Minimum weight of a dressed logical (an element of C(Z(G)) outside G).

    Z(G) = G intersected with its centralizer; the dressed logicals are
    gauge-times-bare products, which together with G fill C(Z(G)).
    """
    from .distance import EXHAUSTIVE_DIM_LIMIT, exhaustive_min_outside, milp_min_outside, random_min_outside

    G = gauge_group(m)
    Gc = _commutation_rows(G)
    comm = f2.matmul(G, Gc.T)
    ker = np.array(f2.kernel_basis(comm.T), dtype=np.uint8).reshape(-1, G.shape[0])
    Z = f2.row_basis(f2.matmul(ker, G)) if ker.shape[0] else np.zeros((0, G.shape[1]), dtype=np.uint8)
    Zc = _commutation_rows(Z) if Z.shape[0] else Z
    n2 = G.shape[1]
    C = np.array(f2.kernel_basis(Zc), dtype=np.uint8).reshape(-1, n2) if Z.shape[0] else np.eye(n2, dtype=np.uint8)
    if mode == "exact":
        if C.shape[0] <= EXHAUSTIVE_DIM_LIMIT:
            return exhaustive_min_outside(C, G)[0]
        return milp_min_outside(Zc, G, n2)[0]
    if mode == "randomized":
        return random_min_outside(C, G, budget, seed)[0]
    raise ValueError(f"unknown mode {mode!r}")


def code_distance(obj, mode: str = "exact", budget: int = 1000, seed: int = 0) -> int:
    """Distance of a code, or dressed distance of a merged code."""
    if isinstance(obj, MergedCode):
        return dressed_distance(obj, mode, budget, seed)
    from .distance import code_distance as plain

    return plain(obj, mode, budget, seed)


# ------------------------------------------------------------------ execution


def merged_register(tab_ab: Tableau, m: MergedCode) -> Tableau:
    """Copy of the A+B state with the ancilla modes appended in the vacuum."""
    if tab_ab.n != m.n_a + m.n_b:
        raise ValueError("tableau does not cover exactly the data modes of A and B")
    tab = tab_ab.copy()
    tab.extend(m.n_ancilla)
    return tab


def _vote(history: np.ndarray) -> np.ndarray:
    """Per-column majority of +-1 outcomes; ties go to the first round."""
    s = history.sum(axis=0)
    out = np.sign(s).astype(np.int64)
    out[s == 0] = history[0, s == 0]
    return out


def split_correction(m: MergedCode, violated: np.ndarray) -> np.ndarray:
    """Support of a product of measurement data parts that flips exactly the
    violated removed checks and commutes with gamma_bar_A."""
    n_meas = len(m.measurement)
    D = np.array([m.measurement_data(i) for i in range(n_meas)], dtype=np.uint8)
    R = np.array([s.vector for s in m.removed], dtype=np.uint8).reshape(-1, D.shape[1])
    ga = embed(m.code_a.logicals[m.logical_a], 0, 0, m.n_modes)
    # D rows are even, so anticommutation is the overlap parity
    rows = np.vstack([f2.matmul(R, D.T), f2.matmul(ga[None, :], D.T)])
    rhs = np.concatenate([np.asarray(violated, dtype=np.uint8), [0]])
    x = f2.solve(rows, rhs)
    if x is None:
        raise RuntimeError("no correction matches the split syndrome")
    v = np.zeros(D.shape[1], dtype=np.uint8)
    for i in np.flatnonzero(x):
        v ^= D[i]
    return v


def _pad(s: MajoranaString, n: int) -> MajoranaString:
    """Same operator on a register with extra trailing modes."""
    if s.n == n:
        return s
    v = np.zeros(2 * n, dtype=np.uint8)
    v[: s.vector.size] = s.vector
    return MajoranaString(v, s.phase)


def joint_measure(tab: Tableau, m: MergedCode, rounds: int = 1, meas_flip_p: float = 0.0, rng=None,
                  include_untouched: bool = False, strict: bool = True,
                  only_measurement: bool = False) -> tuple[int, Tableau]:
    """Measure i gamma_A gamma_B through the merged code, then split back.

    ``tab`` covers A, B and the ancillas (see ``merged_register``), optionally
    followed by spectator modes, and is modified in place. Each round measures the modified, measurement and
    gauge stabilizers (plus the untouched ones if asked); recorded outcomes
    are flipped with probability ``meas_flip_p``. The joint outcome is the
    product of the per-stabilizer majority votes of the M_i. Afterwards the
    ancillas are read out in the number basis, the removed checks of A and B
    are measured, a product of measurement data parts restores them to +1,
    and flipped ancillas are reset to the vacuum.

    With ``strict=False`` a split syndrome that no such product explains
    (possible only when data errors are present) is left uncorrected for a
    later decoding round instead of raising.

    ``only_measurement`` skips the modified and gauge stabilizers in a
    single noiseless round. They already belong to the stabilizer group
    of the input (data checks times vacuum ancillas), so measuring them
    cannot change the state; only their unused outcomes are lost.
    """
    rng = rng if rng is not None else np.random.default_rng()
    if tab.n < m.n_modes:
        raise ValueError("tableau does not cover the merged register")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if only_measurement and (rounds != 1 or meas_flip_p):
        raise ValueError("only_measurement needs a single noiseless round")
    N = tab.n
    groups = [m.measurement] if only_measurement else [m.modified, m.measurement, m.gauge]
    stabs = [_pad(s, N) for g in groups for s in g]
    stabs += [_pad(s, N) for s in (m.untouched if include_untouched else [])]
    n_mod = 0 if only_measurement else len(m.modified)
    n_meas = len(m.measurement)
    hist = np.ones((rounds, len(stabs)), dtype=np.int64)
    for t in range(rounds):
        for k, s in enumerate(stabs):
            out = tab.measure(s, rng)
            if meas_flip_p and rng.random() < meas_flip_p:
                out = -out
            hist[t, k] = out
    if meas_flip_p == 0.0 and rounds > 1 and not (hist == hist[0]).all():
        raise RuntimeError("noiseless repeated stabilizer outcomes disagree")
    voted = _vote(hist)
    joint = m.joint_sign * int(np.prod(voted[n_mod:n_mod + n_meas]))

    flipped = []
    for a in m.ancillas:
        v = np.zeros(2 * N, dtype=np.uint8)
        v[2 * a.mode] = v[2 * a.mode + 1] = 1
        if tab.measure(MajoranaString.hermitian(v), rng) < 0:
            flipped.append(a.mode)
    violated = np.array([tab.measure(_pad(c, N), rng) < 0 for c in m.removed], dtype=np.uint8)
    if violated.any():
        fix = np.zeros(2 * N, dtype=np.uint8)
        try:
            fix[: 2 * m.n_modes] = split_correction(m, violated)
        except RuntimeError:
            if strict:
                raise
        tab.apply_string(fix)
    for j in flipped:
        v = np.zeros(2 * N, dtype=np.uint8)
        v[2 * j] = 1
        tab.apply_string(v)
    return joint, tab
