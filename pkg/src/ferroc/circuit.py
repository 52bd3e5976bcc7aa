"""Circuit text format "mjc v1" and executors for the tableau and dense backends.

One instruction per line::

    G j              gamma_j
    GP j             gamma'_j
    Z j              i gamma_j gamma'_j
    S j              exp(i pi/2 n_j)
    FSWAP j k        fermionic swap
    BRAID j k        exp(i pi/2 (c_j^dag c_k + h.c.))
    D a b c ...      Majorana string on interleaved indices a, b, c, ...
    M a b ... -> r   measure the Hermitian string on interleaved indices
    COND r <instr>   run <instr> if register r holds outcome -1

Interleaved index 2j is gamma_j and 2j+1 is gamma'_j. Blank lines, lines
starting with '#', and an optional leading "mjc v1" header are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .majorana import MajoranaString

ONE_MODE = {"G", "GP", "Z", "S"}
TWO_MODE = {"FSWAP", "BRAID"}


@dataclass(frozen=True)
class Instruction:
    op: str
    args: tuple[int, ...] = ()
    register: str | None = None
    condition: str | None = None

    def text(self) -> str:
        body = f"{self.op} {' '.join(map(str, self.args))}".strip()
        if self.op == "M":
            body += f" -> {self.register}"
        return f"COND {self.condition} {body}" if self.condition else body


def parse_line(line: str) -> Instruction | None:
    line = line.split("#", 1)[0].strip()
    if not line:
        return None
    tok = line.split()
    op = tok[0].upper()
    if op == "COND":
        if len(tok) < 3:
            raise ValueError(f"COND needs a register and an instruction: {line!r}")
        inner = parse_line(" ".join(tok[2:]))
        if inner is None or inner.condition is not None:
            raise ValueError(f"bad conditional instruction: {line!r}")
        return Instruction(inner.op, inner.args, inner.register, tok[1])
    if op == "M":
        if "->" not in tok:
            raise ValueError(f"measurement needs '-> register': {line!r}")
        k = tok.index("->")
        if k != len(tok) - 2:
            raise ValueError(f"measurement needs exactly one register: {line!r}")
        return Instruction("M", tuple(int(t) for t in tok[1:k]), tok[-1])
    args = tuple(int(t) for t in tok[1:])
    if op in ONE_MODE and len(args) != 1:
        raise ValueError(f"{op} takes one mode: {line!r}")
    if op in TWO_MODE and len(args) != 2:
        raise ValueError(f"{op} takes two modes: {line!r}")
    if op not in ONE_MODE | TWO_MODE | {"D"}:
        raise ValueError(f"unknown instruction {op!r}")
    return Instruction(op, args)


def parse(text: str) -> list[Instruction]:
    lines = text.splitlines()
    if lines and lines[0].strip().lower() == "mjc v1":
        lines = lines[1:]
    out = []
    for ln in lines:
        ins = parse_line(ln)
        if ins is not None:
            out.append(ins)
    return out


def dumps(circuit) -> str:
    return "mjc v1\n" + "".join(ins.text() + "\n" for ins in circuit)


def _support_string(n: int, idx) -> MajoranaString:
    v = np.zeros(2 * n, dtype=np.uint8)
    for k in idx:
        if not 0 <= k < 2 * n:
            raise ValueError(f"Majorana index {k} out of range for {n} modes")
        v[k] ^= 1
    return MajoranaString.hermitian(v)


def _check_sites(ins: Instruction, n: int):
    if ins.op in ONE_MODE | TWO_MODE:
        for j in ins.args:
            if not 0 <= j < n:
                raise ValueError(f"site {j} out of range in {ins.text()!r}")


def execute_tableau(tab, circuit, rng, forced=None):
    """Run a circuit on a Tableau in place. Returns the register dict (+-1).

    ``forced`` optionally maps register names to outcomes used for random
    measurements.
    """
    regs: dict[str, int] = {}
    n = tab.n
    for ins in circuit:
        _check_sites(ins, n)
        if ins.condition is not None and regs.get(ins.condition, 1) != -1:
            continue
        op, a = ins.op, ins.args
        if op == "G":
            tab.gamma(a[0])
        elif op == "GP":
            tab.gamma_prime(a[0])
        elif op == "Z":
            tab.z(a[0])
        elif op == "S":
            tab.s(a[0])
        elif op == "FSWAP":
            tab.fswap(*a)
        elif op == "BRAID":
            tab.braid(*a)
        elif op == "D":
            tab.apply_string(_support_string(n, a).vector)
        elif op == "M":
            f = None if forced is None else forced.get(ins.register)
            regs[ins.register] = tab.measure(_support_string(n, a), rng, forced=f)
    return regs


def execute_dense(F, circuit, psi, rng):
    from . import dense as D

    regs: dict[str, int] = {}
    for ins in circuit:
        _check_sites(ins, F.n)
        if ins.condition is not None and regs.get(ins.condition, 1) != -1:
            continue
        op, a = ins.op, ins.args
        if op == "G":
            psi = D.gate_gamma(F, a[0], psi)
        elif op == "GP":
            psi = D.gate_gamma_prime(F, a[0], psi)
        elif op == "Z":
            psi = D.gate_z(F, a[0], psi)
        elif op == "S":
            psi = D.gate_s(F, a[0], psi)
        elif op == "FSWAP":
            psi = D.gate_fswap(F, *a, psi)
        elif op == "BRAID":
            psi = D.gate_braid(F, *a, psi)
        elif op == "D":
            psi = F.apply_string(_support_string(F.n, a), psi)
        elif op == "M":
            regs[ins.register], psi = D.measure(F, _support_string(F.n, a), psi, rng)
    return psi, regs
