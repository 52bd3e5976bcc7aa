from __future__ import annotations

import itertools

import numpy as np
import pytest

from ferroc import circuit as C
from ferroc import dense as Dn
from ferroc.experiments import teleport_circuit
from ferroc.majorana import MajoranaString
from ferroc.sim import Tableau


def test_parse_dump_round_trip():
    text = "mjc v1\nG 0\nGP 1\nBRAID 0 1\nM 0 1 -> r\nCOND r FSWAP 0 1\nD 0 3\n"
    prog = C.parse(text)
    assert C.dumps(prog) == text
    assert prog[4].condition == "r"


@pytest.mark.parametrize("bad", ["FOO 1", "G 0 1", "M 0 1", "COND r", "BRAID 1"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        C.parse(bad)


def test_site_out_of_range():
    with pytest.raises(ValueError):
        C.execute_tableau(Tableau.vacuum(1), C.parse("G 3"), np.random.default_rng(0))


def _prepare(kind):
    """Mode 0 = source, mode 1 = target in |0>, mode 2 = reference."""
    prep = {
        "zero": "",
        "one": "G 0",
        # source entangled with the reference: parity eigenstate superposition
        "bell": "G 0\nBRAID 0 2",
    }[kind]
    return C.parse(prep)


@pytest.mark.parametrize("kind", ["zero", "one", "bell"])
@pytest.mark.parametrize("branch", list(itertools.product((1, -1), (1, -1))))
def test_teleport_circuit_tableau_vs_dense(kind, branch):
    tele = C.parse(teleport_circuit())
    forced = {"j": branch[0], "n": branch[1]}
    rng = np.random.default_rng(0)
    tab = Tableau.vacuum(3)
    C.execute_tableau(tab, _prepare(kind), rng)
    before = tab.copy()
    regs = C.execute_tableau(tab, tele, rng, forced=forced)
    assert regs == forced
    # dense: project onto the forced branch
    F = Dn.Fock(3)
    psi = F.vacuum()
    psi, _ = C.execute_dense(F, _prepare(kind), psi, rng)
    for ins in tele:
        if ins.condition and forced[ins.condition] != -1:
            continue
        if ins.op == "M":
            O = C._support_string(3, ins.args)
            psi = 0.5 * (psi + forced[ins.register] * F.apply_string(O, psi))
            psi = psi / np.linalg.norm(psi)
        else:
            psi, _ = C.execute_dense(F, [C.Instruction(ins.op, ins.args)], psi, rng)
    for s in tab.strings():
        assert np.allclose(F.apply_string(s, psi), psi)
    # the source state now lives on the target: swap roles of modes 0 and 1
    for s in before.strings():
        v = s.vector.copy()
        v[[0, 1, 2, 3]] = v[[2, 3, 0, 1]]
        moved = MajoranaString(v, s.phase)
        if v[0] or v[1]:
            continue
        assert tab.expectation(moved) == before.expectation(s)
