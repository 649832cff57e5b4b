import time
from fractions import Fraction as F

import pytest

from avk.morsify import (CATALOG_NAMES, AGDiagram, DiagramError, NotQISError, Region, a_dot_diagram,
                         a_even_diagram, boundary_residue, build_qtau, catalog, descriptor, euler_consistent,
                         expected_matrix, is_qbaris, is_qis, milnor_consistent)
from avk.qforms import SymmetricForm, restrict, signed_perm_congruent

H = F(1, 2)


def test_catalog_covers_the_simple_table():
    assert len(CATALOG_NAMES) == 26


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_entry_matches_expected_block(name):
    desc = descriptor(name)
    ok, _ = desc.check()
    assert ok, f"{name}: {desc.computed()} vs {desc.expected}"


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_diagram_validators(name):
    d = descriptor(name)
    assert milnor_consistent(d.diagram, d.mu)
    assert euler_consistent(d.diagram)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_residue_is_block_diagonal(name):
    res = boundary_residue(descriptor(name).diagram)
    if res.q is None:
        return
    for a in res.q.basis:
        for b in res.q.basis:
            da = descriptor(name).diagram
            if da.sign_of(a) != da.sign_of(b):
                assert res.q(a, b) == 0
    assert res.q_bar == res.q_plus.scaled(2)


def test_catalog_runtime():
    start = time.perf_counter()
    for name in CATALOG_NAMES:
        descriptor(name).check()
    assert time.perf_counter() - start < 1.0


def test_catalog_expected_examples():
    assert catalog("A1-").expected.gram == ((H, H), (H, H))
    assert catalog("E7").expected.gram == ((F(7, 2), F(3, 2)), (F(3, 2), F(3, 2)))
    assert catalog("D4-").expected.gram == ((1, H, H), (H, 1, H), (H, H, 1))
    assert catalog("A3°-").name == "A3o-"


def test_unknown_names_rejected():
    for bad in ("A0", "B3+", "E9", "A2o-", "D3+"):
        with pytest.raises(DiagramError):
            descriptor(bad)


def test_node_qtau():
    d = descriptor("A1-").diagram
    qt = build_qtau(d)
    assert all(qt(a, a) == H for a in qt.basis)
    assert qt("top", "bottom") == H and qt("left", "right") == H
    assert boundary_residue(d).q == qt


def test_cusp_worked_example():
    d = a_even_diagram(1)
    qt = build_qtau(d)
    assert qt("loop", "loop") == F(-3, 2)
    assert qt("tail", "tail") == H
    assert qt("outside", "outside") == 2
    assert qt("loop", "tail") == H
    assert qt("loop", "outside") == 0 and qt("tail", "outside") == 0
    assert is_qis(d) and is_qbaris(d)
    res = boundary_residue(d)
    assert res.q_plus.gram == ((2,),)
    assert res.q_minus.gram == ((F(2, 3),),)


def test_positive_dot():
    d = a_dot_diagram(1)
    qt = build_qtau(d)
    assert qt("oval1", "oval1") == -2 and qt("w0", "w0") == 0 and qt("oval1", "w0") == 0
    assert boundary_residue(d).q_plus.gram == ((0,),)


def test_dot_chain_of_two():
    d = a_dot_diagram(2)
    inner = restrict(build_qtau(d), ["oval1", "oval2"])
    assert inner.gram == ((F(-3, 2), H), (H, F(-3, 2)))
    assert is_qis(d) and is_qbaris(d)
    assert boundary_residue(d).q_plus.gram == ((2,),)


def test_e8_residue():
    assert boundary_residue(descriptor("E8").diagram).q_plus.gram == ((8,),)


def test_essential_singularity_detected():
    # inner region with zero diagonal and no same-sign neighbour
    d = AGDiagram(1, [Region("bad", -1, F(1, 4))], [Region("o1", 1, 0), Region("o2", -1, 0)],
                  {frozenset(("o1", "bad")): 0}, {})
    assert build_qtau(d)("bad", "bad") == F(-1, 2)
    d0 = AGDiagram(1, [Region("bad", -1, 0)], [Region("o1", 1, 0), Region("o2", -1, 0)])
    assert not is_qis(d0)
    assert is_qbaris(d0)
    with pytest.raises(NotQISError, match="essential singularity"):
        boundary_residue(d0)
    assert boundary_residue(d0, bar_only=True).q_minus is None


def test_diagram_validation():
    with pytest.raises(DiagramError):
        AGDiagram(1, [], [Region("a", 1, 0)])  # needs two outer regions
    with pytest.raises(DiagramError):
        AGDiagram(0, [], [Region("w0", 1, 0)], {}, {"w0": 3})
    with pytest.raises(DiagramError):
        AGDiagram(1, [], [Region("a", 1, 0), Region("b", -1, 0)], vertices=[("a", "a", "b", "b")])


def test_json_round_trip():
    d = descriptor("E7").diagram
    back = AGDiagram.from_json(d.to_json())
    assert build_qtau(back) == build_qtau(d)


def test_flipped_diagram_swaps_blocks():
    d = descriptor("A4-").diagram
    a, b = boundary_residue(d), boundary_residue(d.flipped())
    assert a.q_plus.gram == b.q_minus.gram and a.q_minus.gram == b.q_plus.gram


@pytest.mark.parametrize("n", [1, 2, 3])
def test_expected_families_at_n(n):
    assert expected_matrix("A_even-", n).gram == ((2 * n,),)
    assert expected_matrix("A_even+", n).gram == ((F(2 * n, 2 * n + 1),),)
    assert signed_perm_congruent(expected_matrix("D_odd+", n), expected_matrix("D_odd+", n))[0]
