from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from avk.qforms import (DegenerateBlockError, FormError, SymmetricForm, complement_form, inertia, radical_basis,
                        restrict, signed_perm_congruent, tensor_scaled, to_fraction)
from oracles import descartes_inertia, symmetric_matrices


def form(rows, basis=None):
    return SymmetricForm(basis or range(len(rows)), rows)


def triple(f):
    t = inertia(f)
    return (t.sigma_plus, t.sigma_minus, t.sigma_zero)


# -- inertia ---------------------------------------------------------------

def test_inertia_definite_diagonal():
    assert triple(SymmetricForm.diagonal([2, -3])) == (1, 1, 0)


def test_inertia_zero_form():
    assert triple(SymmetricForm.zero("abc")) == (0, 0, 3)


def test_inertia_half_rank_one():
    assert triple(form([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])) == (1, 0, 1)


def test_inertia_needs_off_diagonal_pivot():
    # hyperbolic plane: zero diagonal
    assert triple(form([[0, 1], [1, 0]])) == (1, 1, 0)
    assert triple(form([[0, 1, 0], [1, 0, 0], [0, 0, 0]])) == (1, 1, 1)


def test_empty_form():
    assert triple(SymmetricForm([], [])) == (0, 0, 0)
    assert radical_basis(SymmetricForm([], [])) == []


@settings(max_examples=150, deadline=None)
@given(symmetric_matrices())
def test_inertia_matches_characteristic_polynomial(rows):
    assert triple(form(rows)) == descartes_inertia(rows)


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(min_size=1), st.data())
def test_inertia_invariant_under_signed_permutation(rows, data):
    n = len(rows)
    perm = data.draw(st.permutations(range(n)))
    signs = data.draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    moved = [[signs[i] * signs[j] * rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    f, g = form(rows), form(moved)
    assert triple(f) == triple(g)
    ok, w = signed_perm_congruent(f, g)
    assert ok
    assert all(g.gram[i][j] == w.signs[i] * w.signs[j] * f.gram[w.perm[i]][w.perm[j]]
               for i in range(n) for j in range(n))


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(max_size=4), symmetric_matrices(max_size=4))
def test_inertia_additive_on_direct_sums(a, b):
    f, g = form(a, [("a", i) for i in range(len(a))]), form(b, [("b", i) for i in range(len(b))])
    s = f.direct_sum(g)
    assert triple(s) == tuple(x + y for x, y in zip(triple(f), triple(g)))


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(min_size=2, max_size=5), st.data())
def test_complement_plus_block_keeps_inertia(rows, data):
    f = form(rows)
    e = data.draw(st.sets(st.sampled_from(range(len(rows))), min_size=1, max_size=len(rows) - 1))
    block = restrict(f, e)
    if inertia(block).sigma_zero:
        with pytest.raises(DegenerateBlockError):
            complement_form(f, e)
        return
    comp = complement_form(f, e)
    assert triple(comp.direct_sum(block.relabeled([("e", x) for x in block.basis]))) == triple(f)


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices())
def test_radical_length_is_nullity(rows):
    f = form(rows)
    rad = radical_basis(f)
    assert len(rad) == inertia(f).sigma_zero
    for v in rad:
        assert all(sum(r[j] * v[j] for j in range(len(v))) == 0 for r in rows)


# -- radical, restrict, complement -----------------------------------------

def test_radical_examples():
    assert radical_basis(form([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])) == [[-1, 1]]
    assert radical_basis(SymmetricForm.diagonal([1, 1])) == []
    assert radical_basis(SymmetricForm.zero(["x"])) == [[1]]


def test_restrict_keeps_order_and_rejects_unknown():
    f = SymmetricForm.diagonal([1, 2, 3], ["a", "b", "c"])
    assert restrict(f, {"c", "a"}) == SymmetricForm.diagonal([1, 3], ["a", "c"])
    assert restrict(f, []).dim == 0
    with pytest.raises(FormError):
        restrict(f, ["z"])


def test_restrict_of_block_form_recovers_block():
    plus = form([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]], ["p1", "p2"])
    minus = form([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]], ["m1", "m2"])
    assert restrict(plus.direct_sum(minus), ["p1", "p2"]) == plus


def test_complement_examples():
    assert complement_form(form([[2, 1], [1, 1]], ["e", "w"]), ["e"]) == form([[F(1, 2)]], ["w"])
    f = form([[3, 0, 0], [0, 1, 2], [0, 2, 5]], ["e", "x", "y"])
    assert complement_form(f, ["e"]) == restrict(f, ["x", "y"])


def test_complement_degenerate_block_carries_witness():
    f = form([[1, 1, 0], [1, 1, 0], [0, 0, 1]], ["a", "b", "c"])
    with pytest.raises(DegenerateBlockError) as err:
        complement_form(f, ["a", "b"])
    assert err.value.witness == [-1, 1]


def test_complement_in_stages_equals_at_once():
    f = form([[-2, 1, 0, 0], [1, -2, 1, 0], [0, 1, -2, 1], [0, 0, 1, -3]], "abcd")
    assert complement_form(complement_form(f, ["a"]), ["b"]) == complement_form(f, ["a", "b"])


# -- tensor and congruence -------------------------------------------------

def test_tensor_scaled_examples():
    assert tensor_scaled(form([[1]]), form([[1]])).gram == ((1,),)
    t = tensor_scaled(SymmetricForm.diagonal([1, -1]), form([[1]]), -1)
    assert t.gram == ((-1, 0), (0, 1))
    assert t.basis == ((0, 0), (1, 0))


def test_signed_perm_congruence_examples():
    h = F(1, 2)
    assert signed_perm_congruent(form([[h, h], [h, h]]), form([[h, -h], [-h, h]]))[0]
    assert signed_perm_congruent(SymmetricForm.diagonal([1, 2]), SymmetricForm.diagonal([2, 1]))[0]
    assert not signed_perm_congruent(SymmetricForm.diagonal([1, 1]), SymmetricForm.diagonal([1, -1]))[0]
    with pytest.raises(FormError):
        signed_perm_congruent(SymmetricForm.diagonal([1]), SymmetricForm.diagonal([1, 1]))


# -- validation and JSON ---------------------------------------------------

def test_rejects_asymmetric_and_duplicate_labels():
    with pytest.raises(FormError):
        form([[1, 2], [3, 1]])
    with pytest.raises(FormError):
        SymmetricForm(["a", "a"], [[1, 0], [0, 1]])


def test_json_round_trip_is_exact():
    f = form([[F(1, 3), F(-7, 2)], [F(-7, 2), 0]], ["x", ("y", 1)])
    data = f.to_json()
    assert data["gram"][0][0] == "1/3"
    assert SymmetricForm.from_json(data) == f


def test_to_fraction_accepts_strings():
    assert to_fraction("3/4") == F(3, 4)
    assert to_fraction(2) == 2
