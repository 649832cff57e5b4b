from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from avk.localforms import (Gaussian, LocalFormError, SectorSystem, check_opposite_sign_values, chi_form,
                            iterated_seed_product, lambda_identity_seed, lambda_normal_crossing,
                            lambda_opposite_sign_value, lambda_product, node_residue, normal_crossing_form,
                            normal_crossing_sectors, relative_twist, residue_form, sign_vectors, smooth_point_form,
                            to_sector_basis)
from avk.qforms import inertia, signed_perm_congruent

H = F(1, 2)


def test_seed():
    lam, cplx = lambda_identity_seed()
    assert lam.matrix == ((1, -1), (1, 1))
    assert lam((1,), (1,)) == 1
    assert lam((1,), (-1,)) == -1 and lam((-1,), (1,)) == 1
    assert lam((1,), (1,)) == lam((-1,), (-1,))
    # complexified: the negative vector is i times the real one
    assert cplx[1][1] == Gaussian(F(-1), F(0))
    assert cplx[0][1] == Gaussian(F(0), F(-1))


@pytest.mark.parametrize("a, b, value", [
    ((1, 1), (1, 1), -H),
    ((1, 1), (-1, -1), -H),
    ((1,), (1,), 1),
])
def test_normal_crossing_values(a, b, value):
    assert lambda_normal_crossing(len(a), a, b) == value


def test_normal_crossing_length_check():
    with pytest.raises(LocalFormError):
        lambda_normal_crossing(2, (1,), (1, 1))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_parity_of_i_exponent(d):
    for a, b in product(sign_vectors(d), repeat=2):
        dist = sum(x != y for x, y in zip(a, b))
        assert (sum(x < 0 for x in a) + sum(x < 0 for x in b) - dist) % 2 == 0
        lambda_normal_crossing(d, a, b)  # the internal parity assertion must not fire


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_iterated_product_equals_closed_formula(d):
    lam = iterated_seed_product(d)
    assert lam.dim == 2 ** d
    for a in lam.basis:
        for b in lam.basis:
            assert lam(a, b) == lambda_normal_crossing(d, a, b), (a, b)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sector_basis_of_product(d):
    assert to_sector_basis(iterated_seed_product(d)).matrix == normal_crossing_form(d).matrix


def test_product_associative_at_three():
    seed, _ = lambda_identity_seed()
    left = lambda_product(lambda_product(seed, seed), seed)
    right = lambda_product(seed, lambda_product(seed, seed))
    assert left.basis == right.basis
    assert left.matrix == right.matrix


def test_product_requires_canonical_forms():
    seed, _ = lambda_identity_seed()
    with pytest.raises(LocalFormError):
        lambda_product(seed.replace(kind="chi"), seed)


# -- sector Euler form and residues -------------------------------------------

def test_node_chi_form():
    chi = chi_form(normal_crossing_sectors(2))
    for a in chi.basis:
        assert chi(a, a) == 1
        for b in chi.basis:
            if a != b and chi.sign_of(a) == chi.sign_of(b):
                assert chi(a, b) == 0


def test_single_and_double_contact_chi():
    assert chi_form(SectorSystem([("v", "+", 1)], {})).matrix == ((1,),)
    two = chi_form(SectorSystem([("a", "+", 1), ("b", "+", 1)], {("a", "b"): 2}))
    assert two("a", "b") == 1


def test_node_residue_blocks():
    r = node_residue()
    target = inertia(r.q_plus)
    half = [[H, H], [H, H]]
    from avk.qforms import SymmetricForm
    assert signed_perm_congruent(SymmetricForm.from_matrix(half), r.q_plus.relabeled([0, 1]))[0]
    assert signed_perm_congruent(SymmetricForm.from_matrix(half), r.q_minus.relabeled([0, 1]))[0]
    assert target.sigma_zero == 1
    for a in r.q.basis:
        for b in r.q.basis:
            if r.q.sign_of(a) != r.q.sign_of(b):
                assert r.q(a, b) == 0
    assert r.q_bar == r.q_plus.scaled(2)


def test_residue_splits_only_for_isolated_crossings():
    # in the plane the node is isolated; in odd dimension the split fails
    residue_form(normal_crossing_form(2), normal_crossing_sectors(2))
    for d in (1, 3):
        with pytest.raises(LocalFormError, match="not a QI\\^S-consistent input"):
            residue_form(normal_crossing_form(d), normal_crossing_sectors(d))


def test_cusp_boundary_sector_residue():
    # one negative tail sector: lambda = 1 and chi = 1 give q = 2
    from avk.localforms import LocalForm
    lam = LocalForm(("tail",), (1,), ((1,),), "lambda", 2)
    r = residue_form(lam, SectorSystem([("tail", "+", 1)], {}))
    assert r.q_plus.gram == ((2,),)


def test_smooth_point_form():
    s = smooth_point_form(2)
    assert s.matrix == ((-1, 1), (-1, -1))
    with pytest.raises(LocalFormError):
        smooth_point_form(3)


# -- twists and opposite-sign values -----------------------------------------

sides_strategy = st.lists(st.sampled_from((0, 1)), min_size=4, max_size=4)


@settings(max_examples=30, deadline=None)
@given(sides_strategy)
def test_twist_is_an_involution_preserving_inertia(bits):
    q = node_residue().q
    sides = dict(zip(q.basis, bits))
    t = relative_twist(q, sides)
    assert relative_twist(t, sides).matrix == q.matrix
    assert all(t.matrix[i][i] == q.matrix[i][i] for i in range(q.dim))
    for s in (1, -1):
        assert inertia(t.block(s)) == inertia(q.block(s))


def test_twist_same_side_is_identity_and_requires_all_bits():
    q = node_residue().q
    assert relative_twist(q, {b: 0 for b in q.basis}).matrix == q.matrix
    with pytest.raises(LocalFormError):
        relative_twist(q, {})


def test_opposite_sign_values():
    s = normal_crossing_sectors(2)
    lam = normal_crossing_form(2)
    pp, pm = (1, 1), (1, -1)
    assert lambda_opposite_sign_value(s, pp, pm) == -H
    assert lambda_opposite_sign_value(s, pp, pm) == -lambda_opposite_sign_value(s, pm, pp)
    # the forced value sits at the transposed entry
    assert lam(pm, pp) == lambda_opposite_sign_value(s, pp, pm)
    assert check_opposite_sign_values(lam, s) == []
    with pytest.raises(LocalFormError):
        lambda_opposite_sign_value(s, pp, (-1, -1))


def test_disjoint_opposite_sectors_give_zero():
    s = SectorSystem([("a", "+", 1), ("b", "-", 1)], {}, 2)
    assert lambda_opposite_sign_value(s, "a", "b") == 0


def test_sector_json_round_trip():
    s = SectorSystem([("v1", "+", 1), ("v2", "-", 1)], {("v1", "v2"): 1})
    back = SectorSystem.from_json(s.to_json())
    assert back.chi_between("v1", "v2") == 1 and back.sign_of("v2") == -1
