from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from avk.arrangements import moment_arrangement, phi_residue_route
from avk.bounds import (ARNOLD_VIRO, BoundsError, InvariantBundle, Row, arnold_viro_rhs, arrangement_bundle,
                        cuspidal_bounds, curve_bundle, double_plane_betti, hodge_identities, petrovskii_classic,
                        petrovskii_general, run, smith_rhs)
from avk.curves import assemble_phi, curve_model_from_arrangement, gap_delta, invariants_from_arrangement
from avk.qforms import inertia

H = F(1, 2)
nat = st.integers(0, 12)


def bundle(**values):
    return InvariantBundle(values)


# ---------------------------------------------------------------------------
# constants


@pytest.mark.parametrize("k, bounds", [(1, (0, 1)), (2, (3, 4)), (3, (9, 10)), (4, (18, 19))])
def test_petrovskii_classic(k, bounds):
    assert petrovskii_classic(k) == bounds


@pytest.mark.parametrize("k, betti", [(1, (1, 1, 0)), (2, (1, 7, 0)), (3, (3, 19, 1)), (4, (7, 37, 3))])
def test_double_plane_betti(k, betti):
    assert double_plane_betti(k) == betti


def test_constants_reject_nonpositive_degree():
    with pytest.raises(BoundsError):
        petrovskii_classic(0)
    with pytest.raises(BoundsError):
        double_plane_betti(0)


# ---------------------------------------------------------------------------
# bundle handling


def test_bundle_derives_half_dimension_and_frak_p():
    iv = bundle(d=4, mu_plus=3, mu_zero=1)
    assert iv.values["n"] == 2 and iv.values["frak_p"] == 2
    assert iv.varkappa("x") == 1 and iv.kappa("x") == 0
    with pytest.raises(BoundsError, match="inconsistent dimensions"):
        bundle(d=4, n=1)
    with pytest.raises(BoundsError, match="frak_p"):
        bundle(mu_plus=1, mu_zero=1, frak_p=2)


def test_bundle_json_round_trip():
    iv = InvariantBundle.from_json({"k": "3/1", "betti_Z": [1, 0, 1], "complete_intersection": True,
                                    "asserted": ["smooth"]})
    assert iv.asserted == ("smooth",)
    back = InvariantBundle.from_json(iv.to_json())
    assert back.values == iv.values and back.asserted == iv.asserted
    with pytest.raises(BoundsError):
        InvariantBundle.from_json({"k": "x/y"})


def test_row_verdicts():
    assert Row("a", F(1), F(2)).verdict == "holds"
    assert Row("a", F(3), F(2)).verdict == "fails"
    assert Row("a", None, F(2)).verdict == "value"
    assert Row("a", F(2), F(2), "=").verdict == "holds"
    assert Row("a", F(1), F(2), "=").verdict == "fails"
    assert Row("a", F(1), F(5, 2)).slack == F(3, 2)


# ---------------------------------------------------------------------------
# Arnold-Viro type estimates


def plane_curve(k, **extra):
    base = dict(n=1, k=k, b2_plus_P=1, b2_minus_P=0, l_k_l=k * (k - 3), l_k3l=3 * k * (k - 1))
    base.update(extra)
    return InvariantBundle(base)


@pytest.mark.parametrize("k", range(1, 9))
def test_qis_curve_on_the_plane_gives_genus_bound(k):
    iv = plane_curve(k, r=1, nu=1, mu_plus=0, mu_minus=0, chi_RX=0, sigma_zero=0)
    rep = arnold_viro_rhs("qis-curve", iv)
    assert rep.row("qis-curve:sigma+").rhs == F((k - 1) * (k - 2), 2)
    assert rep.row("qis-curve:sigma-").rhs == F(3 * k * (k - 1), 2)


def test_qis_curve_example_quartic():
    iv = plane_curve(2, r=3, nu=1, mu_plus=0, mu_minus=2, chi_RX=-2, sigma_zero=3)
    rep = arnold_viro_rhs("qis-curve", iv)
    assert rep.row("qis-curve:sigma+").rhs == 0 + min(3 - 1 - 3, 0)


@settings(max_examples=150, deadline=None)
@given(k=st.integers(1, 8), r=st.integers(1, 10), nu=st.integers(0, 3), mu_plus=nat, mu_minus=nat,
       chi=st.integers(-20, 20), b0t=nat, s0=nat, sp=nat, sm=nat)
def test_no_essential_form_is_the_minimum_of_the_quotient_rows(k, r, nu, mu_plus, mu_minus, chi, b0t, s0, sp, sm):
    common = dict(k=k, r=r, nu=nu, mu_plus=mu_plus, mu_minus=mu_minus, chi_RX=chi,
                  sigma_plus=sp, sigma_minus=sm, sigma_zero=s0)
    full = arnold_viro_rhs("quotient-manifold-plane",
                           bundle(**common, mu_zero=0, beta=0, b0t_A2=b0t, b0t_A1=b0t))
    short = arnold_viro_rhs("no-essential-plane", bundle(**common))
    for sign in "+-":
        alone = full.row(f"quotient-manifold-plane:sigma{sign}")
        with_zero = full.row(f"quotient-manifold-plane:sigma{sign}zero")
        # moving sigma_0 to the right turns the second row into a bound for sigma alone
        assert short.row(f"no-essential-plane:sigma{sign}").rhs == min(alone.rhs, with_zero.rhs - s0)


@settings(max_examples=150, deadline=None)
@given(n=st.integers(1, 4), bp=nat, bm=nat, chi=st.integers(-10, 10), delta=nat, s0=nat)
def test_smooth_hypersurface_matches_complete_intersection(n, bp, bm, chi, delta, s0):
    common = dict(n=n, chi_RX=chi, delta=delta, sigma_zero=s0)
    hyper = arnold_viro_rhs("homology-manifold-hypersurface",
                            bundle(**common, b_d_plus_Xtau=bp, b_d_minus_Xtau=bm, mu_plus=0, mu_minus=0))
    ci = arnold_viro_rhs("complete-intersection", bundle(**common, b_d_plus_CX=bp, b_d_minus_CX=bm))
    assert [r.rhs for r in hyper.rows] == [r.rhs for r in ci.rows]


def test_smooth_sextic_complete_intersection_rows():
    b_plus, b_minus, _ = double_plane_betti(3)
    rep = arnold_viro_rhs("complete-intersection",
                          bundle(n=1, b_d_plus_CX=b_plus, b_d_minus_CX=b_minus, chi_RX=0, delta=0, sigma_zero=0))
    # n odd: sigma_+ is bounded by (b+ - 1)/2, sigma_- by (b- + chi + 1)/2 - 1
    assert rep.row("complete-intersection:sigma+").rhs == 1
    assert rep.row("complete-intersection:sigma-").rhs == 9


@pytest.mark.parametrize("m", [4, 6, 8])
def test_arrangement_rows_are_equalities(m):
    a = moment_arrangement(m)
    phi = phi_residue_route(a)
    for sign in (1, -1):
        block = phi.block(sign)
        iv = arrangement_bundle(m, block.dim, tuple(inertia(block)))
        rep = arnold_viro_rhs("arrangement", iv)
        assert [r.slack for r in rep.rows] == [0, 0]
        assert rep.asserted == ("generic arrangement",)


@pytest.mark.parametrize("m", [4, 6, 8])
def test_qis_curve_rows_on_arrangements_sum_to_the_gap(m):
    a = moment_arrangement(m)
    ci = invariants_from_arrangement(a)
    phi = assemble_phi(curve_model_from_arrangement(a))
    for sign in (1, -1):
        t = inertia(phi.block(sign))
        rep = arnold_viro_rhs("qis-curve", curve_bundle(ci, sign, tuple(t)))
        assert all(r.verdict == "holds" for r in rep.rows)
        assert sum(r.slack for r in rep.rows) + (ci.r - ci.nu - t.sigma_zero) == gap_delta(ci, sign) == 0


def test_missing_field_names_field_and_variant():
    with pytest.raises(BoundsError, match=r"qis-curve: missing field 'l_k_l'"):
        arnold_viro_rhs("qis-curve", bundle(n=1, r=1, nu=0, sigma_zero=0, b2_plus_P=1))
    with pytest.raises(BoundsError, match="unknown variant"):
        arnold_viro_rhs("nope", bundle())
    for variant in ARNOLD_VIRO:
        with pytest.raises(BoundsError, match=variant):
            arnold_viro_rhs(variant, bundle())


def test_qbar_curve_rows():
    iv = plane_curve(3, frak_p=0, t2=0, b0t_A2=0, b0t_A=0, beta=0, b2_A=1, nu=1, b1_P=0, b2_A1=1,
                     nu_prime=1, alpha_im0=0, chi_RX=0, mu_minus=0)
    rep = arnold_viro_rhs("qbar-curve", iv)
    values = [r.rhs for r in rep.rows]
    assert values == [1, 1, 9, 9]


def test_surface_rows():
    iv = bundle(p_g=1, chi_a=2, b1_res_Z2=0, beta=0, alpha_im2=0, d_R2=0, b2_minus_res=19, chi_RX=0,
                chi_hat_RE=0, b2_Ebar=0, chi_hat_CE=0, b1_res=0)
    rep = arnold_viro_rhs("surface", iv)
    assert [r.rhs for r in rep.rows] == [1, 2, 9, 10]


def test_isolated_singularities_rows():
    iv = bundle(n=1, gamma=0, beta=0, delta_prime=0, sigma_zero=0, mu_plus=0, mu_minus=2, mu_zero=0,
                b_d_plus_Xtau=3, b_d_minus_Xtau=19, chi_RX=0)
    rep = arnold_viro_rhs("isolated-singularities", iv)
    assert rep.row("isolated-singularities:sigma+").rhs == 1
    assert rep.row("isolated-singularities:sigma-").rhs == 8


# ---------------------------------------------------------------------------
# Smith theory


def test_smith_rows_for_a_reflected_sphere():
    # reflection of S^2: fixed circle, quotient a disc
    iv = bundle(betti_Z=[1, 0, 1], betti_F=[1, 1], betti_ZcF=[0, 0, 1], betti_Zc=[1, 0, 0])
    rep = smith_rhs(iv)
    assert rep.ok
    assert rep.row("smith:total").slack == 0
    assert [rep.row(f"smith:pair[{k}]").slack for k in range(3)] == [0, 0, 0]


def test_smith_rows_detect_violation():
    iv = bundle(betti_Z=[1, 0, 1], betti_F=[1, 1, 1], betti_ZcF=[0, 0, 1])
    assert not smith_rhs(iv).ok


def test_isolated_defect_row_for_a_nodal_curve():
    iv = bundle(n=1, b_d_A=3, nu_d=1, b_dplus1_Xbar=0, delta=2)
    row = smith_rhs(iv).row("defect:isolated")
    assert (row.lhs, row.rhs) == (2, 3 - 1 + 1 - 0)


def test_smith_needs_data():
    with pytest.raises(BoundsError):
        smith_rhs(bundle(k=2))


@pytest.mark.parametrize("m", [4, 6, 8])
def test_defect_bound_equals_radical_size(m):
    from avk.arrangements import smith_bound
    phi = phi_residue_route(moment_arrangement(m))
    assert smith_bound(m, 2) == inertia(phi.block(1)).sigma_zero == inertia(phi.block(-1)).sigma_zero


# ---------------------------------------------------------------------------
# Hodge identities


def test_double_plane_quotient_betti():
    b_plus, b_minus, _ = double_plane_betti(3)
    iv = bundle(n=1, b_d_plus_CX=b_plus, b_d_minus_CX=b_minus, chi_RX=0, complete_intersection=True)
    rep = hodge_identities(iv)
    assert rep.row("hodge:quotient-b-").rhs == 9 == petrovskii_classic(3)[0]
    assert rep.row("hodge:quotient-b+").rhs == 1


def test_symmetric_input_gives_equal_halves():
    rep = hodge_identities(bundle(n=1, b_d_plus_CX=5, b_d_minus_CX=5, chi_RX=0, t=1))
    assert rep.row("hodge:quotient-b+").rhs == rep.row("hodge:quotient-b-").rhs == 2


def test_hodge_parity_violation():
    with pytest.raises(BoundsError, match="inconsistent inputs"):
        hodge_identities(bundle(n=1, b_d_plus_CX=4, b_d_minus_CX=19, chi_RX=0, t=1))
    with pytest.raises(BoundsError, match="'t'"):
        hodge_identities(bundle(n=1, b_d_plus_CX=3, chi_RX=0))


@pytest.mark.parametrize("k", range(1, 7))
def test_hodge_quotient_of_smooth_double_planes(k):
    b_plus, b_minus, _ = double_plane_betti(k)
    rep = hodge_identities(bundle(n=1, b_d_plus_CX=b_plus, b_d_minus_CX=b_minus, chi_RX=0, t=1,
                                  b_d_minus_Xbar=F(3 * k * (k - 1), 2)))
    assert rep.row("hodge:quotient-b-").verdict == "holds"


def test_hodge_defect_rows_and_local_version():
    iv = bundle(n=1, b_d_plus_CX=3, b_d_minus_CX=19, chi_RX=2, t=1,
                chi_Xbar=12, sigma_Xbar=-8, chi_CX=24, sigma_CX=-16)
    rep = hodge_identities(iv)
    assert rep.row("hodge:defect-anti").lhs == 12 + 8 - H * (24 + 16)
    local = hodge_identities(bundle(n=1, b_milnor_plus=0, b_milnor_minus=2, chi_real_milnor=1))
    assert local.row("hodge-local:quotient-b-").rhs == 1
    assert local.row("hodge-local:quotient-b+zero").rhs == 0


# ---------------------------------------------------------------------------
# Petrovskii type estimates


def plane_petrovskii(**extra):
    base = dict(surface_is_CP2=True, k=3, mu_minus=0, beta=0, b0t_A2=0, b2_A=1, nu=1)
    base.update(extra)
    return InvariantBundle(base)


def test_smooth_sextic_petrovskii():
    assert petrovskii_general(plane_petrovskii()).row("petrovskii:plane").rhs == 19


@pytest.mark.parametrize("nodes", range(0, 6))
def test_nodes_lower_the_bound(nodes):
    rep = petrovskii_general(plane_petrovskii(mu_minus=nodes))
    assert rep.row("petrovskii:plane").rhs == 19 - nodes


def test_six_line_arrangement_bound():
    rep = petrovskii_general(plane_petrovskii(mu_minus=15, b0t_A2=0, b2_A=6, nu=1, chi_RP_plus=-1, chi_RP_minus=2))
    row = rep.row("petrovskii:plane")
    assert row.rhs == 4 + min(0, 0, 6 - 1)
    assert row.lhs == 3 and row.verdict == "holds"


def test_petrovskii_genus_and_euler_rows():
    rep = petrovskii_general(plane_petrovskii(frak_p=0, chi_RX_plus=-18, chi_RX_minus=20))
    assert rep.row("petrovskii:genus").rhs == 1
    assert rep.row("petrovskii:euler+").lhs == 9
    assert rep.row("petrovskii:euler+").rhs == 9
    assert rep.row("petrovskii:euler-").verdict == "holds"


def test_petrovskii_on_a_general_surface():
    iv = bundle(b2_minus_P=1, l_k3l=6, t2=0, b0t_A=0, beta=0, b0t_A2=0, b2_A=1, nu=1, mu_minus=0, chi_RP=2)
    assert petrovskii_general(iv).row("petrovskii:surface").rhs == 2 + 2 + 6 + 0


# ---------------------------------------------------------------------------
# oval counts of cuspidal curves


def ovals(k, **extra):
    base = dict(k=k, p_plus=0, p_zero=0, p_minus=0, n_plus=0, n_zero=0, n_minus=0,
                eps_plus=0, eps_zero=0, eps_minus=k % 2, mu_plus=0, mu_minus=0)
    base.update(extra)
    return InvariantBundle(base)


def test_indicator_validation():
    with pytest.raises(BoundsError, match="add up"):
        cuspidal_bounds(ovals(3, eps_minus=0))
    with pytest.raises(BoundsError, match="add up"):
        cuspidal_bounds(ovals(2, eps_plus=1))
    with pytest.raises(BoundsError, match="0 or 1"):
        cuspidal_bounds(ovals(2, eps_plus=2, eps_minus=-2))


@pytest.mark.parametrize("mu_minus", [0, 2, 4, 6])
def test_cubic_degree_last_row(mu_minus):
    rep = cuspidal_bounds(ovals(3, mu_minus=mu_minus))
    assert rep.row("cuspidal:even-minus-odd").rhs == 9 - H * mu_minus + 1


@pytest.mark.parametrize("k", range(1, 8))
def test_smooth_curves_recover_the_arnold_inequalities(k):
    rep = cuspidal_bounds(ovals(k))
    genus = F((k - 1) * (k - 2), 2)
    even = 1 if k % 2 == 0 else 0
    assert rep.row("cuspidal:odd-hyperbolic").rhs == genus
    assert rep.row("cuspidal:even-hyperbolic").rhs == genus + even
    assert rep.row("cuspidal:odd-minus-even").rhs == F(3 * k * (k - 1), 2) + even
    assert rep.row("cuspidal:even-minus-odd").rhs == F(3 * k * (k - 1), 2) + 1


def test_tricuspidal_quartic_rows():
    # A2 cusps are negative definite: mu+ = 0, mu- = 6
    rep = cuspidal_bounds(ovals(2, mu_minus=6, p_plus=0, n_minus=0))
    assert rep.row("cuspidal:odd-hyperbolic").rhs == 0
    assert rep.row("cuspidal:odd-minus-even").rhs == 3 - 3 + 1


@settings(max_examples=150, deadline=None)
@given(k=st.integers(1, 8), counts=st.lists(st.integers(0, 5), min_size=6, max_size=6),
       mu_plus=nat, mu_minus=nat)
def test_cuspidal_rows_relax_the_quasi_cuspidal_ones(k, counts, mu_plus, mu_minus):
    names = ["p_plus", "p_zero", "p_minus", "n_plus", "n_zero", "n_minus"]
    rep = cuspidal_bounds(ovals(k, r=1, nu=0, mu_plus=mu_plus, mu_minus=mu_minus, **dict(zip(names, counts))))
    for tail in ("odd-hyperbolic", "even-hyperbolic", "odd-minus-even", "even-minus-odd"):
        quasi, plain = rep.row(f"quasi-cuspidal:{tail}"), rep.row(f"cuspidal:{tail}")
        assert quasi.lhs == plain.lhs
        assert quasi.rhs <= plain.rhs
        if counts[1] >= 1:
            assert quasi.rhs == plain.rhs


def test_non_parabolic_refinement():
    plain = cuspidal_bounds(ovals(2, r=1, nu=0, p_zero=1))
    refined = cuspidal_bounds(ovals(2, r=1, nu=0, p_zero=1, non_parabolic=True))
    assert refined.row("cuspidal:even-hyperbolic").rhs == plain.row("cuspidal:even-hyperbolic").rhs - 1
    assert refined.row("quasi-cuspidal:even-hyperbolic").rhs == plain.row("quasi-cuspidal:even-hyperbolic").rhs - 1


# ---------------------------------------------------------------------------
# dispatcher


def test_run_combines_groups():
    iv = plane_petrovskii(**dict(n=1, b2_plus_P=1, b2_minus_P=0, l_k_l=0, l_k3l=18, r=1, mu_plus=0,
                                 chi_RX=0, sigma_zero=0, b_d_plus_CX=3, b_d_minus_CX=19, t=1))
    rep = run(["arnold-viro:qis-curve", "petrovskii", "hodge"], iv)
    ids = [r.id for r in rep.rows]
    assert "qis-curve:sigma+" in ids and "petrovskii:plane" in ids and "hodge:quotient-b-" in ids
    with pytest.raises(BoundsError):
        run(["bogus"], iv)
