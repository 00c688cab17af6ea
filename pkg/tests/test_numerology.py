import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from galdesk import numerology as num
from galdesk import root_datum as rdm

A1 = rdm.build_root_datum([("A", 1)])
A2 = rdm.build_root_datum([("A", 2)])
B2 = rdm.build_root_datum([("B", 2)])
C2 = rdm.build_root_datum([("C", 2)])
GL2 = rdm.gl_datum(2)


def test_signature_invariants():
    with pytest.raises(num.NumerologyError):
        num.FieldSignature(3, 1, 2, cm=False, totally_real=False, local_degrees_above_p=(3,))
    with pytest.raises(num.NumerologyError):
        num.FieldSignature(3, 1, 1, cm=True, totally_real=False, local_degrees_above_p=(3,))
    with pytest.raises(num.NumerologyError):
        num.cm_signature(3)
    sig = num.cm_signature(4, (2,))
    assert sig.local_degrees_above_p == (2, 2)


def test_archimedean_bound_rational_gl2():
    scen = num.ordinary_scenario(GL2, num.rational_signature())
    rep = num.archimedean_bound(scen)
    assert (rep.lhs, rep.rhs) == (1, 1)
    assert rep.holds and rep.odd_equality


def test_archimedean_bound_imaginary_quadratic():
    scen = num.ordinary_scenario(GL2, num.imaginary_quadratic_signature())
    rep = num.archimedean_bound(scen)
    # One complex place contributes dim g0 = 3; the bound 2*1 + 1*1 = 3 is met
    # but the totally-real oddness target 2 is not.
    assert (rep.lhs, rep.rhs) == (3, 3)
    assert rep.holds and not rep.odd_equality


def test_archimedean_bound_totally_real_cubic():
    scen = num.ordinary_scenario(GL2, num.totally_real_signature(3))
    rep = num.archimedean_bound(scen)
    assert rep.odd_equality


def test_real_h0_range_validation():
    sig = num.rational_signature()
    with pytest.raises(num.NumerologyError):
        num.Scenario(GL2, sig, (num.PlaceAboveP(num.ORDINARY, 1),), (), (0,))


def test_oddness_audit_gl2():
    # Ad(diag(1,-1)) on sl2 fixes the torus line only.
    mat = rdm.adjoint_involution_from_signs(GL2, (-1,))
    [(h0, odd)] = num.oddness_audit(GL2, [mat], p=5)
    assert (h0, odd) == (1, True)
    ident = rdm.adjoint_involution_from_signs(GL2, (1,))
    [(h0, odd)] = num.oddness_audit(GL2, [ident], p=5)
    assert (h0, odd) == (3, False)


def test_oddness_audit_sp4():
    # Split Cartan involution of sp4 with fixed space of dimension 4 = dim n.
    mat = rdm.adjoint_involution_from_signs(C2, (-1, -1))
    [(h0, odd)] = num.oddness_audit(C2, [mat], p=7)
    assert (h0, odd) == (4, True)


def test_oddness_audit_rejects_non_involution():
    bad = rdm.adjoint_torus_matrix(GL2, 5, (2,))
    with pytest.raises(num.NumerologyError):
        num.oddness_audit(GL2, [bad], p=5)


def test_tangent_dims():
    assert num.tangent_dim_at_p(num.NEARLY_ORDINARY, 1, GL2, 1) == 3
    assert num.tangent_dim_at_p(num.ORDINARY, 1, GL2, 1) == 2
    assert num.tangent_dim_at_p(num.ORDINARY, 0, A2, 4) == 4
    with pytest.raises(num.NumerologyError):
        num.tangent_dim_at_p("crystalline", 1, GL2, 0)


def test_wiles_difference_headline_values():
    # Totally real + ordinary + odd: 0.
    scen = num.ordinary_scenario(GL2, num.totally_real_signature(2))
    assert num.wiles_difference(scen) == 0
    # Imaginary quadratic + nearly ordinary: +1 (one-variable deformation ring).
    scen = num.ordinary_scenario(GL2, num.imaginary_quadratic_signature(),
                                 mode=num.NEARLY_ORDINARY)
    assert num.wiles_difference(scen) == 1
    # Imaginary quadratic + ordinary on SL3: -2.
    scen = num.ordinary_scenario(A2, num.imaginary_quadratic_signature())
    assert num.wiles_difference(scen) == -2


@pytest.mark.parametrize("rd", [A1, A2, B2])
@pytest.mark.parametrize("degree", [2, 4])
def test_wiles_difference_cm_menus(rd, degree):
    t0 = rdm.dimension_profile(rd)[3]
    sig_tr = num.totally_real_signature(degree)
    sig_cm = num.cm_signature(degree)
    assert num.wiles_difference(num.ordinary_scenario(rd, sig_tr)) == 0
    assert num.wiles_difference(num.ordinary_scenario(rd, sig_cm)) == -(degree // 2) * t0
    assert num.wiles_difference(
        num.ordinary_scenario(rd, sig_cm, mode=num.NEARLY_ORDINARY)
    ) == (degree // 2) * t0


@given(st.sampled_from([A1, A2, B2]), st.integers(0, 6), st.booleans())
@settings(max_examples=40, deadline=None)
def test_balanced_place_has_no_effect(rd, h0, cm):
    sig = num.cm_signature(2) if cm else num.totally_real_signature(2)
    base = num.ordinary_scenario(rd, sig)
    augmented = num.ordinary_scenario(rd, sig, finite_places=(num.FinitePlace.balanced(h0),))
    assert num.wiles_difference(base) == num.wiles_difference(augmented)


def test_wiles_report_terms():
    scen = num.ordinary_scenario(GL2, num.imaginary_quadratic_signature(),
                                 mode=num.NEARLY_ORDINARY)
    rep = num.wiles_difference(scen, report=True)
    assert rep.difference == 1
    assert sum(v for _, v in rep.terms) == 1


def test_cm_parameter():
    assert num.cm_parameter(num.imaginary_quadratic_signature(), GL2) == 1
    assert num.cm_parameter(num.imaginary_quadratic_signature(), A2) == 2
    assert num.cm_parameter(num.cm_signature(4), B2) == 4
    with pytest.raises(num.NumerologyError):
        num.cm_parameter(num.totally_real_signature(2), GL2)


@pytest.mark.parametrize("rd,degree", [(A1, 2), (A2, 2), (B2, 2), (A1, 4), (B2, 4)])
def test_cm_parameter_matches_nearly_ordinary_difference(rd, degree):
    sig = num.cm_signature(degree)
    scen = num.ordinary_scenario(rd, sig, mode=num.NEARLY_ORDINARY)
    assert num.cm_parameter(sig, rd) == num.wiles_difference(scen)
    # Balanced away-from-p conditions leave the identity intact.
    balanced = num.ordinary_scenario(
        rd, sig, mode=num.NEARLY_ORDINARY,
        finite_places=(num.FinitePlace.balanced(2), num.FinitePlace.balanced(0)))
    assert num.cm_parameter(sig, rd) == num.wiles_difference(balanced)


def test_large_image_prime_bound():
    assert num.large_image_prime_bound(A2) == 29
    assert num.large_image_prime_bound(B2) == 19
    assert num.large_image_prime_bound(A1) == 19


def test_example_local_dims():
    assert num.example_local_dims(2, 5) == (0, 1, 0)
    assert num.example_local_dims(0, 5) == (1, 2, 0)
    assert num.example_local_dims(1, 5) == (0, 2, 1)
    for r in range(0, 12):
        h0, h1, h2 = num.example_local_dims(r, 7)
        assert h1 == h0 + h2 + 1


def test_example_conditions_check():
    rep = num.example_conditions_check(A2, 2, 29)
    assert rep.all_pass and rep.sqrt_in_base_field
    rep = num.example_conditions_check(A1, 3, 19)
    assert rep.all_pass and not rep.sqrt_in_base_field
    with pytest.raises(num.NumerologyError):
        num.example_conditions_check(A1, 1, 19)
    with pytest.raises(num.NumerologyError):
        num.example_conditions_check(A1, 18, 19)  # r = 0 mod p-1
