import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dkfield.extended import (
    CombinedStrength,
    CurrentPair,
    PotentialPair,
    box,
    combine_fields,
    discrete_duality,
    dual_tensor,
    duality_invariance_test,
    duality_rotate,
    dyonic_scenario,
    extended_residual,
    monopole_field,
    monopole_flux_test,
    potential_identity_residual,
    random_lorentz_potential,
    strength_fields,
    strengths_from_potentials,
    two_charge_residual,
)
from dkfield.fields import PlaneWave, curl_tensor, dual_curl_tensor, electric_magnetic, f6_from_electric_magnetic

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
six = arrays(np.float64, 6, elements=finite)
seeds = st.integers(0, 2**32 - 1)
X = np.array([0.2, 0.5, -0.3, 0.9])


def test_dual_of_f01():
    F = np.zeros(6)
    F[0] = 1.0
    D = dual_tensor(F)
    # F*_23 = F_01, nothing else
    assert np.array_equal(D, [0, 0, 0, 1, 0, 0])


def test_dual_em_mapping():
    E, B = np.array([1.0, 2.0, 3.0]), np.array([-1.0, 0.5, 4.0])
    D = dual_tensor(f6_from_electric_magnetic(E, B))
    assert np.array_equal(D, f6_from_electric_magnetic(B, -E))


@given(six)
def test_dual_dual_is_minus_identity(F):
    assert np.allclose(dual_tensor(dual_tensor(F)), -F, atol=1e-12)


def test_dual_matrix_and_stored_forms_agree():
    from dkfield.bispinor import antisym_to_matrix, matrix_to_antisym

    F = np.random.default_rng(0).normal(size=6)
    assert np.allclose(matrix_to_antisym(dual_tensor(antisym_to_matrix(F))), dual_tensor(F))
    assert np.array_equal(dual_tensor(np.zeros(6)), np.zeros(6))
    with pytest.raises(ValueError):
        dual_tensor(np.zeros(5))


@given(six, six)
def test_combine_fields(F, Ft):
    c = combine_fields(F, Ft)
    assert np.allclose((c.plus + c.minus) / 2, F)
    assert np.allclose(c.plus_dual, dual_tensor(F + Ft))
    z = combine_fields(F, np.zeros(6))
    assert np.array_equal(z.plus, z.minus)


def test_strengths_special_cases():
    rng = np.random.default_rng(1)
    A = random_lorentz_potential(rng)
    zero = PlaneWave.zero(4)
    c = strengths_from_potentials(PotentialPair(A, zero), X)
    assert np.allclose(c.plus, c.minus) and np.allclose(c.plus, curl_tensor(A).value(X))
    c = strengths_from_potentials(PotentialPair(zero, A), X)
    assert np.allclose(c.plus, -c.minus) and np.allclose(c.plus, dual_curl_tensor(A).value(X))


@given(seeds)
@settings(max_examples=50)
def test_two_potential_identity(seed):
    rng = np.random.default_rng(seed)
    # arbitrary potentials: the identity does not need the Lorentz condition
    A = PlaneWave(rng.normal(size=(2, 4)), rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4)), (4,))
    At = PlaneWave(rng.normal(size=(2, 4)), rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4)), (4,))
    assert potential_identity_residual(PotentialPair(A, At), rng.normal(size=4)) < 1e-12


def test_extended_vacuum_and_zero():
    rng = np.random.default_rng(2)
    p = PotentialPair(random_lorentz_potential(rng, null=True), random_lorentz_potential(rng, null=True))
    r = extended_residual(strength_fields(p), None, None, X)
    assert max(np.abs(v).max() for v in r.values()) < 1e-10
    z = PlaneWave.zero(6)
    r = extended_residual(CombinedStrength(z, z, z, z), None, None, X)
    assert all(np.array_equal(v, np.zeros(4)) for v in r.values())


def test_extended_sourced_potentials():
    rng = np.random.default_rng(3)
    p = PotentialPair(random_lorentz_potential(rng), random_lorentz_potential(rng))
    r = extended_residual(strength_fields(p), box(p.A), box(p.At), X)
    assert max(np.abs(v).max() for v in r.values()) < 1e-8
    # flipping a magnetic current sign breaks the dual equations only
    r = extended_residual(strength_fields(p), box(p.A), box(p.At) * -1.0, X)
    assert np.abs(r["plus"]).max() < 1e-8 and np.abs(r["plus_dual"]).max() > 1e-3


def test_rotation_identity_and_inverse():
    sc = dyonic_scenario(4)
    p = sc.potentials
    same = duality_rotate(p, 0.0)
    assert np.allclose(same.A.value(X), p.A.value(X)) and np.allclose(same.At.value(X), p.At.value(X))
    back = duality_rotate(duality_rotate(p, 0.9), -0.9)
    assert np.abs(back.A.value(X) - p.A.value(X)).max() < 1e-12
    full = duality_rotate(p, 2 * np.pi)
    assert np.abs(full.At.value(X) - p.At.value(X)).max() < 1e-12


def test_quarter_turn_matches_discrete_map():
    sc = dyonic_scenario(5)
    p, cur, c = sc.potentials, sc.currents, strength_fields(sc.potentials)
    q = duality_rotate(p, np.pi / 2)
    assert np.allclose(q.A.value(X), p.At.value(X), atol=1e-12)
    assert np.allclose(q.At.value(X), -p.A.value(X), atol=1e-12)
    for sign in (1, -1):
        a = duality_rotate(c, sign * np.pi / 2).at(X)
        b = discrete_duality(c, sign).at(X)
        assert max(np.abs(u - v).max() for u, v in zip(a.parts(), b.parts())) < 1e-12
        cr, cd = duality_rotate(cur, sign * np.pi / 2), discrete_duality(cur, sign)
        assert np.abs(cr.jt.value(X) - cd.jt.value(X)).max() < 1e-12
    with pytest.raises(ValueError):
        discrete_duality(p, 2)
    with pytest.raises(TypeError):
        duality_rotate(np.zeros(3), 0.1)


@pytest.mark.parametrize("chi", [0.0, 0.7, np.pi / 2, -2.1])
def test_duality_invariance(chi):
    assert duality_invariance_test(dyonic_scenario(0), chi) < 1e-10


def test_duality_invariance_with_arbitrary_currents():
    sc = dyonic_scenario(6)
    rng = np.random.default_rng(6)
    sc.currents = CurrentPair(PlaneWave.single(rng.normal(size=4), rng.normal(size=4)), PlaneWave.single(rng.normal(size=4), rng.normal(size=4)))
    assert duality_invariance_test(sc, 1.1) < 1e-10


@pytest.mark.parametrize("combination", ["sum", "difference"])
def test_two_charge_combination(combination):
    rng = np.random.default_rng(7)
    A, At = random_lorentz_potential(rng), random_lorentz_potential(rng)
    E, B = electric_magnetic(curl_tensor(A))
    Et, Bt = electric_magnetic(dual_curl_tensor(At))
    s = 1.0 if combination == "sum" else -1.0
    r = two_charge_residual(E + Et * s, B + Bt * s, box(A), box(At), X, combination)
    assert max(np.abs(v).max() for v in r.values()) < 1e-10
    wrong = "difference" if combination == "sum" else "sum"
    r = two_charge_residual(E + Et * s, B + Bt * s, box(A), box(At), X, wrong)
    assert max(np.abs(v).max() for v in r.values()) > 1e-3
    with pytest.raises(ValueError):
        two_charge_residual(E, B, None, None, X, "product")


def test_monopole_flux():
    assert monopole_flux_test(0.0, 1.0, 8) == 0.0
    assert abs(monopole_flux_test(1.0, 1.0, 8) + 1) < 1e-10
    assert abs(monopole_flux_test(1.0, 1.0, 8) - monopole_flux_test(1.0, 2.0, 8)) < 1e-10
    assert abs(monopole_flux_test(-2.5, 3.0, 12) - 2.5) < 1e-10
    # off-centre charge needs a finer rule but still gives -g
    assert abs(monopole_flux_test(1.0, 1.0, 48, center=(0.3, -0.2, 0.1)) + 1) < 1e-10
    with pytest.raises(ValueError):
        monopole_flux_test(1.0, 0.0)
    with pytest.raises(ValueError):
        monopole_flux_test(1.0, 1.0, 8, center=(2, 0, 0))


def test_monopole_field_points_inward_for_positive_charge():
    B = monopole_field(1.0, np.array([[1.0, 0, 0]]))
    assert B[0, 0] == pytest.approx(-1 / (4 * np.pi))
