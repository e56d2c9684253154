import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from dkfield.bispinor import Bispinor, Sector, TensorMultiplet, check_block_constraints, compose, decompose, project_sector
from dkfield.clifford import METRIC, PAULI
from dkfield.lorentz import (
    SL2CElement,
    discrete_transform,
    discrete_transform_matrix,
    discrete_vector_rep,
    intertwiner_residuals,
    lorentz_matrix_residual,
    random_sl2c,
    sl2c_boost,
    sl2c_rotation,
    transform_bispinor,
    verify_intertwiner,
    vector_rep,
)

seeds = st.integers(0, 2**32 - 1)


def _n_sigma(n):
    n = np.asarray(n, float) / np.linalg.norm(n)
    return sum(n[i] * PAULI[i + 1] for i in range(3))


@pytest.mark.parametrize("n,r", [((0, 0, 1), 0.7), ((1, 2, -1), 1.3), ((0.3, 0, 0), -0.4)])
def test_boost_matches_matrix_exponential(n, r):
    assert np.allclose(sl2c_boost(n, r).B, scipy.linalg.expm(0.5 * r * _n_sigma(n)), atol=1e-14)


@pytest.mark.parametrize("n,a", [((0, 0, 1), 0.3), ((1, 1, 1), 2.5)])
def test_rotation_matches_matrix_exponential(n, a):
    assert np.allclose(sl2c_rotation(n, a).B, scipy.linalg.expm(-0.5j * a * _n_sigma(n)), atol=1e-14)


def test_z_boost_vector_rep():
    b = 0.7
    L = vector_rep(sl2c_boost((0, 0, 1), b))
    expected = np.eye(4)
    expected[0, 0] = expected[3, 3] = np.cosh(b)
    expected[0, 3] = expected[3, 0] = -np.sinh(b)
    assert np.allclose(L, expected, atol=1e-14)


def test_z_rotation_vector_rep():
    a = 0.3
    L = vector_rep(sl2c_rotation((0, 0, 1), a))
    assert np.allclose(L[1:3, 1:3], [[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]], atol=1e-14)
    assert np.isclose(L[0, 0], 1) and np.isclose(L[3, 3], 1)


@given(seeds)
@settings(max_examples=50)
def test_homomorphism_and_metric(seed):
    rng = np.random.default_rng(seed)
    a, b = random_sl2c(rng), random_sl2c(rng)
    La, Lb = vector_rep(a), vector_rep(b)
    assert np.abs(vector_rep(a @ b) - La @ Lb).max() < 1e-9
    assert lorentz_matrix_residual(La) < 1e-10
    assert np.isclose(np.linalg.det(La), 1, atol=1e-10)
    assert La[0, 0] >= 1 - 1e-12
    assert np.abs(vector_rep(-a) - La).max() < 1e-12


@given(seeds)
@settings(max_examples=50)
def test_intertwiners(seed):
    k = random_sl2c(np.random.default_rng(seed))
    r = intertwiner_residuals(k)
    assert max(r.values()) < 1e-10
    assert verify_intertwiner(k) == r["gamma"]


def test_identity_element():
    assert np.allclose(vector_rep(SL2CElement.identity()), np.eye(4))


def test_element_validation():
    with pytest.raises(ValueError):
        SL2CElement(2 * np.eye(2))
    with pytest.raises(ValueError):
        SL2CElement(np.eye(3))
    with pytest.raises(ValueError):
        sl2c_boost((0, 0, 0), 1.0)
    with pytest.raises(ValueError):
        sl2c_rotation((1, 0), 1.0)


@pytest.mark.parametrize("sector", list(Sector))
def test_transform_preserves_sector(sector):
    rng = np.random.default_rng(5)
    for _ in range(20):
        U = compose(project_sector(TensorMultiplet.random(rng), sector))
        assert check_block_constraints(transform_bispinor(U, random_sl2c(rng)), sector) < 1e-10


def test_vector_part_transforms_with_L():
    rng = np.random.default_rng(7)
    k = random_sl2c(rng)
    v = rng.normal(size=4)
    U = compose(TensorMultiplet.from_parts(vector=v))
    t = decompose(transform_bispinor(U, k))
    assert np.allclose(t.vector, vector_rep(k) @ v, atol=1e-12)
    assert np.abs(np.delete(t.components, range(1, 5))).max() < 1e-12


def test_discrete_maps():
    rng = np.random.default_rng(3)
    U = Bispinor(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    for which in "MN":
        assert np.array_equal(discrete_transform(discrete_transform(U, which), which).U, U.U)
        assert np.allclose(discrete_transform(U, which).U, discrete_transform_matrix(U, which).U, atol=0)
    assert np.allclose(discrete_vector_rep("M"), METRIC)
    assert np.allclose(discrete_vector_rep("N"), -METRIC)
    with pytest.raises(ValueError):
        discrete_transform(U, "P")


def test_m_on_pure_vector_flips_spatial_parts():
    v = np.array([1.0, 2.0, 3.0, 4.0])
    t = decompose(discrete_transform(compose(TensorMultiplet.from_parts(vector=v)), "M"))
    assert np.allclose(t.vector, [1, -2, -3, -4], atol=1e-14)
