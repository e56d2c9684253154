import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkfield.bispinor import Sector
from dkfield.dynamics import (
    G,
    dk_residual,
    equivalence_report,
    lorentz_condition_residual,
    mass_shell_wavevector,
    massless_maxwell_residual,
    massless_pseudovector_residual,
    max_abs,
    potential_equation_residual,
    potential_equation_solutions,
    proca_vector_residual,
    pseudoscalar_sector_residual,
    pseudovector_proca_residual,
    random_offshell_field,
    random_onshell_field,
    scalar_sector_residual,
    spinor_residual,
    spinor_tensor_equivalence,
    transform_field,
)
from dkfield.fields import (
    PlaneWave,
    PlaneWaveField,
    PointChargeField,
    ZeroField,
    curl_tensor,
    dual_curl_tensor,
    load_field_spec,
)
from dkfield.lorentz import random_sl2c

seeds = st.integers(0, 2**32 - 1)
X = np.array([0.3, -0.7, 1.1, 0.4])


def transverse(k, rng):
    eps = rng.normal(size=4) + 1j * rng.normal(size=4)
    kup = G * k
    eps[0] = -(kup[1:] @ eps[1:]) / kup[0]
    return eps


def cos_wave(k, amp):
    """Real cos(-k.x) amplitude-vector wave as two conjugate exponentials."""
    k = np.asarray(k, float)
    amp = np.asarray(amp, complex)
    return PlaneWave(np.array([k, -k]), 0.5 * np.array([amp, amp]), amp.shape)


def sin_wave(k, amp):
    """sin(-k.x) = (i/2)(e^{-ik.x} - e^{ik.x})... written for phase theta = -k.x."""
    k = np.asarray(k, float)
    amp = np.asarray(amp, complex)
    return PlaneWave(np.array([k, -k]), np.array([-0.5j * amp, 0.5j * amp]), amp.shape)


# theta = z - t  <=>  -k.x with k = (1, 0, 0, -1)
K_ZT = np.array([1.0, 0.0, 0.0, -1.0])


def test_plane_wave_derivative_exact():
    pw = PlaneWave.single([1.0, 2.0, -0.5, 0.3], [1 + 2j])
    g = pw.grad(X)
    ph = np.exp(-1j * (pw.k[0] @ X))
    assert np.allclose(g[:, 0], -1j * pw.k[0] * (1 + 2j) * ph)
    assert np.allclose(pw.derivative(2).value(X), g[2])


def test_sin_wave_helper():
    s = sin_wave(K_ZT, [1.0])
    assert np.isclose(s.value(X)[0], np.sin(X[3] - X[0]))


def test_dk_zero_field():
    f = PlaneWaveField.from_terms([])
    assert np.array_equal(dk_residual(f, 1.0, X), np.zeros(16))
    assert spinor_tensor_equivalence(f, 1.0, X) == 0.0


def test_dk_proca_embedding_oracle():
    # independent on-shell oracle: (0, A, 0, 0, (dA - dA)/m) with k^2 = m^2, k.eps = 0
    rng = np.random.default_rng(1)
    m = 1.7
    k = mass_shell_wavevector(m, rng)
    A = PlaneWave.single(k, transverse(k, rng))
    F = curl_tensor(A) * (1 / m)
    amp = np.zeros(16, complex)
    amp[1:5] = A.amp[0]
    amp[10:] = F.amp[0]
    f = PlaneWaveField(k[None], amp[None])
    assert np.abs(dk_residual(f, m, X)).max() < 1e-12
    assert max_abs(proca_vector_residual(A, F, m, X)) < 1e-12


def test_dk_scalar_embedding_oracle():
    rng = np.random.default_rng(2)
    m = 0.8
    k = mass_shell_wavevector(m, rng)
    amp = np.zeros(16, complex)
    amp[0] = 1.0
    amp[1:5] = -1j * k / m  # Phi_l = d_l Phi / m
    f = PlaneWaveField(k[None], amp[None])
    assert np.abs(dk_residual(f, m, X)).max() < 1e-12
    assert max_abs(scalar_sector_residual(f, m, X)) < 1e-12


def test_pseudoscalar_sector():
    rng = np.random.default_rng(3)
    m = 1.2
    k = mass_shell_wavevector(m, rng)
    amp = np.zeros(16, complex)
    amp[5] = 1.0
    amp[6:10] = -1j * k / m
    f = PlaneWaveField(k[None], amp[None])
    assert max_abs(pseudoscalar_sector_residual(f, m, X)) < 1e-12
    assert np.abs(dk_residual(f, m, X)).max() < 1e-12
    off = PlaneWaveField((k * 1.1)[None], amp[None])
    assert max_abs(pseudoscalar_sector_residual(off, m, X)) > 1e-3


def test_scalar_off_shell_nonzero():
    amp = np.zeros(16, complex)
    amp[0] = 1.0
    k = np.array([2.0, 0.1, 0.0, 0.0])
    amp[1:5] = -1j * k
    f = PlaneWaveField(k[None], amp[None])
    assert max_abs(scalar_sector_residual(f, 1.0, X)) > 1e-3


def test_onshell_field_from_fourier_oracle():
    rng = np.random.default_rng(4)
    for m in (0.5, 1.0, 2.0):
        f = random_onshell_field(m, rng)
        assert np.abs(dk_residual(f, m, X)).max() < 1e-10
        assert spinor_residual(f, m, X) < 1e-10


@given(seeds)
@settings(max_examples=40)
def test_spinor_tensor_residuals_match(seed):
    rng = np.random.default_rng(seed)
    f = random_offshell_field(rng)
    r = equivalence_report(f, 1.0, rng.normal(size=4))
    assert r["mismatch"] < 1e-12 * max(1.0, r["spinor"])
    assert r["spinor"] > 1e-6 and r["tensor"] > 1e-6
    assert spinor_tensor_equivalence(f, 1.0, X) < 1e-10


@given(seeds)
@settings(max_examples=25)
def test_lorentz_covariance(seed):
    rng = np.random.default_rng(seed)
    f = random_onshell_field(1.0, rng)
    g = transform_field(f, random_sl2c(rng))
    assert np.abs(dk_residual(g, 1.0, rng.normal(size=4))).max() < 1e-8


@given(seeds, st.floats(-3, 3))
@settings(max_examples=25)
def test_dk_residual_linear(seed, s):
    rng = np.random.default_rng(seed)
    f, g = random_offshell_field(rng), random_offshell_field(rng)
    lhs = dk_residual(f + g * s, 1.0, X)
    rhs = dk_residual(f, 1.0, X) + s * dk_residual(g, 1.0, X)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_proca_zero_and_longitudinal():
    z4, z6 = PlaneWave.zero(4), PlaneWave.zero(6)
    assert max_abs(proca_vector_residual(z4, z6, 1.0, X)) == 0
    rng = np.random.default_rng(5)
    k = mass_shell_wavevector(1.0, rng)
    A = PlaneWave.single(k, k)  # eps parallel to k
    r = proca_vector_residual(A, curl_tensor(A), 1.0, X)
    assert abs(r["lorentz"][0]) > 1e-3


def test_proca_requires_positive_mass():
    z4, z6 = PlaneWave.zero(4), PlaneWave.zero(6)
    with pytest.raises(ValueError):
        proca_vector_residual(z4, z6, 0.0, X)
    with pytest.raises(ValueError):
        pseudovector_proca_residual(z4, z6, 0.0, X)
    with pytest.raises(ValueError):
        dk_residual(PlaneWaveField.from_terms([]), -1.0, X)


def test_pseudovector_proca_onshell():
    rng = np.random.default_rng(6)
    m = 1.4
    k = mass_shell_wavevector(m, rng)
    At = PlaneWave.single(k, transverse(k, rng))
    # F^{dk} = eps^{dkcl} d_c A~_l / m, lowered
    F = dual_curl_tensor(At) * (1 / m)
    assert max_abs(pseudovector_proca_residual(At, F, m, X)) < 1e-10
    assert max_abs(pseudovector_proca_residual(PlaneWave.zero(4), PlaneWave.zero(6), m, X)) == 0
    # vector-sector pair fed into the pseudovector system
    assert max_abs(pseudovector_proca_residual(At, curl_tensor(At) * (1 / m), m, X)) > 1e-3


def test_maxwell_example_wave():
    # E_x = cos(z-t), B_y = cos(z-t), covariant A_1 = -sin(z-t)
    E = cos_wave(K_ZT, [1, 0, 0])
    B = cos_wave(K_ZT, [0, 1, 0])
    A = sin_wave(K_ZT, [0, -1, 0, 0])
    assert max_abs(massless_maxwell_residual(E, B, A, X)) < 1e-12
    assert max_abs(massless_maxwell_residual(E, B * -1.0, A, X)) > 0.1


def test_pseudovector_example_wave():
    # covariant A~_1 = -sin(z-t): E~ = rot A~ = (0, cos, 0), B~ = d_t A~ = (-cos, 0, 0)
    At = sin_wave(K_ZT, [0, -1, 0, 0])
    Et = cos_wave(K_ZT, [0, 1, 0])
    Bt = cos_wave(K_ZT, [-1, 0, 0])
    assert max_abs(massless_pseudovector_residual(Et, Bt, At, X)) < 1e-12


def test_massless_zero():
    z3, z4 = ZeroField(3), ZeroField(4)
    assert max_abs(massless_maxwell_residual(z3, z3, z4, X)) == 0
    assert max_abs(massless_pseudovector_residual(z3, z3, z4, X)) == 0


def test_coulomb_and_monopole_gauss():
    x = np.array([0.0, 0.6, 0.0, 0.8])  # r = 1
    E = PointChargeField(2.5)
    r = massless_maxwell_residual(E, ZeroField(3), ZeroField(4), x)
    assert abs(r["gauss_e"][0]) < 1e-8
    assert np.abs(r["faraday"]).max() < 1e-8 and np.abs(r["ampere"]).max() < 1e-8
    Bt = PointChargeField(1.0)
    r = massless_pseudovector_residual(ZeroField(3), Bt, ZeroField(4), x)
    assert abs(r["gauss_b"][0]) < 1e-8
    with pytest.raises(ValueError):
        E.value(np.zeros(4))


def test_maxwell_reports_current_conservation():
    j = PlaneWave.single([1.0, 0.5, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0])
    z3, z4 = ZeroField(3), ZeroField(4)
    r = massless_maxwell_residual(z3, z3, z4, X, j)
    assert abs(r["continuity"][0]) > 0.1
    assert abs(r["gauss_e"][0]) > 0.1


@pytest.mark.parametrize("sector", [Sector.S1, Sector.S1tilde])
def test_lorentz_condition_emerges(sector):
    rng = np.random.default_rng(8)
    sl = slice(1, 5) if sector is Sector.S1 else slice(6, 10)
    for _ in range(20):
        k = rng.normal(size=4)
        N = potential_equation_solutions(k, sector)
        assert N.shape[1] == 3
        f = PlaneWave.single(k, N @ rng.normal(size=3))
        assert potential_equation_residual(f, sector, X) < 1e-12
        assert lorentz_condition_residual(f.component(sl), X) < 1e-12


def test_potential_equations_reject_longitudinal():
    # a pure-gradient potential violates the equations unless F is its curl; random fields fail
    rng = np.random.default_rng(9)
    t = np.zeros(16, complex)
    t[1:5] = rng.normal(size=4)
    t[10:] = rng.normal(size=6)
    f = PlaneWave.single(rng.normal(size=4), t)
    assert potential_equation_residual(f, Sector.S1, X) > 1e-3
    with pytest.raises(ValueError):
        potential_equation_residual(f, Sector.S0, X)


def test_field_spec_parsing():
    spec = load_field_spec('[{"k": [1, 0, 0, 0], "polarization": ' + str([[1, 0]] * 16) + "}]")
    assert len(spec.field) == 1 and spec.electric is None
    spec = load_field_spec('{"terms": [], "currents": {"electric": [{"k": [0,0,0,0], "polarization": [[1,0],[0,0],[0,0],[0,0]]}]}}')
    assert spec.electric.shape == (4,)
    with pytest.raises(ValueError):
        load_field_spec('[{"k": [1, 0, 0], "polarization": []}]')
    with pytest.raises(ValueError):
        load_field_spec("3")
