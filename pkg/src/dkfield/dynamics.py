"""Residual evaluators for the tensor field systems and the spinor/tensor equivalence.

Every evaluator works at a single contravariant 4-point x on samplers from
``dkfield.fields``. Derivatives are exact. Upper/lower indices are moved with g.
"""

from __future__ import annotations

import numpy as np

from .bispinor import (
    ANTISYM,
    PSEUDOVECTOR,
    VECTOR,
    Sector,
    antisym_to_matrix,
    compose_array,
    decompose_array,
    sector_mask,
)
from .clifford import METRIC, PAIRS, epsilon_upper, gammas, sigmas
from .fields import PlaneWave, PlaneWaveField, Sampler
from .lorentz import SL2CElement, bispinor_transform_matrix, vector_rep

G = np.diag(METRIC)  # (+1, -1, -1, -1)
_PAIR_SIGN = np.array([G[m] * G[n] for m, n in PAIRS])

# decompose((i gamma^a d_a - m) U) equals this diagonal times dk_residual
SPINOR_TO_TENSOR_SIGNS = np.concatenate([[-1.0], G, [-1.0], G, _PAIR_SIGN])


def _check_mass(m: float, positive: bool = False) -> float:
    m = float(m)
    if m < 0 or not np.isfinite(m):
        raise ValueError(f"mass must be a finite real >= 0, got {m}")
    if positive and m == 0:
        raise ValueError("mass must be > 0 here; use the massless evaluators for m = 0")
    return m


def _antisym_grad(grad6: np.ndarray) -> np.ndarray:
    # (4, 6) -> (4, 4, 4): d_c F_mn
    return antisym_to_matrix(grad6)


# ------------------------------------------------------------ massive DK system

def dk_residual(f: Sampler, m: float, x) -> np.ndarray:
    """The five equation groups of the massive tensor system, laid out like a multiplet.

    [d_l Phi^l + m Phi,
     d^k Phi + d_l Phi^{kl} - m Phi^k                   (k = 0..3),
     d_l Phi~^l + m Phi~,
     d^k Phi~ - 1/2 eps^{kcmn} d_c Phi_mn - m Phi~^k    (k = 0..3),
     d^d Phi^k - d^k Phi^d + eps^{dkcl} d_c Phi~_l - m Phi^{dk}   (stored pairs)]
    """
    m = _check_mass(m)
    v = f.value(x)
    dv = f.grad(x)  # dv[a, j] = d_a t_j
    eps = epsilon_upper()

    phi, vec, phit, pvec = v[0], v[VECTOR], v[5], v[PSEUDOVECTOR]
    F = antisym_to_matrix(v[ANTISYM])
    d_phi, d_vec, d_phit, d_pvec = dv[:, 0], dv[:, VECTOR], dv[:, 5], dv[:, PSEUDOVECTOR]
    dF = _antisym_grad(dv[:, ANTISYM])

    out = np.zeros(16, dtype=complex)
    out[0] = np.sum(G * np.diag(d_vec)) + m * phi
    # d_l Phi^{kl} = g^kk g^ll d_l F_kl
    div_F = np.einsum("k,l,lkl->k", G, G, dF)
    out[VECTOR] = G * d_phi + div_F - m * G * vec
    out[5] = np.sum(G * np.diag(d_pvec)) + m * phit
    # eps^{kcmn} d_c F_mn with d_c lower and F lower
    out[PSEUDOVECTOR] = G * d_phit - 0.5 * np.einsum("kcmn,cmn->k", eps, dF) - m * G * pvec
    up_vec_grad = G[:, None] * G[None, :] * d_vec  # d^d Phi^k
    eps_term = np.einsum("dkcl,cl->dk", eps, d_pvec)
    F_up = G[:, None] * G[None, :] * F
    T = up_vec_grad - up_vec_grad.T + eps_term - m * F_up
    out[ANTISYM] = [T[d, k] for d, k in PAIRS]
    return out


def spinor_residual_matrix(f: Sampler, m: float, x) -> np.ndarray:
    """(i gamma^a d_a - m) U as a 4x4 matrix, with U = compose(f)."""
    m = _check_mass(m)
    U = compose_array(f.value(x))
    dU = compose_array(f.grad(x))  # (4, 4, 4)
    return 1j * np.einsum("aij,ajk->ik", gammas(), dU) - m * U


def spinor_block_residuals(f: Sampler, m: float, x) -> dict[str, np.ndarray]:
    """The four 2-spinor equations, written out block by block."""
    m = _check_mass(m)
    U = compose_array(f.value(x))
    dU = compose_array(f.grad(x))
    s, sb = sigmas()
    xi, d, h, eta = U[:2, :2], U[:2, 2:], U[2:, :2], U[2:, 2:]
    dxi, dd, dh, deta = dU[:, :2, :2], dU[:, :2, 2:], dU[:, 2:, :2], dU[:, 2:, 2:]
    return {
        "xi": 1j * np.einsum("aij,ajk->ik", s, dxi) - m * h,
        "h": 1j * np.einsum("aij,ajk->ik", sb, dh) - m * xi,
        "eta": 1j * np.einsum("aij,ajk->ik", sb, deta) - m * d,
        "delta": 1j * np.einsum("aij,ajk->ik", s, dd) - m * eta,
    }


def spinor_residual(f: Sampler, m: float, x) -> float:
    return float(max(np.abs(b).max() for b in spinor_block_residuals(f, m, x).values()))


def equivalence_report(f: Sampler, m: float, x, tol: float = 1e-10) -> dict[str, float]:
    """Spinor and tensor residual sizes plus the mismatch between them under the linear map.

    ``joint`` is nonzero only if exactly one side vanishes (below ``tol``).
    """
    spin_blocks = spinor_block_residuals(f, m, x)
    R = np.block([[spin_blocks["h"], spin_blocks["eta"]], [spin_blocks["xi"], spin_blocks["delta"]]])
    tens = dk_residual(f, m, x)
    mapped = decompose_array(R)
    mismatch = float(np.abs(mapped - SPINOR_TO_TENSOR_SIGNS * tens).max())
    sp = float(np.abs(R).max())
    tn = float(np.abs(tens).max())
    joint = 0.0
    if (sp < tol) != (tn < tol):
        joint = max(sp, tn)
    return {"spinor": sp, "tensor": tn, "mismatch": mismatch, "joint": joint}


def spinor_tensor_equivalence(f: Sampler, m: float, x, tol: float = 1e-10) -> float:
    """0 up to rounding when the spinor and tensor residuals are the same vector under the map.

    Combines the componentwise mismatch with the joint-vanishing check.
    """
    r = equivalence_report(f, m, x, tol)
    return max(r["mismatch"], r["joint"])


# ------------------------------------------------------------ on-shell construction

def dirac_symbol(k, m: float) -> np.ndarray:
    """16 x 16 matrix t -> decompose((gamma^a k_a - m) compose(t)).

    A plane wave t exp(-i k.x) solves the spinor equation iff t is in its null space.
    """
    slash = np.einsum("a,aij->ij", np.asarray(k, dtype=float), gammas())
    cols = []
    for j in range(16):
        e = np.zeros(16)
        e[j] = 1
        cols.append(decompose_array((slash - m * np.eye(4)) @ compose_array(e)))
    return np.array(cols).T


def null_space(M: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal columns spanning the null space, via SVD."""
    _, s, vh = np.linalg.svd(M)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rtol * scale))
    return vh[rank:].conj().T


def onshell_multiplet(k, m: float, rng: np.random.Generator, tol: float = 1e-12) -> np.ndarray:
    """Random polarization in the Fourier null space at wavevector k.

    Raises ValueError if k carries no solutions or the residual exceeds ``tol``.
    """
    M = dirac_symbol(k, m)
    N = null_space(M)
    if N.shape[1] == 0:
        raise ValueError(f"no on-shell polarization at k = {list(k)}, m = {m}")
    c = rng.normal(size=N.shape[1]) + 1j * rng.normal(size=N.shape[1])
    t = N @ c
    t /= np.abs(t).max()
    if np.abs(M @ t).max() >= tol:
        raise ValueError("on-shell polarization rejected: residual above tolerance")
    return t


def mass_shell_wavevector(m: float, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Covariant k with k^2 = m^2 and positive energy."""
    p = rng.normal(size=3) * scale
    w = np.sqrt(m * m + p @ p)
    return np.concatenate([[w], -p])  # lower spatial index


def random_onshell_field(m: float, rng: np.random.Generator, terms: int = 2) -> PlaneWaveField:
    items = []
    for _ in range(terms):
        k = mass_shell_wavevector(m, rng)
        items.append((k, onshell_multiplet(k, m, rng)))
    return PlaneWaveField.from_terms(items)


def random_offshell_field(rng: np.random.Generator, terms: int = 2) -> PlaneWaveField:
    """Generic wavevectors and polarizations; off-shell with probability one."""
    items = [(rng.normal(size=4), rng.normal(size=16) + 1j * rng.normal(size=16)) for _ in range(terms)]
    return PlaneWaveField.from_terms(items)


def transform_field(f: PlaneWaveField, k: SL2CElement) -> PlaneWaveField:
    """Lorentz image of a multiplet plane wave: wavevector L k, amplitude S U S^T."""
    L = vector_rep(k)
    S = bispinor_transform_matrix(k)
    U = compose_array(f.amp)
    amp = decompose_array(np.einsum("ij,njk,lk->nil", S, U, S))
    return PlaneWaveField(f.k @ L.T, amp)


# ------------------------------------------------------------ massive vector sectors

def proca_vector_residual(A: Sampler, F: Sampler, m: float, x) -> dict[str, np.ndarray]:
    """Vector (spin 1) massive system on A_l (4) and F_kl (6 stored)."""
    m = _check_mass(m, positive=True)
    a, da = A.value(x), A.grad(x)
    f = antisym_to_matrix(F.value(x))
    df = _antisym_grad(F.grad(x))
    eps = epsilon_upper()
    curl = da - da.T  # [d, k] = d_d A_k - d_k A_d
    return {
        "lorentz": np.atleast_1d(np.sum(G * np.diag(da))),
        "field": np.einsum("l,lkl->k", G, df) - m * a,
        "bianchi": np.einsum("kcmn,cmn->k", eps, df),
        "curl": np.array([curl[d, k] - m * f[d, k] for d, k in PAIRS]),
    }


def pseudovector_proca_residual(At: Sampler, F: Sampler, m: float, x) -> dict[str, np.ndarray]:
    """Pseudovector massive system on A~_l and F_kl."""
    m = _check_mass(m, positive=True)
    a, da = At.value(x), At.grad(x)
    f = antisym_to_matrix(F.value(x))
    df = _antisym_grad(F.grad(x))
    eps = epsilon_upper()
    dual_curl = np.einsum("dkcl,cl->dk", eps, da)
    f_up = G[:, None] * G[None, :] * f
    return {
        "lorentz": np.atleast_1d(np.sum(G * np.diag(da))),
        "field": np.einsum("l,lkl->k", G, df),
        "bianchi": 0.5 * np.einsum("kcmn,cmn->k", eps, df) + m * G * a,
        "curl": np.array([dual_curl[d, k] - m * f_up[d, k] for d, k in PAIRS]),
    }


def _scalar_like(v0, dv0, vec, dvec, m):
    up = G[:, None] * G[None, :] * dvec
    curl = up - up.T
    return {
        "divergence": np.atleast_1d(np.sum(G * np.diag(dvec)) + m * v0),
        "gradient": dv0 - m * vec,
        "curl": np.array([curl[d, k] for d, k in PAIRS]),
    }


def scalar_sector_residual(f: Sampler, m: float, x) -> dict[str, np.ndarray]:
    """d^l Phi_l + m Phi; d_l Phi - m Phi_l; d^d Phi^k - d^k Phi^d."""
    m = _check_mass(m)
    v, dv = f.value(x), f.grad(x)
    return _scalar_like(v[0], dv[:, 0], v[VECTOR], dv[:, VECTOR], m)


def pseudoscalar_sector_residual(f: Sampler, m: float, x) -> dict[str, np.ndarray]:
    """Same system on (Phi~, Phi~_l)."""
    m = _check_mass(m)
    v, dv = f.value(x), f.grad(x)
    return _scalar_like(v[5], dv[:, 5], v[PSEUDOVECTOR], dv[:, PSEUDOVECTOR], m)


# ------------------------------------------------------------ massless 3-vector systems

def _div(dv: np.ndarray) -> complex:
    return dv[1, 0] + dv[2, 1] + dv[3, 2]


def _rot(dv: np.ndarray) -> np.ndarray:
    # dv[a, j] = d_a v^j with spatial a = 1..3
    return np.array([dv[2, 2] - dv[3, 1], dv[3, 0] - dv[1, 2], dv[1, 1] - dv[2, 0]])


def _grad3(dv0: np.ndarray) -> np.ndarray:
    return dv0[1:]


def _potential_parts(A: Sampler, x):
    """(A^0, bold A, d A^0, d bold A) from a covariant potential sampler."""
    a, da = A.value(x), A.grad(x)
    return a[0], -a[1:], da[:, 0], -da[:, 1:]


def _current_parts(j: Sampler | None, x):
    if j is None:
        return 0.0, np.zeros(3), 0.0
    v, dv = j.value(x), j.grad(x)
    return v[0], -v[1:], np.sum(G * np.diag(dv))


def massless_maxwell_residual(E: Sampler, B: Sampler, A: Sampler, x, j: Sampler | None = None) -> dict[str, np.ndarray]:
    """Vector-photon system in 3-vector form.

    E, B are contravariant 3-vector samplers, A a covariant 4-vector potential
    (A^0 = A_0, bold A = -A_i), j an optional covariant current.  ``continuity``
    reports d^b j_b: the sourced equations can only all vanish when it does.
    """
    dE, dB = E.grad(x), B.grad(x)
    e, b = E.value(x), B.value(x)
    a0, _, da0, dA = _potential_parts(A, x)
    j0, j3, cont = _current_parts(j, x)
    return {
        "gauss_e": np.atleast_1d(_div(dE) - j0),
        "gauss_b": np.atleast_1d(_div(dB)),
        "faraday": _rot(dE) + dB[0],
        "ampere": _rot(dB) - dE[0] - j3,
        "lorentz": np.atleast_1d(da0[0] + _div(dA)),
        "potential_e": -dA[0] - _grad3(da0) - e,
        "potential_b": _rot(dA) - b,
        "continuity": np.atleast_1d(cont),
    }


def massless_pseudovector_residual(Et: Sampler, Bt: Sampler, At: Sampler, x, jt: Sampler | None = None) -> dict[str, np.ndarray]:
    """Pseudovector-photon system: E~ = rot A~, B~ = d_t A~ + grad A~^0, magnetic sources."""
    dE, dB = Et.grad(x), Bt.grad(x)
    e, b = Et.value(x), Bt.value(x)
    a0, _, da0, dA = _potential_parts(At, x)
    j0, j3, cont = _current_parts(jt, x)
    return {
        "gauss_e": np.atleast_1d(_div(dE)),
        "gauss_b": np.atleast_1d(_div(dB) + j0),
        "faraday": _rot(dE) + dB[0] - j3,
        "ampere": _rot(dB) - dE[0],
        "lorentz": np.atleast_1d(da0[0] + _div(dA)),
        "potential_b": dA[0] + _grad3(da0) - b,
        "potential_e": _rot(dA) - e,
        "continuity": np.atleast_1d(cont),
    }


def max_abs(groups: dict[str, np.ndarray], skip=("continuity",)) -> float:
    vals = [np.abs(v).max() for k, v in groups.items() if k not in skip and np.size(v)]
    return float(max(vals)) if vals else 0.0


# ------------------------------------------------------------ Lorentz condition from the spinor equations

def potential_spinor_symbol(k, sector: Sector) -> np.ndarray:
    """Fourier symbol of the first-order potential equations on a massless photon sector.

    The sector's 10 components are (A_l, F_mn) for S1 or (A~_l, F_mn) for S1tilde,
    normalized so the spinor equations read i sigma_bar^a d_a H = xi and
    i sigma^a d_a Delta = eta.  Returns the (8 x 10) complex matrix acting on
    those components for a plane wave exp(-i k.x).
    """
    sector = Sector(sector)
    if sector not in (Sector.S1, Sector.S1tilde):
        raise ValueError("potential equations are defined for S1 and S1tilde")
    idx = np.flatnonzero(sector_mask(sector))
    s, sb = sigmas()
    k = np.asarray(k, dtype=float)
    ks = np.einsum("a,aij->ij", k, s)
    ksb = np.einsum("a,aij->ij", k, sb)
    cols = []
    for j in idx:
        e = np.zeros(16)
        e[j] = 1
        U = compose_array(e)
        xi, d, h, eta = U[:2, :2], U[:2, 2:], U[2:, :2], U[2:, 2:]
        # i sigma_bar^a (-i k_a) H - xi,  i sigma^a (-i k_a) Delta - eta
        cols.append(np.concatenate([(ksb @ h - xi).ravel(), (ks @ d - eta).ravel()]))
    return np.array(cols).T


def sector_components(sector: Sector) -> np.ndarray:
    return np.flatnonzero(sector_mask(Sector(sector)))


def potential_equation_solutions(k, sector: Sector) -> np.ndarray:
    """Basis (16 x r) of multiplet polarizations solving the sector's potential equations at k."""
    M = potential_spinor_symbol(k, sector)
    N = null_space(M)
    out = np.zeros((16, N.shape[1]), dtype=complex)
    out[sector_components(sector)] = N
    return out


def photon_sector_fields(f: PlaneWave, sector: Sector) -> tuple[PlaneWave, PlaneWave, PlaneWave]:
    """(potential, E-like, B-like) 3-vector samplers for a massless sector plane wave.

    S1:  E^k = F_0k,  B = -(F23, F31, F12)  with potential A_l.
    S1tilde: the same antisymmetric tensor read as (E~, B~) with potential A~_l.
    """
    from .fields import electric_magnetic

    sector = Sector(sector)
    pot = f.component(VECTOR if sector is Sector.S1 else PSEUDOVECTOR)
    E, B = electric_magnetic(f.component(ANTISYM))
    return pot, E, B


def potential_equation_residual(f: Sampler, sector: Sector, x) -> float:
    """Max violation of i sigma_bar^a d_a H = xi, i sigma^a d_a Delta = eta on a photon sector.

    Components outside the sector's support count as violations too.
    """
    sector = Sector(sector)
    if sector not in (Sector.S1, Sector.S1tilde):
        raise ValueError("potential equations are defined for S1 and S1tilde")
    v = f.value(x)
    outside = float(np.abs(v[~sector_mask(sector)]).max())
    U = compose_array(v)
    dU = compose_array(f.grad(x))
    s, sb = sigmas()
    r1 = 1j * np.einsum("aij,ajk->ik", sb, dU[:, 2:, :2]) - U[:2, :2]
    r2 = 1j * np.einsum("aij,ajk->ik", s, dU[:, :2, 2:]) - U[2:, 2:]
    return max(outside, float(np.abs(r1).max()), float(np.abs(r2).max()))


def lorentz_condition_residual(potential: Sampler, x) -> float:
    """|d_t A^0 + div A| for a covariant potential sampler, i.e. |d^l A_l|."""
    return float(abs(np.sum(G * np.diag(potential.grad(x)))))
