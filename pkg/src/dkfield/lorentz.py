"""SL(2,C) action on bispinors, the induced vector representation and the discrete maps M, N.

For B in SL(2,C) the undotted index transforms with B and the dotted one with
(B^dagger)^-1, so that

    (B^dagger)^-1 sigma^a B^-1 = sigma^b L_b^a
    B sigma_bar^a B^dagger     = sigma_bar^b L_b^a
    S gamma^a S^-1             = gamma^b L_b^a,   S = diag(B, (B^dagger)^-1)

L is stored as a matrix ``L[b, a]`` acting on covariant components: v'_b = L_b^a v_a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bispinor import Bispinor
from .clifford import METRIC, PAULI, gamma, gamma5, sigmas


@dataclass(frozen=True)
class SL2CElement:
    B: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=complex)
        if B.shape != (2, 2):
            raise ValueError("SL(2,C) element must be 2x2")
        if abs(np.linalg.det(B) - 1) > 1e-12 * max(1.0, float(np.abs(B).max()) ** 2):
            raise ValueError(f"det B = {np.linalg.det(B)}, expected 1")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def conj(self) -> np.ndarray:
        """Entrywise conjugate B*."""
        return self.B.conj()

    @property
    def dagger(self) -> np.ndarray:
        return self.B.conj().T

    @property
    def dotted(self) -> np.ndarray:
        """Matrix acting on dotted indices, (B^dagger)^-1."""
        return _inv2(self.dagger)

    def __matmul__(self, other: "SL2CElement") -> "SL2CElement":
        return SL2CElement(self.B @ other.B)

    def __neg__(self) -> "SL2CElement":
        return SL2CElement(-self.B)

    @classmethod
    def identity(cls) -> "SL2CElement":
        return cls(np.eye(2))


def _inv2(M: np.ndarray) -> np.ndarray:
    # closed-form 2x2 inverse; det is 1 up to rounding for group elements
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    return np.array([[d, -b], [-c, a]]) / (a * d - b * c)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("direction must be nonzero")
    return v / n


def _n_sigma(n: np.ndarray) -> np.ndarray:
    return n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3]


def sl2c_boost(direction, rapidity: float) -> SL2CElement:
    """B = exp(+(rapidity/2) n.sigma) = cosh(r/2) + sinh(r/2) n.sigma."""
    n = _unit(direction)
    h = 0.5 * rapidity
    return SL2CElement(np.cosh(h) * PAULI[0] + np.sinh(h) * _n_sigma(n))


def sl2c_rotation(axis, angle: float) -> SL2CElement:
    """B = exp(-i(angle/2) n.sigma) = cos(angle/2) - i sin(angle/2) n.sigma."""
    n = _unit(axis)
    h = 0.5 * angle
    return SL2CElement(np.cos(h) * PAULI[0] - 1j * np.sin(h) * _n_sigma(n))


def random_sl2c(rng: np.random.Generator, scale: float = 1.0) -> SL2CElement:
    """Product of a random rotation and a random boost (rapidity up to ``scale``)."""
    rot = sl2c_rotation(rng.normal(size=3), rng.uniform(0, 4 * np.pi))
    boost = sl2c_boost(rng.normal(size=3), rng.uniform(0, scale))
    return rot @ boost


def vector_rep(k: SL2CElement) -> np.ndarray:
    """L_b^a = 1/2 Sp(sigma_bar_b (B^dagger)^-1 sigma^a B^-1)."""
    s, sb = sigmas()
    Binv = _inv2(k.B)
    M = np.einsum("ij,ajk,kl->ail", k.dotted, s, Binv)  # (B^dagger)^-1 sigma^a B^-1
    sb_low = np.einsum("b,bij->bij", np.diag(METRIC), sb)
    L = 0.5 * np.einsum("bij,aji->ba", sb_low, M)
    return L.real


def bispinor_transform_matrix(k: SL2CElement) -> np.ndarray:
    """S = diag(B, (B^dagger)^-1)."""
    S = np.zeros((4, 4), dtype=complex)
    S[:2, :2] = k.B
    S[2:, 2:] = k.dotted
    return S


def intertwiner_residuals(k: SL2CElement) -> dict[str, float]:
    """Residuals of the two 2-spinor identities and the 4-spinor form, all against the same L."""
    L = vector_rep(k)
    s, sb = sigmas()
    Binv = _inv2(k.B)
    r_a = r_b = r_s = 0.0
    S = bispinor_transform_matrix(k)
    S_inv = np.linalg.inv(S)
    for a in range(4):
        lhs = k.dotted @ s[a] @ Binv
        rhs = np.einsum("b,bij->ij", L[:, a], s)
        r_a = max(r_a, float(np.abs(lhs - rhs).max()))
        lhs = k.B @ sb[a] @ k.dagger
        rhs = np.einsum("b,bij->ij", L[:, a], sb)
        r_b = max(r_b, float(np.abs(lhs - rhs).max()))
        lhs = S @ gamma(a) @ S_inv
        rhs = sum(gamma(b) * L[b, a] for b in range(4))
        r_s = max(r_s, float(np.abs(lhs - rhs).max()))
    return {"sigma": r_a, "sigma_bar": r_b, "gamma": r_s}


def verify_intertwiner(k: SL2CElement) -> float:
    """max_a |S gamma^a S^-1 - gamma^b L_b^a|."""
    return intertwiner_residuals(k)["gamma"]


def lorentz_matrix_residual(L: np.ndarray) -> float:
    """|L^T g L - g|; L acts on covariant vectors and g^{-1} == g."""
    return float(np.abs(L.T @ METRIC @ L - METRIC).max())


def transform_bispinor(U: Bispinor, k: SL2CElement) -> Bispinor:
    """xi' = B xi B^T, Delta' = B Delta D^T, H' = D H B^T, eta' = D eta D^T with D = (B^dagger)^-1."""
    S = bispinor_transform_matrix(k)
    return Bispinor(S @ U.U @ S.T)


M_MATRIX = 1j * gamma(0)
N_MATRIX = gamma(0) @ gamma5()


def discrete_transform(U: Bispinor, which: str) -> Bispinor:
    """Block maps M: (xi,D,H,eta) -> (-eta,-H,-D,-xi); N: -> (eta,-H,-D,xi)."""
    xi, d, h, eta = U.xi, U.delta, U.h, U.eta
    if which == "M":
        return Bispinor.from_blocks(-eta, -h, -d, -xi)
    if which == "N":
        return Bispinor.from_blocks(eta, -h, -d, xi)
    raise ValueError(f"unknown discrete transform {which!r}; expected 'M' or 'N'")


def discrete_transform_matrix(U: Bispinor, which: str) -> Bispinor:
    """Two-sided matrix action X U X^T, X = i gamma^0 (M) or gamma^0 gamma5 (N)."""
    X = {"M": M_MATRIX, "N": N_MATRIX}.get(which)
    if X is None:
        raise ValueError(f"unknown discrete transform {which!r}; expected 'M' or 'N'")
    return Bispinor(X @ U.U @ X.T)


def discrete_vector_rep(which: str) -> np.ndarray:
    """L with X gamma^a X^-1 = gamma^b L_b^a for X = M or N."""
    X = {"M": M_MATRIX, "N": N_MATRIX}[which]
    Xi = np.linalg.inv(X)
    L = np.zeros((4, 4))
    for a in range(4):
        Y = X @ gamma(a) @ Xi
        for b in range(4):
            # Sp(gamma_b gamma^c) = 4 delta_b^c
            L[b, a] = (np.trace(METRIC[b, b] * gamma(b) @ Y) / 4).real
    return L
