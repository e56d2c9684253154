"""Tensor multiplet <-> 2-rank bispinor map and the four parity sectors."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .clifford import (
    METRIC,
    PAIRS,
    gamma,
    gamma5,
    gamma_lower,
    metric_spinor,
    sigma_ab,
    sigma_ab_lower,
)

# flat layout of the 16 components
SCALAR = slice(0, 1)
VECTOR = slice(1, 5)
PSEUDOSCALAR = slice(5, 6)
PSEUDOVECTOR = slice(6, 10)
ANTISYM = slice(10, 16)


def antisym_to_matrix(f6) -> np.ndarray:
    """Expand 6 stored components (01,02,03,23,31,12) into a full antisymmetric 4x4."""
    f6 = np.asarray(f6)
    F = np.zeros(f6.shape[:-1] + (4, 4), dtype=np.result_type(f6, float))
    for i, (m, n) in enumerate(PAIRS):
        F[..., m, n] = f6[..., i]
        F[..., n, m] = -f6[..., i]
    return F


def matrix_to_antisym(F) -> np.ndarray:
    F = np.asarray(F)
    return np.stack([F[..., m, n] for m, n in PAIRS], axis=-1)


@dataclass(frozen=True)
class TensorMultiplet:
    """The 16 complex components {Phi, Phi_l, Phi~, Phi~_l, Phi_mn}, all indices lowered."""

    components: np.ndarray

    def __post_init__(self):
        c = np.array(self.components, dtype=complex).reshape(-1)
        if c.shape != (16,):
            raise ValueError(f"a tensor multiplet has 16 components, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @classmethod
    def from_parts(cls, scalar=0.0, vector=None, pseudoscalar=0.0, pseudovector=None, antisym=None):
        """``antisym`` may be 6 stored components or a full antisymmetric 4x4."""
        c = np.zeros(16, dtype=complex)
        c[0] = scalar
        c[5] = pseudoscalar
        if vector is not None:
            c[VECTOR] = vector
        if pseudovector is not None:
            c[PSEUDOVECTOR] = pseudovector
        if antisym is not None:
            a = np.asarray(antisym)
            c[ANTISYM] = matrix_to_antisym(a) if a.shape == (4, 4) else a
        return cls(c)

    @classmethod
    def zero(cls):
        return cls(np.zeros(16))

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 1.0):
        return cls(scale * (rng.normal(size=16) + 1j * rng.normal(size=16)))

    @property
    def scalar(self) -> complex:
        return complex(self.components[0])

    @property
    def vector(self) -> np.ndarray:
        return self.components[VECTOR]

    @property
    def pseudoscalar(self) -> complex:
        return complex(self.components[5])

    @property
    def pseudovector(self) -> np.ndarray:
        return self.components[PSEUDOVECTOR]

    @property
    def antisym(self) -> np.ndarray:
        return self.components[ANTISYM]

    def antisym_matrix(self) -> np.ndarray:
        return antisym_to_matrix(self.antisym)

    def __add__(self, other: "TensorMultiplet") -> "TensorMultiplet":
        return TensorMultiplet(self.components + other.components)

    def __sub__(self, other: "TensorMultiplet") -> "TensorMultiplet":
        return TensorMultiplet(self.components - other.components)

    def __mul__(self, alpha) -> "TensorMultiplet":
        return TensorMultiplet(alpha * self.components)

    __rmul__ = __mul__

    def to_json(self) -> list[list[float]]:
        """Flat list of 16 [re, im] pairs."""
        return [[float(z.real), float(z.imag)] for z in self.components]

    @classmethod
    def from_json(cls, pairs) -> "TensorMultiplet":
        return cls(pairs_to_complex(pairs, 16))


def pairs_to_complex(pairs, n: int | None = None) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a list of [re, im] pairs")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"expected {n} [re, im] pairs, got {arr.shape[0]}")
    return arr[:, 0] + 1j * arr[:, 1]


@dataclass(frozen=True)
class Bispinor:
    """4x4 complex U tiled as [[xi, Delta], [H, eta]]."""

    U: np.ndarray

    def __post_init__(self):
        U = np.array(self.U, dtype=complex)
        if U.shape != (4, 4):
            raise ValueError(f"bispinor must be 4x4, got {U.shape}")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @classmethod
    def from_blocks(cls, xi, delta, h, eta) -> "Bispinor":
        return cls(np.block([[xi, delta], [h, eta]]))

    @property
    def xi(self) -> np.ndarray:
        return self.U[:2, :2]

    @property
    def delta(self) -> np.ndarray:
        return self.U[:2, 2:]

    @property
    def h(self) -> np.ndarray:
        return self.U[2:, :2]

    @property
    def eta(self) -> np.ndarray:
        return self.U[2:, 2:]


def _clifford_basis() -> np.ndarray:
    # X_j such that U = sum_j t_j X_j E^-1, one 4x4 per multiplet slot
    g5 = gamma5()
    basis = [-1j * np.eye(4)]
    basis += [gamma(l) for l in range(4)]
    basis += [g5]
    basis += [1j * gamma(l) @ g5 for l in range(4)]
    # sigma^{mn} Phi_mn over all 16 ordered pairs == 2 * sum over the stored m<n pairs
    basis += [2j * sigma_ab(m, n) for m, n in PAIRS]
    return np.stack(basis)


def _projection_basis() -> np.ndarray:
    # P_j such that t_j = Sp(P_j U); read off the inverse formulas
    E, _ = metric_spinor()
    g5 = gamma5()
    rows = [0.25j * E]
    rows += [0.25 * E @ gamma_lower(l) for l in range(4)]
    rows += [0.25 * E @ g5]
    rows += [E @ g5 @ gamma_lower(l) / 4j for l in range(4)]
    rows += [-E @ sigma_ab_lower(m, n) / 2j for m, n in PAIRS]
    return np.stack(rows)


_, _E_INV = metric_spinor()
_COMPOSE = np.einsum("jab,bc->jac", _clifford_basis(), _E_INV)
_PROJECT = _projection_basis()
_COMPOSE.setflags(write=False)
_PROJECT.setflags(write=False)


def compose_array(t: np.ndarray) -> np.ndarray:
    """Vectorized compose on raw arrays: (..., 16) -> (..., 4, 4)."""
    return np.einsum("...j,jab->...ab", np.asarray(t, dtype=complex), _COMPOSE)


def decompose_array(U: np.ndarray) -> np.ndarray:
    """Vectorized decompose: (..., 4, 4) -> (..., 16), t_j = Sp(P_j U)."""
    return np.einsum("jab,...ba->...j", _PROJECT, np.asarray(U, dtype=complex))


def compose(t: TensorMultiplet) -> Bispinor:
    """U = [-i Phi + gamma^l Phi_l + i sigma^{mn} Phi_mn + gamma5 Phi~ + i gamma^l gamma5 Phi~_l] E^-1."""
    return Bispinor(compose_array(t.components))


def decompose(U: Bispinor) -> TensorMultiplet:
    return TensorMultiplet(decompose_array(U.U))


def blocks(U: Bispinor) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    return U.xi, U.delta, U.h, U.eta


class Sector(enum.Enum):
    S0 = "S0"
    S0tilde = "S0tilde"
    S1 = "S1"
    S1tilde = "S1tilde"


SECTOR_SUPPORT = {
    Sector.S0: (SCALAR, VECTOR),
    Sector.S0tilde: (PSEUDOSCALAR, PSEUDOVECTOR),
    Sector.S1: (VECTOR, ANTISYM),
    Sector.S1tilde: (PSEUDOVECTOR, ANTISYM),
}


def sector_mask(s: Sector) -> np.ndarray:
    mask = np.zeros(16, dtype=bool)
    for sl in SECTOR_SUPPORT[Sector(s)]:
        mask[sl] = True
    return mask


def project_sector(t: TensorMultiplet, s: Sector) -> TensorMultiplet:
    """Zero every component outside the sector's support."""
    return TensorMultiplet(np.where(sector_mask(s), t.components, 0))


def check_block_constraints(U: Bispinor, s: Sector) -> float:
    """Max violation of the sector's transposition constraints on (xi, Delta, H, eta)."""
    s = Sector(s)
    xi, d, h, eta = blocks(U)
    if s is Sector.S1:
        parts = [d.T - h, xi.T - xi, eta.T - eta]
    elif s is Sector.S1tilde:
        parts = [d.T + h, xi.T - xi, eta.T - eta]
    elif s is Sector.S0:
        parts = [d.T - h, xi + eta, xi.T + xi, eta.T + eta]
    else:
        parts = [d.T + h, xi - eta, xi.T + xi, eta.T + eta]
    return float(max(np.abs(p).max() for p in parts))


def lower_vector(v) -> np.ndarray:
    return METRIC @ np.asarray(v)
