"""Two-potential electrodynamics with electric and magnetic charges.

F  = dA - dA           (vector potential A_l)
F~ = eps dA~           (pseudovector potential A~_l), F~_ab = eps_ab^{cd} d_c A~_d
F+- = F +- F~, dual F*_ab = 1/2 eps_ab^{cd} F_cd  (so F** = -F)

Field equations, flat space:
    d^b F+_ab  = -j_a      d^b F+*_ab = +j~_a
    d^b F-_ab  = -j_a      d^b F-*_ab = -j~_a
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bispinor import antisym_to_matrix
from .clifford import PAIRS, epsilon_mixed
from .dynamics import G, _div, _rot
from .fields import PlaneWave, Sampler, curl_tensor, dual_curl_tensor


def _dual_matrix() -> np.ndarray:
    # stored-pair components: F*_i = sum_j D[i, j] F_j
    eps = epsilon_mixed()
    D = np.zeros((6, 6))
    for i, (a, b) in enumerate(PAIRS):
        for j, (c, d) in enumerate(PAIRS):
            D[i, j] = eps[a, b, c, d]  # 1/2 (eps^{cd} F_cd + eps^{dc} F_dc)
    return D


DUAL6 = _dual_matrix()
DUAL6.setflags(write=False)


def dual_tensor(F):
    """Hodge dual of an antisymmetric tensor.

    Accepts 6 stored components (..., 6), a full (..., 4, 4) matrix, or a
    6-component PlaneWave; returns the same kind.
    """
    if isinstance(F, PlaneWave):
        return F.map(DUAL6)
    F = np.asarray(F)
    if F.shape[-2:] == (4, 4):
        return 0.5 * np.einsum("abcd,...cd->...ab", epsilon_mixed(), F)
    if F.shape[-1] != 6:
        raise ValueError(f"expected 6 stored components or a 4x4 tensor, got shape {F.shape}")
    return F @ DUAL6.T


@dataclass(frozen=True)
class CombinedStrength:
    """F+, F-, and their duals; entries are arrays or samplers of 6 stored components."""

    plus: object
    minus: object
    plus_dual: object
    minus_dual: object

    def at(self, x) -> "CombinedStrength":
        return CombinedStrength(*(v.value(x) for v in self.parts()))

    def parts(self):
        return self.plus, self.minus, self.plus_dual, self.minus_dual


def combine_fields(F, Ft) -> CombinedStrength:
    plus = F + Ft
    minus = F - Ft
    return CombinedStrength(plus, minus, dual_tensor(plus), dual_tensor(minus))


@dataclass(frozen=True)
class PotentialPair:
    A: PlaneWave
    At: PlaneWave

    def lorentz_residual(self, x) -> float:
        return float(max(abs(np.sum(G * np.diag(p.grad(x)))) for p in (self.A, self.At)))


@dataclass(frozen=True)
class CurrentPair:
    """Electric j_a and magnetic j~_a, covariant 4-vector samplers."""

    j: Sampler
    jt: Sampler


def strength_fields(p: PotentialPair) -> CombinedStrength:
    """Sampler-level strengths, duals taken directly."""
    return combine_fields(curl_tensor(p.A), dual_curl_tensor(p.At))


def strengths_from_potentials(p: PotentialPair, x) -> CombinedStrength:
    """Strengths at x with duals from the closed-form two-potential identity.

    F* +- F~* = -+(dA~ - dA~) + eps dA, so no numerical dualization is used.
    """
    F = curl_tensor(p.A).value(x)
    Ft = dual_curl_tensor(p.At).value(x)
    curl_t = curl_tensor(p.At).value(x)
    eps_a = dual_curl_tensor(p.A).value(x)
    return CombinedStrength(F + Ft, F - Ft, -curl_t + eps_a, curl_t + eps_a)


def potential_identity_residual(p: PotentialPair, x) -> float:
    """Direct dualization against the closed form."""
    direct = strength_fields(p).at(x)
    closed = strengths_from_potentials(p, x)
    return float(max(np.abs(a - b).max() for a, b in zip(direct.parts(), closed.parts())))


def _divergence(F6: Sampler, x) -> np.ndarray:
    # d^b F_ab
    dF = antisym_to_matrix(F6.grad(x))  # [c, a, b]
    return np.einsum("b,bab->a", G, dF)


def extended_residual(c: CombinedStrength, j: Sampler | None, jt: Sampler | None, x) -> dict[str, np.ndarray]:
    """The four divergence equations, each with its source moved to the left."""
    jv = j.value(x) if j is not None else np.zeros(4)
    jtv = jt.value(x) if jt is not None else np.zeros(4)
    return {
        "plus": _divergence(c.plus, x) + jv,
        "plus_dual": _divergence(c.plus_dual, x) - jtv,
        "minus": _divergence(c.minus, x) + jv,
        "minus_dual": _divergence(c.minus_dual, x) + jtv,
    }


def box(p: PlaneWave) -> PlaneWave:
    """d^a d_a as a plane wave: each term picks up -k^a k_a."""
    k2 = np.einsum("na,a,na->n", p.k, G, p.k)
    return PlaneWave(p.k, p.amp * (-k2).reshape((-1,) + (1,) * len(p.shape)), p.shape)


def currents_from_potentials(p: PotentialPair) -> CurrentPair:
    """Sources that make Lorentz-gauge potentials exact solutions: j = box A, j~ = box A~."""
    return CurrentPair(box(p.A), box(p.At))


# ------------------------------------------------------------ duality

def _rot2(u, v, c, s):
    return c * u + s * v, -s * u + c * v


def duality_rotate(obj, chi: float):
    """Continuous duality rotation by angle chi.

    potentials/currents:  A' = cos A + sin A~,  A~' = -sin A + cos A~
    strengths:            F+' = cos F+ - sin F+*,  F+*' = sin F+ + cos F+*
                          F-' = cos F- + sin F-*,  F-*' = -sin F- + cos F-*
    """
    c, s = np.cos(chi), np.sin(chi)
    if isinstance(obj, PotentialPair):
        return PotentialPair(*_rot2(obj.A, obj.At, c, s))
    if isinstance(obj, CurrentPair):
        return CurrentPair(*_rot2(obj.j, obj.jt, c, s))
    if isinstance(obj, CombinedStrength):
        plus, plus_dual = _rot2(obj.plus, obj.plus_dual, c, -s)
        minus, minus_dual = _rot2(obj.minus, obj.minus_dual, c, s)
        return CombinedStrength(plus, minus, plus_dual, minus_dual)
    raise TypeError(f"cannot duality-rotate {type(obj).__name__}")


def rotate_residuals(r: dict[str, np.ndarray], chi: float) -> dict[str, np.ndarray]:
    """How the four residual groups mix under a rotation of the configuration."""
    c, s = np.cos(chi), np.sin(chi)
    plus, plus_dual = _rot2(r["plus"], r["plus_dual"], c, -s)
    minus, minus_dual = _rot2(r["minus"], r["minus_dual"], c, s)
    return {"plus": plus, "plus_dual": plus_dual, "minus": minus, "minus_dual": minus_dual}


def discrete_duality(obj, sign: int = 1):
    """Quarter-turn duality written out as a substitution table (sign=+1) or its inverse (sign=-1).

    sign=+1: A' = A~, A~' = -A, j' = j~, j~' = -j,
             F+' = -F+*, F+*' = F+, F-' = F-*, F-*' = -F-.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(obj, PotentialPair):
        return PotentialPair(sign * obj.At, -sign * obj.A)
    if isinstance(obj, CurrentPair):
        return CurrentPair(sign * obj.jt, -sign * obj.j)
    if isinstance(obj, CombinedStrength):
        return CombinedStrength(-sign * obj.plus_dual, sign * obj.minus_dual, sign * obj.plus, -sign * obj.minus)
    raise TypeError(f"cannot apply discrete duality to {type(obj).__name__}")


@dataclass
class DualityScenario:
    potentials: PotentialPair
    currents: CurrentPair
    points: np.ndarray = field(default_factory=lambda: np.zeros((1, 4)))


def _transverse_polarization(k: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # covariant eps with k^a eps_a = 0, k not lightlike-degenerate in the time slot
    eps = rng.normal(size=4) + 1j * rng.normal(size=4)
    kup = G * k
    eps[0] = -(kup[1:] @ eps[1:]) / kup[0]
    return eps


def random_lorentz_potential(rng: np.random.Generator, terms: int = 2, null: bool = False) -> PlaneWave:
    """Plane-wave 4-potential obeying d^a A_a = 0 term by term."""
    ks, amps = [], []
    for _ in range(terms):
        p = rng.normal(size=3)
        w = np.linalg.norm(p) if null else np.linalg.norm(p) + rng.uniform(0.2, 1.0)
        k = np.concatenate([[w], -p])
        ks.append(k)
        amps.append(_transverse_polarization(k, rng))
    return PlaneWave(np.array(ks), np.array(amps), (4,))


def dyonic_scenario(seed: int = 0, points: int = 8, terms: int = 2) -> DualityScenario:
    """Massive-wavevector potentials with both electric and magnetic currents switched on."""
    rng = np.random.default_rng(seed)
    p = PotentialPair(random_lorentz_potential(rng, terms), random_lorentz_potential(rng, terms))
    return DualityScenario(p, currents_from_potentials(p), rng.normal(size=(points, 4)))


def duality_invariance_test(scenario: DualityScenario, chi: float) -> float:
    """Max discrepancy between residuals of the rotated configuration and rotated residuals.

    Also folds in strengths rebuilt from rotated potentials against rotated strengths.
    The currents need not be on-shell: the residual mixing holds for any sources.
    """
    p = scenario.potentials
    cur = scenario.currents
    c = strength_fields(p)
    p2 = duality_rotate(p, chi)
    cur2 = duality_rotate(cur, chi)
    c2 = duality_rotate(c, chi)
    c2_rebuilt = strength_fields(p2)
    worst = 0.0
    for x in scenario.points:
        r = extended_residual(c, cur.j, cur.jt, x)
        r2 = extended_residual(c2, cur2.j, cur2.jt, x)
        expect = rotate_residuals(r, chi)
        worst = max(worst, max(float(np.abs(r2[k] - expect[k]).max()) for k in r2))
        for a, b in zip(c2.at(x).parts(), c2_rebuilt.at(x).parts()):
            worst = max(worst, float(np.abs(a - b).max()))
    return worst


# ------------------------------------------------------------ sum / difference 3-vector systems

def two_charge_residual(E: Sampler, B: Sampler, j: Sampler | None, jt: Sampler | None, x, combination: str = "sum") -> dict[str, np.ndarray]:
    """Combined-field equations with both charges.

    sum:        div E = j^0, div B = -j~^0, rot E = -d_t B + j~, rot B = d_t E + j
    difference: div E = j^0, div B = +j~^0, rot E = -d_t B - j~, rot B = d_t E + j
    """
    if combination not in ("sum", "difference"):
        raise ValueError("combination must be 'sum' or 'difference'")
    sgn = 1.0 if combination == "sum" else -1.0
    dE, dB = E.grad(x), B.grad(x)
    j0, j3 = (j.value(x)[0], -j.value(x)[1:]) if j is not None else (0.0, np.zeros(3))
    t0, t3 = (jt.value(x)[0], -jt.value(x)[1:]) if jt is not None else (0.0, np.zeros(3))
    return {
        "gauss_e": np.atleast_1d(_div(dE) - j0),
        "gauss_b": np.atleast_1d(_div(dB) + sgn * t0),
        "faraday": _rot(dE) + dB[0] - sgn * t3,
        "ampere": _rot(dB) - dE[0] - j3,
    }


# ------------------------------------------------------------ monopole flux

def monopole_field(g: float, points: np.ndarray, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """B = -g r_hat / (4 pi r^2), the sign fixed by div B = -j~^0."""
    r = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    rn = np.linalg.norm(r, axis=-1, keepdims=True)
    return -g * r / (4 * np.pi * rn**3)


def monopole_flux_test(g: float, radius: float, order: int = 16, center=(0.0, 0.0, 0.0)) -> float:
    """Outward flux of the monopole field through a sphere about the origin.

    Gauss-Legendre in cos(theta) times the uniform rule in phi (2*order nodes).
    ``center`` displaces the charge; it must stay strictly inside the sphere.
    """
    if not radius > 0:
        raise ValueError("radius must be > 0")
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if np.linalg.norm(center) >= radius:
        raise ValueError("charge must lie strictly inside the sphere")
    mu, wmu = np.polynomial.legendre.leggauss(order)
    nphi = 2 * order
    phi = 2 * np.pi * np.arange(nphi) / nphi
    st = np.sqrt(1 - mu**2)
    n = np.stack(
        [st[:, None] * np.cos(phi)[None, :], st[:, None] * np.sin(phi)[None, :], np.broadcast_to(mu[:, None], (order, nphi))],
        axis=-1,
    )
    Bn = np.sum(monopole_field(g, radius * n, center) * n, axis=-1)
    return float(radius**2 * (2 * np.pi / nphi) * np.sum(wmu[:, None] * Bn))

