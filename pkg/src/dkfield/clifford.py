"""Weyl-basis Dirac algebra, the metric spinor E and the Levi-Civita symbol.

All matrices are built from exact entries (0, +-1, +-i) so identity checks
run at an absolute tolerance of 1e-12.  Conventions:

    g          = diag(+1, -1, -1, -1)
    sigma^a    = (I, sigma^k),   sigma_bar^a = (I, -sigma^k)
    gamma^a    = [[0, sigma_bar^a], [sigma^a, 0]]
    gamma5     = -i gamma^0 gamma^1 gamma^2 gamma^3 = diag(-I, +I)
    eps^{0123} = +1,  eps_{0123} = -1
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# antisymmetric pair storage order shared by every module
PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
PAULI = (
    _I2,
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_index(*idx: int) -> None:
    for a in idx:
        if not isinstance(a, (int, np.integer)) or not 0 <= a <= 3:
            raise ValueError(f"spacetime index must be in 0..3, got {a!r}")


def sigma(a: int) -> np.ndarray:
    """sigma^a = (I, sigma^k)."""
    _check_index(a)
    return PAULI[a]


def sigma_bar(a: int) -> np.ndarray:
    """sigma_bar^a = (I, -sigma^k)."""
    _check_index(a)
    return PAULI[0] if a == 0 else -PAULI[a]


def sigma_lower(a: int) -> np.ndarray:
    return METRIC[a, a] * sigma(a)


def sigma_bar_lower(a: int) -> np.ndarray:
    return METRIC[a, a] * sigma_bar(a)


@lru_cache(maxsize=None)
def _gamma(a: int) -> np.ndarray:
    return _frozen(np.block([[_Z2, sigma_bar(a)], [sigma(a), _Z2]]))


def gamma(a: int) -> np.ndarray:
    """Weyl-basis gamma^a, block off-diagonal."""
    _check_index(a)
    return _gamma(int(a))


def gamma_lower(a: int) -> np.ndarray:
    return METRIC[a, a] * gamma(a)


@lru_cache(maxsize=None)
def gamma5() -> np.ndarray:
    g = -1j * gamma(0) @ gamma(1) @ gamma(2) @ gamma(3)
    return _frozen(g)


@lru_cache(maxsize=None)
def _sigma_ab(a: int, b: int) -> np.ndarray:
    return _frozen(0.25 * (gamma(a) @ gamma(b) - gamma(b) @ gamma(a)))


def sigma_ab(a: int, b: int) -> np.ndarray:
    """sigma^{ab} = (gamma^a gamma^b - gamma^b gamma^a) / 4."""
    _check_index(a, b)
    return _sigma_ab(int(a), int(b))


def sigma_ab_lower(a: int, b: int) -> np.ndarray:
    return METRIC[a, a] * METRIC[b, b] * sigma_ab(a, b)


def Sigma(a: int, b: int) -> np.ndarray:
    """Upper-left 2x2 block of sigma^{ab}: (sigma_bar^a sigma^b - sigma_bar^b sigma^a)/4."""
    _check_index(a, b)
    return 0.25 * (sigma_bar(a) @ sigma(b) - sigma_bar(b) @ sigma(a))


def Sigma_bar(a: int, b: int) -> np.ndarray:
    """Lower-right 2x2 block of sigma^{ab}."""
    _check_index(a, b)
    return 0.25 * (sigma(a) @ sigma_bar(b) - sigma(b) @ sigma_bar(a))


@lru_cache(maxsize=None)
def metric_spinor() -> tuple[np.ndarray, np.ndarray]:
    """Return (E, E^-1) with E = diag-blocks(i sigma^2, -i sigma^2)."""
    s2 = PAULI[2]
    E = np.block([[1j * s2, _Z2], [_Z2, -1j * s2]])
    E_inv = np.block([[-1j * s2, _Z2], [_Z2, 1j * s2]])
    return _frozen(E), _frozen(E_inv)


def levi_civita(a: int, b: int, c: int, d: int) -> int:
    """eps^{abcd} with eps^{0123} = +1; zero on repeated indices."""
    idx = (a, b, c, d)
    _check_index(*idx)
    if len(set(idx)) < 4:
        return 0
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _eps_upper() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for p in itertools.permutations(range(4)):
        eps[p] = levi_civita(*p)
    return _frozen(eps)


def epsilon_upper() -> np.ndarray:
    """Dense eps^{abcd} array."""
    return _eps_upper()


@lru_cache(maxsize=None)
def epsilon_lower() -> np.ndarray:
    """eps_{abcd}, all four indices lowered with g (so eps_{0123} = -1)."""
    eps = np.einsum("abcd,ai,bj,ck,dl->ijkl", _eps_upper(), METRIC, METRIC, METRIC, METRIC)
    return _frozen(eps)


@lru_cache(maxsize=None)
def epsilon_mixed() -> np.ndarray:
    """eps_{ab}^{cd}: first pair lowered, second pair upper."""
    eps = np.einsum("abcd,ai,bj->ijcd", _eps_upper(), METRIC, METRIC)
    return _frozen(eps)


@lru_cache(maxsize=None)
def gammas() -> np.ndarray:
    """Stack of gamma^a, shape (4, 4, 4)."""
    return _frozen(np.stack([gamma(a) for a in range(4)]))


@lru_cache(maxsize=None)
def sigmas() -> tuple[np.ndarray, np.ndarray]:
    """Stacks (sigma^a, sigma_bar^a), each shape (4, 2, 2)."""
    s = np.stack([sigma(a) for a in range(4)])
    sb = np.stack([sigma_bar(a) for a in range(4)])
    return _frozen(s), _frozen(sb)


# ---------------------------------------------------------------- identities

def _g(a, b):
    return METRIC[a, b]


def _quad_g(d, c, a, b):
    return _g(d, c) * _g(a, b) - _g(d, a) * _g(c, b) + _g(d, b) * _g(c, a)


def clifford_residual() -> float:
    """max |gamma^a gamma^b + gamma^b gamma^a - 2 g^{ab}|."""
    worst = 0.0
    I4 = np.eye(4)
    for a, b in itertools.product(range(4), repeat=2):
        r = gamma(a) @ gamma(b) + gamma(b) @ gamma(a) - 2 * METRIC[a, b] * I4
        worst = max(worst, float(np.abs(r).max()))
    g5 = gamma5()
    for a in range(4):
        worst = max(worst, float(np.abs(g5 @ gamma(a) + gamma(a) @ g5).max()))
    worst = max(worst, float(np.abs(g5 @ g5 - I4).max()))
    return worst


def metric_spinor_residual() -> float:
    """Residual of E^2 = -I, E^T = -E, Sp E = 0, sigma^{ab T} E = -E sigma^{ab}, E^-1 E = I."""
    E, E_inv = metric_spinor()
    I4 = np.eye(4)
    worst = max(
        float(np.abs(E @ E + I4).max()),
        float(np.abs(E.T + E).max()),
        abs(complex(np.trace(E))),
        float(np.abs(E_inv @ E - I4).max()),
    )
    for a, b in itertools.product(range(4), repeat=2):
        s = sigma_ab(a, b)
        worst = max(worst, float(np.abs(s.T @ E + E @ s).max()))
    return worst


def _random_contractions(rng: np.random.Generator, trials: int) -> float:
    # contract random covectors into the four-gamma traces and compare against
    # dot-product / determinant closed forms
    G = gammas()
    g5 = gamma5()
    worst = 0.0
    for _ in range(trials):
        # small integers keep every product exact in floating point
        vecs = rng.integers(-3, 4, size=(4, 4)).astype(float)  # rows: covariant d, c, a, b
        d, c, a, b = (np.einsum("a,aij->ij", v, G) for v in vecs)  # v_a gamma^a
        dv, cv, av, bv = vecs
        dot = lambda x, y: x @ METRIC @ y  # noqa: E731  (g^{ab} == g_{ab})
        expected = 4 * (dot(dv, cv) * dot(av, bv) - dot(dv, av) * dot(cv, bv) + dot(dv, bv) * dot(cv, av))
        worst = max(worst, abs(np.trace(d @ c @ a @ b) - expected))
        # eps^{dcab} v_d v_c v_a v_b with covariant v = det of covariant rows
        expected5 = 4j * sum(
            levi_civita(*p) * vecs[0, p[0]] * vecs[1, p[1]] * vecs[2, p[2]] * vecs[3, p[3]]
            for p in itertools.permutations(range(4))
        )
        worst = max(worst, abs(np.trace(g5 @ d @ c @ a @ b) - expected5))
    return float(worst)


def verify_trace_identities(seed: int = 0, trials: int = 1) -> float:
    """Maximum deviation over every listed trace identity, fully enumerated.

    ``trials`` extra random-covector contractions (seeded) are checked
    against the closed forms on top of the exhaustive enumeration.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g5 = gamma5()
    eps = epsilon_upper()
    devs = [abs(np.trace(g5))]
    for a in range(4):
        devs.append(abs(np.trace(gamma(a))))
        devs.append(abs(np.trace(g5 @ gamma(a))))
    for a, b in itertools.product(range(4), repeat=2):
        devs.append(abs(np.trace(sigma(a) @ sigma_bar(b)) - 2 * _g(a, b)))
        devs.append(abs(np.trace(sigma_bar(a) @ sigma(b)) - 2 * _g(a, b)))
        devs.append(abs(np.trace(gamma(a) @ gamma(b)) - 4 * _g(a, b)))
        devs.append(abs(np.trace(g5 @ gamma(a) @ gamma(b))))
    for c, a, b in itertools.product(range(4), repeat=3):
        devs.append(abs(np.trace(gamma(c) @ gamma(a) @ gamma(b))))
        devs.append(abs(np.trace(g5 @ gamma(c) @ gamma(a) @ gamma(b))))
    for d, c, a, b in itertools.product(range(4), repeat=4):
        q = _quad_g(d, c, a, b)
        e = eps[d, c, a, b]
        devs.append(abs(np.trace(sigma_bar(d) @ sigma(c) @ sigma_bar(a) @ sigma(b)) - 2 * (q - 1j * e)))
        devs.append(abs(np.trace(sigma(d) @ sigma_bar(c) @ sigma(a) @ sigma_bar(b)) - 2 * (q + 1j * e)))
        devs.append(abs(np.trace(gamma(d) @ gamma(c) @ gamma(a) @ gamma(b)) - 4 * q))
        devs.append(abs(np.trace(g5 @ gamma(d) @ gamma(c) @ gamma(a) @ gamma(b)) - 4j * e))
    rng = np.random.default_rng(seed)
    return float(max(max(devs), _random_contractions(rng, trials)))


def verify_sigma_triple_products() -> float:
    """Check sigma^a sigma_bar^b sigma^c and its barred partner over all 64 triples."""
    eps = epsilon_upper()
    worst = 0.0
    for a, b, c in itertools.product(range(4), repeat=3):
        lhs = sigma(a) @ sigma_bar(b) @ sigma(c)
        rhs = sigma(a) * _g(b, c) - sigma(b) * _g(a, c) + sigma(c) * _g(a, b)
        rhs = rhs + 1j * sum(eps[a, b, c, d] * sigma_lower(d) for d in range(4))
        worst = max(worst, float(np.abs(lhs - rhs).max()))

        lhs = sigma_bar(a) @ sigma(b) @ sigma_bar(c)
        rhs = sigma_bar(a) * _g(b, c) - sigma_bar(b) * _g(a, c) + sigma_bar(c) * _g(a, b)
        rhs = rhs - 1j * sum(eps[a, b, c, d] * sigma_bar_lower(d) for d in range(4))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst
