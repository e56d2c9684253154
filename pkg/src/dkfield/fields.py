"""Exactly differentiable field samplers.

A sampler has a component ``shape`` and two methods evaluated at a
contravariant 4-point x = (t, x, y, z):

    value(x) -> ndarray[shape]
    grad(x)  -> ndarray[(4,) + shape],  grad(x)[a] = d/dx^a

Plane waves carry covariant wavevectors k_a; each term contributes
amp * exp(-i k_a x^a), so d_a picks up -i k_a.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bispinor import ANTISYM, PSEUDOVECTOR, VECTOR, pairs_to_complex
from .clifford import METRIC, PAIRS, epsilon_mixed


class Sampler:
    shape: tuple[int, ...]

    def value(self, x) -> np.ndarray:
        raise NotImplementedError

    def grad(self, x) -> np.ndarray:
        raise NotImplementedError

    def __add__(self, other):
        return SumField((self, other))

    def __sub__(self, other):
        return SumField((self, ScaledField(other, -1.0)))

    def __neg__(self):
        return ScaledField(self, -1.0)

    def __mul__(self, alpha):
        return ScaledField(self, alpha)

    __rmul__ = __mul__


class PlaneWave(Sampler):
    """Finite sum of amp_j exp(-i k_j . x)."""

    def __init__(self, wavevectors, amplitudes, shape=None):
        k = np.asarray(wavevectors, dtype=float).reshape(-1, 4)
        amp = np.asarray(amplitudes, dtype=complex)
        if shape is None:
            shape = amp.shape[1:] if amp.ndim > 1 else ()
        amp = amp.reshape((k.shape[0],) + tuple(shape))
        self.k = k
        self.amp = amp
        self.shape = tuple(shape)

    @classmethod
    def zero(cls, shape) -> "PlaneWave":
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        return cls(np.zeros((0, 4)), np.zeros((0,) + shape), shape)

    @classmethod
    def single(cls, k, amp) -> "PlaneWave":
        amp = np.asarray(amp, dtype=complex)
        return cls(np.asarray(k, dtype=float)[None, :], amp[None, ...], amp.shape)

    def __len__(self):
        return self.k.shape[0]

    def _phases(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(-1j * (self.k @ x))

    def value(self, x) -> np.ndarray:
        return np.tensordot(self._phases(x), self.amp, axes=(0, 0))

    def grad(self, x) -> np.ndarray:
        ph = self._phases(x)
        # sum_j (-i k_ja) ph_j amp_j
        return np.tensordot((-1j * self.k * ph[:, None]).T, self.amp, axes=(1, 0))

    def derivative(self, a: int) -> "PlaneWave":
        """Exact d_a as another plane wave."""
        factor = -1j * self.k[:, a]
        return PlaneWave(self.k, self.amp * factor.reshape((-1,) + (1,) * len(self.shape)), self.shape)

    def map(self, M) -> "PlaneWave":
        """Apply a linear map to the component axis: amp -> amp @ M^T."""
        M = np.asarray(M)
        amp = np.einsum("ij,nj->ni", M, self.amp.reshape(len(self), int(np.prod(self.shape))))
        return PlaneWave(self.k, amp, (M.shape[0],))

    def component(self, sl) -> "PlaneWave":
        amp = self.amp[(slice(None), sl)]
        return PlaneWave(self.k, amp, amp.shape[1:])

    def __add__(self, other):
        if isinstance(other, PlaneWave):
            if other.shape != self.shape:
                raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
            return PlaneWave(np.vstack([self.k, other.k]), np.concatenate([self.amp, other.amp]), self.shape)
        return super().__add__(other)

    def __sub__(self, other):
        if isinstance(other, PlaneWave):
            return self + other * -1.0
        return super().__sub__(other)

    def __mul__(self, alpha):
        if np.isscalar(alpha):
            return PlaneWave(self.k, alpha * self.amp, self.shape)
        return super().__mul__(alpha)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class PlaneWaveField(PlaneWave):
    """Plane-wave superposition whose amplitudes are 16-component tensor multiplets."""

    def __init__(self, wavevectors, amplitudes):
        super().__init__(wavevectors, amplitudes, (16,))

    @classmethod
    def from_planewave(cls, pw: PlaneWave) -> "PlaneWaveField":
        if pw.shape != (16,):
            raise ValueError("need a 16-component plane wave")
        return cls(pw.k, pw.amp)

    @classmethod
    def from_terms(cls, terms) -> "PlaneWaveField":
        """``terms``: iterable of (k, multiplet) with multiplet a TensorMultiplet or 16 complex."""
        ks, amps = [], []
        for k, t in terms:
            ks.append(np.asarray(k, dtype=float))
            amps.append(getattr(t, "components", t))
        if not ks:
            return cls(np.zeros((0, 4)), np.zeros((0, 16)))
        return cls(np.array(ks), np.array(amps))

    def __add__(self, other):
        out = super().__add__(other)
        return PlaneWaveField.from_planewave(out) if isinstance(out, PlaneWave) else out

    def __mul__(self, alpha):
        out = super().__mul__(alpha)
        return PlaneWaveField.from_planewave(out) if isinstance(out, PlaneWave) else out

    __rmul__ = __mul__

    def vector(self) -> PlaneWave:
        return self.component(VECTOR)

    def pseudovector(self) -> PlaneWave:
        return self.component(PSEUDOVECTOR)

    def antisym(self) -> PlaneWave:
        return self.component(ANTISYM)

    def scalar(self) -> PlaneWave:
        return self.component(0)

    def pseudoscalar(self) -> PlaneWave:
        return self.component(5)

    def to_json(self) -> list[dict]:
        return [
            {"k": [float(v) for v in k], "polarization": [[float(z.real), float(z.imag)] for z in amp]}
            for k, amp in zip(self.k, self.amp)
        ]


def planewave_terms_from_json(terms, ncomp: int) -> PlaneWave:
    ks, amps = [], []
    for i, term in enumerate(terms):
        if not isinstance(term, dict) or "k" not in term or "polarization" not in term:
            raise ValueError(f"term {i}: expected an object with 'k' and 'polarization'")
        k = np.asarray(term["k"], dtype=float)
        if k.shape != (4,):
            raise ValueError(f"term {i}: 'k' must hold 4 reals")
        ks.append(k)
        amps.append(pairs_to_complex(term["polarization"], ncomp))
    if not ks:
        return PlaneWave.zero(ncomp)
    return PlaneWave(np.array(ks), np.array(amps), (ncomp,))


@dataclass
class FieldSpec:
    """A multiplet plane-wave field plus optional electric/magnetic currents (covariant 4-vectors)."""

    field: PlaneWaveField
    electric: PlaneWave | None = None
    magnetic: PlaneWave | None = None


def load_field_spec(text: str) -> FieldSpec:
    """Parse the JSON field-spec format.

    Either a bare list of ``{k: [4 reals], polarization: [16 [re, im]]}`` terms or
    an object ``{"terms": [...], "currents": {"electric": [...], "magnetic": [...]}}``
    whose current terms carry 4 [re, im] pairs.  Raises json.JSONDecodeError on
    malformed JSON and ValueError on schema problems.
    """
    data = json.loads(text)
    currents = {}
    if isinstance(data, dict):
        terms = data.get("terms", [])
        currents = data.get("currents") or {}
        if not isinstance(currents, dict):
            raise ValueError("'currents' must be an object")
    elif isinstance(data, list):
        terms = data
    else:
        raise ValueError("field spec must be a list of terms or an object with 'terms'")
    pw = planewave_terms_from_json(terms, 16)
    field = PlaneWaveField(pw.k, pw.amp)
    el = currents.get("electric")
    mag = currents.get("magnetic")
    return FieldSpec(
        field,
        planewave_terms_from_json(el, 4) if el is not None else None,
        planewave_terms_from_json(mag, 4) if mag is not None else None,
    )


class SumField(Sampler):
    def __init__(self, parts):
        parts = tuple(parts)
        shapes = {p.shape for p in parts}
        if len(shapes) != 1:
            raise ValueError(f"cannot add fields of shapes {shapes}")
        self.parts = parts
        self.shape = parts[0].shape

    def value(self, x):
        return sum(p.value(x) for p in self.parts)

    def grad(self, x):
        return sum(p.grad(x) for p in self.parts)


class ScaledField(Sampler):
    def __init__(self, base: Sampler, alpha):
        self.base = base
        self.alpha = alpha
        self.shape = base.shape

    def value(self, x):
        return self.alpha * self.base.value(x)

    def grad(self, x):
        return self.alpha * self.base.grad(x)


class ZeroField(Sampler):
    def __init__(self, shape):
        self.shape = (shape,) if isinstance(shape, int) else tuple(shape)

    def value(self, x):
        return np.zeros(self.shape, dtype=complex)

    def grad(self, x):
        return np.zeros((4,) + self.shape, dtype=complex)


class PointChargeField(Sampler):
    """Static q r_hat / (4 pi r^2) around ``center``, with analytic first derivatives."""

    def __init__(self, charge: float, center=(0.0, 0.0, 0.0)):
        self.charge = float(charge)
        self.center = np.asarray(center, dtype=float)
        self.shape = (3,)

    def _r(self, x):
        r = np.asarray(x, dtype=float)[1:] - self.center
        rn = np.linalg.norm(r)
        if rn == 0:
            raise ValueError("point-charge field is singular at its center")
        return r, rn

    def value(self, x):
        r, rn = self._r(x)
        return (self.charge / (4 * np.pi) * r / rn**3).astype(complex)

    def grad(self, x):
        r, rn = self._r(x)
        jac = self.charge / (4 * np.pi) * (np.eye(3) / rn**3 - 3 * np.outer(r, r) / rn**5)
        out = np.zeros((4, 3), dtype=complex)
        out[1:] = jac  # out[i, j] = d_i field_j, jac symmetric
        return out


# ------------------------------------------------------------ tensor helpers

def _antisym_projector() -> np.ndarray:
    # 6 x 16 map from a flattened 4x4 tensor to the stored pairs
    P = np.zeros((6, 16))
    for i, (m, n) in enumerate(PAIRS):
        P[i, 4 * m + n] = 1.0
    return P


_PAIR_FROM_FULL = _antisym_projector()


def curl_tensor(A: PlaneWave) -> PlaneWave:
    """F_mn = d_m A_n - d_n A_m for a covariant 4-vector plane wave."""
    dA = [A.derivative(a) for a in range(4)]
    amp = np.zeros((len(A), 6), dtype=complex)
    for i, (m, n) in enumerate(PAIRS):
        amp[:, i] = dA[m].amp[:, n] - dA[n].amp[:, m]
    return PlaneWave(A.k, amp, (6,))


def dual_curl_tensor(At: PlaneWave) -> PlaneWave:
    """F~_mn = eps_mn^{cl} d_c A~_l."""
    eps = epsilon_mixed()
    grads = np.stack([-1j * At.k[:, c, None] * At.amp for c in range(4)], axis=1)  # (n, c, l)
    full = np.einsum("mncl,jcl->jmn", eps, grads)
    return PlaneWave(At.k, full.reshape(len(At), 16) @ _PAIR_FROM_FULL.T, (6,))


# E^k = F_0k,  B = -(F_23, F_31, F_12)
E_FROM_F6 = np.array([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], dtype=float)
B_FROM_F6 = -np.array([[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]], dtype=float)


def electric_magnetic(F6: PlaneWave) -> tuple[PlaneWave, PlaneWave]:
    """Contravariant 3-vectors (E, B) from stored antisymmetric components."""
    return F6.map(E_FROM_F6), F6.map(B_FROM_F6)


def f6_from_electric_magnetic(E, B) -> np.ndarray:
    """Inverse of the identification, numeric arrays (..., 3) -> (..., 6)."""
    E = np.asarray(E)
    B = np.asarray(B)
    return np.concatenate([E, -B], axis=-1)


def raise_vector(v) -> np.ndarray:
    return np.asarray(v) @ METRIC
