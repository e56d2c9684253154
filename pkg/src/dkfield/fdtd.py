"""Leapfrog Yee solver for the combined fields with electric and magnetic currents.

Periodic box, uniform spacing h.  Staggering (index i,j,k -> position):

    Ex (i+1/2, j, k)   Ey (i, j+1/2, k)   Ez (i, j, k+1/2)       edges
    Bx (i, j+1/2, k+1/2) ...                                      faces
    rho_e at nodes, rho_m at cell centres

E lives at integer times t_n, B at t_n + dt/2.  One step:

    E <- E + dt (rot_h B - j(t_n + dt/2))
    B <- B - dt (rot_h E - j~(t_n + dt))

Charge densities follow the discrete continuity equations, so
div_h E - rho_e and div_h B + rho_m are conserved up to rounding.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

# sampler(t, component, X, Y, Z) -> array, contravariant current component
CurrentSampler = Callable[[float, int, np.ndarray, np.ndarray, np.ndarray], np.ndarray]

E_OFFSETS = ((0.5, 0, 0), (0, 0.5, 0), (0, 0, 0.5))
B_OFFSETS = ((0, 0.5, 0.5), (0.5, 0, 0.5), (0.5, 0.5, 0))


class CFLError(ValueError):
    def __init__(self, dt: float, h: float):
        self.dt = dt
        self.max_dt = max_stable_dt(h)
        super().__init__(f"dt = {dt!r} violates the CFL bound; admissible dt <= h/sqrt(3) = {self.max_dt!r}")


def max_stable_dt(h: float) -> float:
    return h / math.sqrt(3.0)


def thread_count() -> int:
    """Worker threads from DKFIELD_THREADS (default 1)."""
    raw = os.environ.get("DKFIELD_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DKFIELD_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"DKFIELD_THREADS must be a positive integer, got {raw!r}")
    return n


@dataclass
class DualFieldState:
    h: float
    dt: float
    E: np.ndarray  # (3, nx, ny, nz)
    B: np.ndarray
    rho_e: np.ndarray  # (nx, ny, nz)
    rho_m: np.ndarray
    t: float = 0.0
    step: int = 0
    _coords: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("grid spacing h must be > 0")
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.dt > max_stable_dt(self.h) * (1 + 1e-12):
            raise CFLError(self.dt, self.h)
        if self.E.shape != self.B.shape or self.E.shape[0] != 3 or self.E.ndim != 4:
            raise ValueError("E and B must both have shape (3, nx, ny, nz)")

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.E.shape[1:]

    def coords(self, kind: str, c: int):
        """Meshgrids of the staggered positions of component c of E or B."""
        key = (kind, c)
        if key not in self._coords:
            off = (E_OFFSETS if kind == "E" else B_OFFSETS)[c]
            axes = [(np.arange(n) + o) * self.h for n, o in zip(self.shape, off)]
            self._coords[key] = np.meshgrid(*axes, indexing="ij")
        return self._coords[key]

    def copy(self) -> "DualFieldState":
        return replace(self, E=self.E.copy(), B=self.B.copy(), rho_e=self.rho_e.copy(), rho_m=self.rho_m.copy())


def _fwd(a, axis, h):
    return (np.roll(a, -1, axis) - a) / h


def _bwd(a, axis, h):
    return (a - np.roll(a, 1, axis)) / h


def _curl_component(F, c, h, diff):
    # (rot F)_c = d_{c+1} F_{c+2} - d_{c+2} F_{c+1}
    a, b = (c + 1) % 3, (c + 2) % 3
    return diff(F[b], a, h) - diff(F[a], b, h)


def curl_e(E: np.ndarray, h: float, pool=None) -> np.ndarray:
    """Curl of the edge field, located on faces."""
    return _curl(E, h, _fwd, pool)


def curl_b(B: np.ndarray, h: float, pool=None) -> np.ndarray:
    """Curl of the face field, located on edges."""
    return _curl(B, h, _bwd, pool)


def _curl(F, h, diff, pool):
    if pool is None:
        return np.stack([_curl_component(F, c, h, diff) for c in range(3)])
    return np.stack(list(pool.map(lambda c: _curl_component(F, c, h, diff), range(3))))


def div_e(E: np.ndarray, h: float) -> np.ndarray:
    return _bwd(E[0], 0, h) + _bwd(E[1], 1, h) + _bwd(E[2], 2, h)


def div_b(B: np.ndarray, h: float) -> np.ndarray:
    return _fwd(B[0], 0, h) + _fwd(B[1], 1, h) + _fwd(B[2], 2, h)


def _sample(s: DualFieldState, sampler: CurrentSampler | None, kind: str, t: float) -> np.ndarray | None:
    if sampler is None:
        return None
    return np.stack([np.asarray(sampler(t, c, *s.coords(kind, c)), dtype=float) for c in range(3)])


def fdtd_step(s: DualFieldState, j: CurrentSampler | None = None, jt: CurrentSampler | None = None, pool=None) -> DualFieldState:
    """Advance one leapfrog step; returns a new state and leaves ``s`` untouched."""
    if s.dt > max_stable_dt(s.h) * (1 + 1e-12):
        raise CFLError(s.dt, s.h)
    h, dt = s.h, s.dt
    E = s.E + dt * curl_b(s.B, h, pool)
    rho_e = s.rho_e
    je = _sample(s, j, "E", s.t + 0.5 * dt)
    if je is not None:
        E -= dt * je
        rho_e = rho_e - dt * div_e(je, h)
    B = s.B - dt * curl_e(E, h, pool)
    rho_m = s.rho_m
    jm = _sample(s, jt, "B", s.t + dt)
    if jm is not None:
        B += dt * jm
        rho_m = rho_m - dt * div_b(jm, h)
    return replace(s, E=E, B=B, rho_e=rho_e, rho_m=rho_m, t=s.t + dt, step=s.step + 1)


def energy(s: DualFieldState) -> float:
    return float(0.5 * (np.sum(s.E**2) + np.sum(s.B**2)) * s.h**3)


def gauss_residuals(s: DualFieldState) -> tuple[float, float]:
    """(max |div_h E - rho_e|, max |div_h B + rho_m|)."""
    return (
        float(np.abs(div_e(s.E, s.h) - s.rho_e).max()),
        float(np.abs(div_b(s.B, s.h) + s.rho_m).max()),
    )


def state_with_charges(h: float, dt: float, E: np.ndarray, B: np.ndarray, t: float = 0.0) -> DualFieldState:
    """State whose charge densities are read off the initial divergences."""
    return DualFieldState(h, dt, E, B, div_e(E, h), -div_b(B, h), t=t)


def zero_state(n, h: float, dt: float) -> DualFieldState:
    n = tuple(int(v) for v in n)
    z = np.zeros((3,) + n)
    return DualFieldState(h, dt, z, z.copy(), np.zeros(n), np.zeros(n))


# ------------------------------------------------------------ plane waves

_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class AxisPlaneWave:
    """Vacuum wave along a lattice axis: E_pol = a cos(k s - w t), B = k_hat x E."""

    axis: int
    polarization: int
    wavenumber: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.axis == self.polarization:
            raise ValueError("polarization must be transverse to the propagation axis")

    @property
    def omega(self) -> float:
        return abs(self.wavenumber)

    def electric(self, t: float, c: int, X, Y, Z) -> np.ndarray:
        if c != self.polarization:
            return np.zeros_like(X)
        s = (X, Y, Z)[self.axis]
        return self.amplitude * np.cos(self.wavenumber * s - self.omega * t)

    def magnetic(self, t: float, c: int, X, Y, Z) -> np.ndarray:
        bdir = np.cross(np.eye(3)[self.axis] * np.sign(self.wavenumber), np.eye(3)[self.polarization])
        if bdir[c] == 0:
            return np.zeros_like(X)
        s = (X, Y, Z)[self.axis]
        return bdir[c] * self.amplitude * np.cos(self.wavenumber * s - self.omega * t)

    def fields(self, s: DualFieldState, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Analytic (E at t, B at t + dt/2) on the staggered grid."""
        E = np.stack([self.electric(t, c, *s.coords("E", c)) for c in range(3)])
        B = np.stack([self.magnetic(t + 0.5 * s.dt, c, *s.coords("B", c)) for c in range(3)])
        return E, B


def planewave_state(n, h: float, dt: float, wave: AxisPlaneWave) -> DualFieldState:
    s = zero_state(n, h, dt)
    E, B = wave.fields(s, 0.0)
    return state_with_charges(h, dt, E, B)


def cfl_timestep(h: float, cfl: float, duration: float | None = None) -> tuple[float, int | None]:
    """dt = cfl * h/sqrt(3); with a duration, shrink dt so an integer number of steps fits."""
    if not 0 < cfl <= 1:
        raise ValueError("CFL number must be in (0, 1]")
    dt = cfl * max_stable_dt(h)
    if duration is None:
        return dt, None
    steps = math.ceil(duration / dt - 1e-9)
    return duration / steps, steps


def planewave_period_error(n: int, cfl: float = 0.5, mode: int = 1, length: float = 1.0) -> float:
    """L-infinity error of E after one period of an x-directed, y-polarized wave on an n^3 box."""
    h = length / n
    wave = AxisPlaneWave(0, 1, 2 * np.pi * mode / length)
    period = length / mode
    dt, steps = cfl_timestep(h, cfl, period)
    s = planewave_state((n, n, n), h, dt, wave)
    for _ in range(steps):
        s = fdtd_step(s)
    E_exact, _ = wave.fields(s, s.t)
    return float(np.abs(s.E - E_exact).max())


# ------------------------------------------------------------ currents from config

@dataclass(frozen=True)
class HarmonicCurrent:
    """sum_terms a cos(k.r - w t + phase), contravariant 3-vector."""

    k: np.ndarray  # (n, 3)
    omega: np.ndarray  # (n,)
    amplitude: np.ndarray  # (n, 3)
    phase: np.ndarray  # (n,)

    def __call__(self, t, c, X, Y, Z):
        out = np.zeros_like(X)
        for k, w, a, p in zip(self.k, self.omega, self.amplitude, self.phase):
            if a[c] != 0:
                out = out + a[c] * np.cos(k[0] * X + k[1] * Y + k[2] * Z - w * t + p)
        return out

    @classmethod
    def from_json(cls, terms) -> "HarmonicCurrent":
        if not isinstance(terms, list):
            raise ValueError("current spec must be a list of terms")
        ks, ws, amps, ph = [], [], [], []
        for i, term in enumerate(terms):
            try:
                ks.append(np.asarray(term["k"], dtype=float).reshape(3))
                amps.append(np.asarray(term["amplitude"], dtype=float).reshape(3))
                ws.append(float(term.get("omega", 0.0)))
                ph.append(float(term.get("phase", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"current term {i}: need k[3], amplitude[3], optional omega/phase ({exc})") from None
        return cls(np.array(ks).reshape(-1, 3), np.array(ws), np.array(amps).reshape(-1, 3), np.array(ph))


# ------------------------------------------------------------ config runner

@dataclass
class SimulationResult:
    diagnostics: list[dict]
    snapshots: list[tuple[int, np.ndarray, np.ndarray]]
    state: DualFieldState


def _initial_state(cfg: dict, n, h, dt) -> DualFieldState:
    init = cfg.get("initial", "zero")
    if isinstance(init, str):
        init = {"type": init}
    kind = init.get("type", "zero")
    if kind == "zero":
        return zero_state(n, h, dt)
    if kind == "planewave":
        axis = _AXES[init.get("axis", "x")]
        pol = _AXES[init.get("polarization", "y")]
        length = n[axis] * h
        wave = AxisPlaneWave(axis, pol, 2 * np.pi * int(init.get("mode", 1)) / length, float(init.get("amplitude", 1.0)))
        return planewave_state(n, h, dt, wave)
    if kind == "random":
        rng = np.random.default_rng(int(init.get("seed", 0)))
        amp = float(init.get("amplitude", 1.0))
        E = amp * rng.standard_normal((3,) + tuple(n))
        B = amp * rng.standard_normal((3,) + tuple(n))
        return state_with_charges(h, dt, E, B)
    raise ValueError(f"unknown initial condition type {kind!r}")


def parse_config(cfg: dict) -> dict:
    """Validate a simulation config and fill defaults.  Raises ValueError / CFLError."""
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    grid = cfg.get("grid")
    if not isinstance(grid, dict) or "n" not in grid or "h" not in grid:
        raise ValueError("config needs grid: {n: [nx, ny, nz], h}")
    n = [int(v) for v in grid["n"]]
    if len(n) != 3 or min(n) < 1:
        raise ValueError("grid.n must be three positive integers")
    h = float(grid["h"])
    if not h > 0:
        raise ValueError("grid.h must be > 0")
    if "dt" in cfg:
        dt = float(cfg["dt"])
    else:
        dt, _ = cfl_timestep(h, float(cfg.get("cfl", 0.5)))
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if dt > max_stable_dt(h) * (1 + 1e-12):
        raise CFLError(dt, h)
    steps = int(cfg.get("steps", 0))
    if steps < 0:
        raise ValueError("steps must be >= 0")
    outputs = cfg.get("outputs", ["energy", "gauss"])
    unknown = set(outputs) - {"energy", "gauss", "fields"}
    if unknown:
        raise ValueError(f"unknown outputs {sorted(unknown)}")
    currents = cfg.get("currents") or {}
    return {
        "n": n,
        "h": h,
        "dt": dt,
        "steps": steps,
        "outputs": list(outputs),
        "every": max(1, int(cfg.get("diagnostics_every", 1))),
        "fields_every": max(1, int(cfg.get("fields_every", steps or 1))),
        "j": HarmonicCurrent.from_json(currents["electric"]) if currents.get("electric") else None,
        "jt": HarmonicCurrent.from_json(currents["magnetic"]) if currents.get("magnetic") else None,
        "initial": cfg.get("initial", "zero"),
    }


def run_simulation(cfg: dict, threads: int = 1) -> SimulationResult:
    p = parse_config(cfg)
    s = _initial_state({"initial": p["initial"]}, p["n"], p["h"], p["dt"])
    diags: list[dict] = []
    snaps: list[tuple[int, np.ndarray, np.ndarray]] = []

    def record(s):
        if s.step % p["every"] == 0 or s.step == p["steps"]:
            ge, gb = gauss_residuals(s)
            diags.append({"step": s.step, "energy": energy(s), "max_divE_minus_rho": ge, "max_divB_plus_rhomag": gb})
        if "fields" in p["outputs"] and (s.step % p["fields_every"] == 0 or s.step == p["steps"]):
            snaps.append((s.step, s.E.copy(), s.B.copy()))

    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        record(s)
        for _ in range(p["steps"]):
            s = fdtd_step(s, p["j"], p["jt"], pool)
            record(s)
    finally:
        if pool is not None:
            pool.shutdown()
    return SimulationResult(diags, snaps, s)
