"""Named verification suites, each a list of (check, residual, tolerance) records."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import clifford as cl
from .bispinor import (
    Bispinor,
    Sector,
    TensorMultiplet,
    check_block_constraints,
    compose,
    compose_array,
    decompose,
    decompose_array,
    project_sector,
)
from .dynamics import (
    equivalence_report,
    lorentz_condition_residual,
    potential_equation_residual,
    potential_equation_solutions,
    random_offshell_field,
    random_onshell_field,
    transform_field,
    dk_residual,
)
from .extended import (
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
    monopole_flux_test,
    potential_identity_residual,
    random_lorentz_potential,
    strength_fields,
    two_charge_residual,
)
from .fields import PlaneWave, curl_tensor, dual_curl_tensor, electric_magnetic
from .lorentz import (
    SL2CElement,
    discrete_transform,
    discrete_transform_matrix,
    discrete_vector_rep,
    intertwiner_residuals,
    lorentz_matrix_residual,
    random_sl2c,
    transform_bispinor,
    vector_rep,
)

SUITES = ("algebra", "lorentz", "roundtrip", "sectors", "equivalence", "duality")

DEFAULT_TRIALS = {"algebra": 1, "lorentz": 100, "roundtrip": 1000, "sectors": 50, "equivalence": 100, "duality": 100}

DEFAULT_TOLERANCE = {"algebra": 1e-12, "lorentz": 1e-10, "roundtrip": 1e-12, "sectors": 1e-10, "equivalence": 1e-10, "duality": 1e-10}


@dataclass
class ReportRecord:
    suite: str
    check: str
    max_residual: float
    tolerance: float
    passed: bool
    elapsed_ms: float

    def to_json(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed_ms")
        return d


@dataclass
class Check:
    name: str
    fn: Callable[[np.random.Generator], float]
    tolerance: float
    # counting checks (number of failing samples) keep their own tolerance
    overridable: bool = True


def _max(it) -> float:
    return float(max(it, default=0.0))


# ------------------------------------------------------------ algebra

def _algebra(seed: int, trials: int, chi: float) -> list[Check]:
    return [
        Check("trace_identities", lambda rng: cl.verify_trace_identities(seed, trials), 1e-12),
        Check("sigma_triple_products", lambda rng: cl.verify_sigma_triple_products(), 1e-12),
        Check("clifford_relations", lambda rng: cl.clifford_residual(), 1e-12),
        Check("metric_spinor", lambda rng: cl.metric_spinor_residual(), 1e-12),
    ]


# ------------------------------------------------------------ roundtrip

def _roundtrip(seed: int, trials: int, chi: float) -> list[Check]:
    def tensor_side(rng):
        t = rng.normal(size=(trials, 16)) + 1j * rng.normal(size=(trials, 16))
        return float(np.abs(decompose_array(compose_array(t)) - t).max())

    def spinor_side(rng):
        U = rng.normal(size=(trials, 4, 4)) + 1j * rng.normal(size=(trials, 4, 4))
        return float(np.abs(compose_array(decompose_array(U)) - U).max())

    return [
        Check("decompose_compose", tensor_side, 1e-12),
        Check("compose_decompose", spinor_side, 1e-12),
    ]


# ------------------------------------------------------------ lorentz

def _lorentz(seed: int, trials: int, chi: float) -> list[Check]:
    def elements(rng):
        return [random_sl2c(rng) for _ in range(trials)]

    def intertwiner(key):
        return lambda rng: _max(intertwiner_residuals(k)[key] for k in elements(rng))

    def homomorphism(rng):
        out = 0.0
        for _ in range(trials):
            a, b = random_sl2c(rng), random_sl2c(rng)
            out = max(out, float(np.abs(vector_rep(a @ b) - vector_rep(a) @ vector_rep(b)).max()))
        return out

    def metric(rng):
        return _max(lorentz_matrix_residual(vector_rep(k)) for k in elements(rng))

    def double_cover(rng):
        return _max(float(np.abs(vector_rep(-k) - vector_rep(k)).max()) for k in elements(rng))

    def proper_orthochronous(rng):
        out = 0.0
        for k in elements(rng):
            L = vector_rep(k)
            out = max(out, abs(np.linalg.det(L) - 1), max(0.0, 1 - L[0, 0]))
        return float(out)

    def involution(rng):
        out = 0.0
        for _ in range(trials):
            U = Bispinor(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            for which in "MN":
                out = max(out, float(np.abs(discrete_transform(discrete_transform(U, which), which).U - U.U).max()))
        return out

    def matrix_form(rng):
        out = 0.0
        for _ in range(trials):
            U = Bispinor(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            for which in "MN":
                out = max(out, float(np.abs(discrete_transform(U, which).U - discrete_transform_matrix(U, which).U).max()))
        return out

    def discrete_vectors(rng):
        g = cl.METRIC
        return max(float(np.abs(discrete_vector_rep("M") - g).max()), float(np.abs(discrete_vector_rep("N") + g).max()))

    return [
        Check("intertwiner_sigma", intertwiner("sigma"), 1e-10),
        Check("intertwiner_sigma_bar", intertwiner("sigma_bar"), 1e-10),
        Check("intertwiner_gamma", intertwiner("gamma"), 1e-10),
        Check("homomorphism", homomorphism, 1e-9),
        Check("metric_preserved", metric, 1e-10),
        Check("double_cover", double_cover, 1e-10),
        Check("proper_orthochronous", proper_orthochronous, 1e-10),
        Check("discrete_involution", involution, 0.0, overridable=False),
        Check("discrete_matrix_form", matrix_form, 1e-12),
        Check("discrete_vector_action", discrete_vectors, 1e-12),
    ]


# ------------------------------------------------------------ sectors

def _sectors(seed: int, trials: int, chi: float) -> list[Check]:
    checks = []
    for sec in Sector:

        def idempotence(rng, sec=sec):
            out = 0.0
            for _ in range(trials):
                t = TensorMultiplet.random(rng)
                p = project_sector(t, sec)
                out = max(out, float(np.abs(project_sector(p, sec).components - p.components).max()))
            return out

        def constraints(rng, sec=sec):
            return _max(check_block_constraints(compose(project_sector(TensorMultiplet.random(rng), sec)), sec) for _ in range(trials))

        def preserved(rng, sec=sec):
            out = 0.0
            for _ in range(trials):
                U = compose(project_sector(TensorMultiplet.random(rng), sec))
                out = max(out, check_block_constraints(transform_bispinor(U, random_sl2c(rng)), sec))
            return out

        def support(rng, sec=sec):
            # a transformed sector element decomposes back into the same sector
            out = 0.0
            for _ in range(trials):
                U = compose(project_sector(TensorMultiplet.random(rng), sec))
                t = decompose(transform_bispinor(U, random_sl2c(rng)))
                out = max(out, float(np.abs(t.components - project_sector(t, sec).components).max()))
            return out

        checks += [
            Check(f"{sec.value}_idempotence", idempotence, 1e-12),
            Check(f"{sec.value}_block_constraints", constraints, 1e-12),
            Check(f"{sec.value}_lorentz_preserved", preserved, 1e-10),
            Check(f"{sec.value}_support_preserved", support, 1e-10),
        ]
    return checks


# ------------------------------------------------------------ equivalence

MASS = 1.0
OFFSHELL_FLOOR = 1e-6


def _equivalence(seed: int, trials: int, chi: float) -> list[Check]:
    def onshell(key):
        def run(rng):
            out = 0.0
            for _ in range(trials):
                f = random_onshell_field(MASS, rng)
                r = equivalence_report(f, MASS, rng.normal(size=4))
                out = max(out, r[key])
            return out

        return run

    def offshell_failures(rng):
        bad = 0
        for _ in range(trials):
            r = equivalence_report(random_offshell_field(rng), MASS, rng.normal(size=4))
            if not (r["spinor"] > OFFSHELL_FLOOR and r["tensor"] > OFFSHELL_FLOOR):
                bad += 1
        return float(bad)

    def offshell_mismatch(rng):
        return _max(equivalence_report(random_offshell_field(rng), MASS, rng.normal(size=4))["mismatch"] for _ in range(trials))

    def covariance(rng):
        out = 0.0
        for _ in range(trials):
            f = transform_field(random_onshell_field(MASS, rng), random_sl2c(rng))
            out = max(out, float(np.abs(dk_residual(f, MASS, rng.normal(size=4))).max()))
        return out

    def emergence(sector):
        def run(rng):
            return lorentz_emergence(sector, rng, trials)

        return run

    return [
        Check("onshell_spinor", onshell("spinor"), 1e-10),
        Check("onshell_tensor", onshell("tensor"), 1e-10),
        Check("onshell_mismatch", onshell("mismatch"), 1e-10),
        Check("offshell_mismatch", offshell_mismatch, 1e-10),
        Check("offshell_not_jointly_nonzero", offshell_failures, 0.0, overridable=False),
        Check("lorentz_covariance", covariance, 1e-8),
        Check("lorentz_condition_S1", emergence(Sector.S1), 1e-10),
        Check("lorentz_condition_S1tilde", emergence(Sector.S1tilde), 1e-10),
    ]


def lorentz_emergence(sector: Sector, rng: np.random.Generator, trials: int, tol: float = 1e-10) -> float:
    """Largest Lorentz-condition violation among configurations that solve the potential equations.

    Configurations are random combinations of the Fourier solutions at random
    wavevectors, plus a tiny random perturbation of the sector components.
    Configurations whose potential-equation residual exceeds ``tol`` are skipped;
    a run that skips all of them reports infinity.
    """
    from .bispinor import PSEUDOVECTOR, VECTOR, sector_mask

    pot_slice = VECTOR if sector is Sector.S1 else PSEUDOVECTOR
    mask = sector_mask(sector)
    worst = 0.0
    used = 0
    for _ in range(trials):
        k = rng.normal(size=4)
        N = potential_equation_solutions(k, sector)
        t = N @ (rng.normal(size=N.shape[1]) + 1j * rng.normal(size=N.shape[1]))
        t = t + 1e-13 * mask * (rng.normal(size=16) + 1j * rng.normal(size=16))
        f = PlaneWave.single(k, t)
        x = rng.normal(size=4)
        if potential_equation_residual(f, sector, x) > tol:
            continue
        used += 1
        worst = max(worst, lorentz_condition_residual(f.component(pot_slice), x))
    return worst if used else float("inf")


# ------------------------------------------------------------ duality

def _random_pair(rng, null=False) -> PotentialPair:
    return PotentialPair(random_lorentz_potential(rng, 2, null), random_lorentz_potential(rng, 2, null))


def _strength_gap(a: CombinedStrength, b: CombinedStrength, x) -> float:
    return _max(float(np.abs(u.value(x) - v.value(x)).max()) for u, v in zip(a.parts(), b.parts()))


def _duality(seed: int, trials: int, chi: float) -> list[Check]:
    def dual_dual(rng):
        F = rng.normal(size=(trials, 6)) + 1j * rng.normal(size=(trials, 6))
        return float(np.abs(dual_tensor(dual_tensor(F)) + F).max())

    def group_law(rng):
        out = 0.0
        for _ in range(max(1, trials // 10)):
            p = _random_pair(rng)
            c = strength_fields(p)
            a, b = rng.uniform(-2 * np.pi, 2 * np.pi, size=2)
            x = rng.normal(size=4)
            p12, p1_2 = duality_rotate(p, a + b), duality_rotate(duality_rotate(p, b), a)
            out = max(out, float(np.abs(p12.A.value(x) - p1_2.A.value(x)).max()), float(np.abs(p12.At.value(x) - p1_2.At.value(x)).max()))
            out = max(out, _strength_gap(duality_rotate(c, a + b), duality_rotate(duality_rotate(c, b), a), x))
            back = duality_rotate(duality_rotate(p, a), -a)
            out = max(out, float(np.abs(back.A.value(x) - p.A.value(x)).max()))
        return out

    def quarter_turn(rng):
        out = 0.0
        for _ in range(max(1, trials // 10)):
            p = _random_pair(rng)
            cur = CurrentPair(box(p.A), box(p.At))
            c = strength_fields(p)
            x = rng.normal(size=4)
            for sign in (1, -1):
                ang = sign * np.pi / 2
                rp, dp = duality_rotate(p, ang), discrete_duality(p, sign)
                rc, dc = duality_rotate(cur, ang), discrete_duality(cur, sign)
                out = max(
                    out,
                    float(np.abs(rp.A.value(x) - dp.A.value(x)).max()),
                    float(np.abs(rp.At.value(x) - dp.At.value(x)).max()),
                    float(np.abs(rc.j.value(x) - dc.j.value(x)).max()),
                    float(np.abs(rc.jt.value(x) - dc.jt.value(x)).max()),
                    _strength_gap(duality_rotate(c, ang), discrete_duality(c, sign), x),
                )
        return out

    def invariance(rng):
        return duality_invariance_test(dyonic_scenario(int(rng.integers(2**31)), points=8), chi)

    def potential_identity(rng):
        return _max(potential_identity_residual(_random_pair(rng), rng.normal(size=4)) for _ in range(trials))

    def extended_sourced(rng):
        out = 0.0
        for _ in range(max(1, trials // 10)):
            p = _random_pair(rng)
            r = extended_residual(strength_fields(p), box(p.A), box(p.At), rng.normal(size=4))
            out = max(out, _max(float(np.abs(v).max()) for v in r.values()))
        return out

    def extended_vacuum(rng):
        out = 0.0
        for _ in range(max(1, trials // 10)):
            p = _random_pair(rng, null=True)
            r = extended_residual(strength_fields(p), None, None, rng.normal(size=4))
            out = max(out, _max(float(np.abs(v).max()) for v in r.values()))
        return out

    def two_charge(combination):
        def run(rng):
            return two_charge_check(rng, max(1, trials // 10), combination)

        return run

    def flux(rng):
        return max(abs(monopole_flux_test(1.0, r, 16) + 1.0) for r in (1.0, 2.0))

    return [
        Check("dual_dual", dual_dual, 1e-12),
        Check("rotation_group_law", group_law, 1e-12),
        Check("quarter_turn_table", quarter_turn, 1e-12),
        Check("invariance", invariance, 1e-10),
        Check("two_potential_identity", potential_identity, 1e-12),
        Check("extended_sourced", extended_sourced, 1e-8),
        Check("extended_vacuum", extended_vacuum, 1e-10),
        Check("two_charge_sum", two_charge("sum"), 1e-10),
        Check("two_charge_difference", two_charge("difference"), 1e-10),
        Check("monopole_flux", flux, 1e-10),
    ]


def two_charge_check(rng: np.random.Generator, trials: int, combination: str) -> float:
    """Combine separately solved vector and pseudovector photons and test the two-charge system.

    Each sector is a Lorentz-gauge plane-wave potential sourced by its own
    current (j = box A, j~ = box A~), so each solves its own sourced system exactly.
    """
    from .dynamics import massless_maxwell_residual, massless_pseudovector_residual, max_abs

    out = 0.0
    sgn = 1.0 if combination == "sum" else -1.0
    for _ in range(trials):
        A = random_lorentz_potential(rng, 2)
        At = random_lorentz_potential(rng, 2)
        j, jt = box(A), box(At)
        E, B = electric_magnetic(curl_tensor(A))
        Et, Bt = electric_magnetic(dual_curl_tensor(At))
        x = rng.normal(size=4)
        # the separate sector solutions must be genuine first
        out = max(out, max_abs(massless_maxwell_residual(E, B, A, x, j)), max_abs(massless_pseudovector_residual(Et, Bt, At, x, jt)))
        r = two_charge_residual(E + sgn * Et, B + sgn * Bt, j, jt, x, combination)
        out = max(out, _max(float(np.abs(v).max()) for v in r.values()))
    return out


_BUILDERS = {
    "algebra": _algebra,
    "lorentz": _lorentz,
    "roundtrip": _roundtrip,
    "sectors": _sectors,
    "equivalence": _equivalence,
    "duality": _duality,
}


def run_suite(suite: str, seed: int = 0, trials: int | None = None, tolerance: float | None = None, chi: float = 0.7) -> list[ReportRecord]:
    if suite not in _BUILDERS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials is None:
        trials = DEFAULT_TRIALS[suite]
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if tolerance is not None and not tolerance > 0:
        raise ValueError("tolerance must be > 0")
    records = []
    for i, check in enumerate(_BUILDERS[suite](seed, trials, chi)):
        rng = np.random.default_rng([seed, i])
        t0 = time.perf_counter()
        value = float(check.fn(rng))
        ms = (time.perf_counter() - t0) * 1e3
        tol = tolerance if (tolerance is not None and check.overridable) else check.tolerance
        records.append(ReportRecord(suite, check.name, value, tol, bool(value <= tol), ms))
    return records
