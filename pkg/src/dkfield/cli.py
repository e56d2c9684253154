"""Command-line entry point: verify, residual, simulate, duality.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .dynamics import (
    dk_residual,
    massless_maxwell_residual,
    massless_pseudovector_residual,
    proca_vector_residual,
    pseudovector_proca_residual,
)
from .extended import PotentialPair, duality_invariance_test, dyonic_scenario, extended_residual, strength_fields
from .fdtd import CFLError, run_simulation, thread_count
from .fields import FieldSpec, electric_magnetic, load_field_spec
from .suites import DEFAULT_TOLERANCE, DEFAULT_TRIALS, SUITES, run_suite

SYSTEMS = ("dk", "proca", "pseudoproca", "maxwell", "pseudomaxwell", "extended")

DK_NAMES = (
    ["scalar"]
    + [f"vector_{k}" for k in range(4)]
    + ["pseudoscalar"]
    + [f"pseudovector_{k}" for k in range(4)]
    + [f"tensor_{d}{k}" for d, k in ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))]
)


class InputError(Exception):
    pass


def _fmt(v: float) -> str:
    return repr(float(v))


def _flatten(groups: dict[str, np.ndarray]):
    for name, vals in groups.items():
        vals = np.atleast_1d(vals)
        if vals.size == 1:
            yield name, abs(complex(vals[0]))
        else:
            for i, v in enumerate(vals):
                yield f"{name}_{i}", abs(complex(v))


def evaluate_system(spec: FieldSpec, system: str, m: float, x) -> list[tuple[str, float]]:
    f = spec.field
    if system == "dk":
        return [(n, abs(v)) for n, v in zip(DK_NAMES, dk_residual(f, m, x))]
    if system == "proca":
        return list(_flatten(proca_vector_residual(f.vector(), f.antisym(), m, x)))
    if system == "pseudoproca":
        return list(_flatten(pseudovector_proca_residual(f.pseudovector(), f.antisym(), m, x)))
    if system == "maxwell":
        E, B = electric_magnetic(f.antisym())
        return list(_flatten(massless_maxwell_residual(E, B, f.vector(), x, spec.electric)))
    if system == "pseudomaxwell":
        E, B = electric_magnetic(f.antisym())
        return list(_flatten(massless_pseudovector_residual(E, B, f.pseudovector(), x, spec.magnetic)))
    if system == "extended":
        c = strength_fields(PotentialPair(f.vector(), f.pseudovector()))
        return list(_flatten(extended_residual(c, spec.electric, spec.magnetic, x)))
    raise InputError(f"unknown system {system!r}")


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ------------------------------------------------------------ commands

def cmd_verify(args) -> int:
    records = run_suite(args.suite, seed=args.seed, trials=args.trials, tolerance=args.tolerance, chi=args.chi)
    passed = all(r.passed for r in records)
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials if args.trials is not None else DEFAULT_TRIALS[args.suite],
        "passed": passed,
        "checks": [r.to_json(timing=not args.no_timing) for r in records],
    }
    _write(json.dumps(report, indent=2) + "\n", args.out)
    for r in records:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}.{r.check} max_residual={r.max_residual:.3e} tol={r.tolerance:.1e}", file=sys.stderr)
    return 0 if passed else 1


def cmd_residual(args) -> int:
    text = _read_text(args.spec)
    try:
        spec = load_field_spec(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.spec}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except (ValueError, TypeError) as exc:
        raise InputError(f"{args.spec}: {exc}") from None
    if args.points < 1:
        raise InputError("--points must be >= 1")
    if args.system in ("proca", "pseudoproca") and not args.mass > 0:
        raise InputError(f"system {args.system} needs --mass > 0; use the massless systems for m = 0")
    if args.mass < 0:
        raise InputError("--mass must be >= 0")
    rng = np.random.default_rng(args.seed)
    points = rng.normal(size=(args.points, 4))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point", "x0", "x1", "x2", "x3", "equation", "residual"])
    worst = 0.0
    for i, x in enumerate(points):
        for name, val in evaluate_system(spec, args.system, args.mass, x):
            if name != "continuity":  # reported, not a field equation
                worst = max(worst, val)
            w.writerow([i, *(_fmt(v) for v in x), name, _fmt(val)])
    _write(buf.getvalue(), args.out)
    if args.tolerance is not None and worst > args.tolerance:
        print(f"max residual {worst:.3e} exceeds tolerance {args.tolerance:.1e}", file=sys.stderr)
        return 1
    return 0


def cmd_simulate(args) -> int:
    path = args.config_path or args.config
    if path is None:
        raise InputError("simulate needs a config path")
    cfg = _load_json(path)
    try:
        threads = thread_count()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        result = run_simulation(cfg, threads=threads)
    except CFLError as exc:
        raise InputError(f"{exc}") from None
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: invalid config: {exc}") from None
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "diagnostics.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "energy", "max_divE_minus_rho", "max_divB_plus_rhomag"])
        for d in result.diagnostics:
            w.writerow([d["step"], _fmt(d["energy"]), _fmt(d["max_divE_minus_rho"]), _fmt(d["max_divB_plus_rhomag"])])
    if result.snapshots:
        with open(os.path.join(out_dir, "fields.csv"), "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "i", "j", "k", "Ex", "Ey", "Ez", "Bx", "By", "Bz"])
            for step, E, B in result.snapshots:
                for idx in np.ndindex(*E.shape[1:]):
                    w.writerow([step, *idx, *(_fmt(E[(c,) + idx]) for c in range(3)), *(_fmt(B[(c,) + idx]) for c in range(3))])
    e0 = result.diagnostics[0]["energy"]
    drift = max(abs(d["energy"] - e0) for d in result.diagnostics) / e0 if e0 > 0 else 0.0
    print(f"steps={result.state.step} dt={result.state.dt!r} relative_energy_drift={drift:.3e}", file=sys.stderr)
    return 0


def cmd_duality(args) -> int:
    sc = dyonic_scenario(args.seed, points=args.points)
    value = duality_invariance_test(sc, args.chi)
    tol = args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE["duality"]
    ok = value <= tol
    report = {"chi": args.chi, "seed": args.seed, "max_residual": value, "tolerance": tol, "passed": ok}
    _write(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if ok else 1


# ------------------------------------------------------------ parser

def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dkfield", description="Bispinor/tensor field identities, residuals and the two-charge Maxwell solver.")
    sub = p.add_subparsers(dest="command", required=True)

    tol_help = "default tolerances: " + ", ".join(f"{k}={v:g}" for k, v in DEFAULT_TOLERANCE.items())
    v = sub.add_parser("verify", help="run a verification suite", description=tol_help)
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=_positive_int, default=None, help="random samples per check (suite-specific default)")
    v.add_argument("--tolerance", type=_positive_float, default=None, help="override every residual tolerance")
    v.add_argument("--chi", type=float, default=0.7, help="duality angle for the duality suite")
    v.add_argument("--out", default=None, help="JSON report path (default stdout)")
    v.add_argument("--no-timing", action="store_true", help="omit elapsed_ms so reports are byte-identical")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("residual", help="evaluate a field system on a JSON field spec")
    r.add_argument("spec")
    r.add_argument("--system", choices=SYSTEMS, default="dk")
    r.add_argument("--mass", "-m", type=float, default=1.0)
    r.add_argument("--points", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tolerance", type=_positive_float, default=None, help="exit 1 if any residual exceeds this")
    r.add_argument("--out", default=None, help="CSV path (default stdout)")
    r.set_defaults(func=cmd_residual)

    s = sub.add_parser("simulate", help="run the Yee solver from a JSON config")
    s.add_argument("config_path", nargs="?")
    s.add_argument("--config", default=None)
    s.add_argument("--out", default=None, help="output directory (default .)")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("duality", help="duality-invariance check on a dyonic plane-wave scenario")
    d.add_argument("--chi", type=float, default=0.7)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--points", type=_positive_int, default=8)
    d.add_argument("--tolerance", type=_positive_float, default=None)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_duality)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on usage errors
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
