"""Command-line interface: point evaluation, sweeps, verification, reports.

Subcommands
  point    one configuration, prints the matrix elements and correlations
  sweep    a grid of configurations, written as a reproducible CSV
  verify   the numerical identity suites (dual-path responses, bath
           equivalence, zero-temperature series); exit 1 on any failure
  report   the one-detector thermality comparison table

Sweep parameters may come from an INI config file ([sweep] section); command
line flags win on conflict.  Errors are reported as a single JSON line on
stderr with a nonzero exit code (2 for usage errors, 1 otherwise).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys

from . import __version__
from .core import INERTIAL, SCENARIOS, DetectorParams, ScenarioConfig
from .correlations import harvest_point
from .density import l_element, transition_probability_closed
from .quadrature import QuadratureSpec, RegulatorPolicy
from .sweep import SweepSpec, parse_values, run_sweep
from .thermality import (
    format_equivalence_report,
    series_in_temperature,
    single_detector_equivalence_report,
)
from .wightman import FieldState, kms_beta

_NUMERIC_KEYS = ("abs_tol", "rel_tol", "t_max", "eps0", "levels")


def _add_numeric_flags(p: argparse.ArgumentParser):
    p.add_argument("--abs-tol", type=float, default=None, help="2D absolute tolerance (default 1e-9)")
    p.add_argument("--rel-tol", type=float, default=None, help="2D relative tolerance (default 1e-6)")
    p.add_argument("--t-max", type=float, default=None, help="integration half-width in sigma (default 7)")
    p.add_argument("--eps0", type=float, default=None, help="initial regulator (default 0.1)")
    p.add_argument("--levels", type=int, default=None, help="regulator halvings (default 5)")


def _quad_spec(values: dict) -> QuadratureSpec:
    base = QuadratureSpec.default_2d()
    reg = RegulatorPolicy(
        eps0=values.get("eps0") or base.regulator.eps0,
        levels=values.get("levels") or base.regulator.levels,
    )
    return QuadratureSpec(
        abs_tol=values.get("abs_tol") or base.abs_tol,
        rel_tol=values.get("rel_tol") or base.rel_tol,
        t_max=values.get("t_max") or base.t_max,
        regulator=reg,
    )


def _field_state(state: str, temperature: float | None, beta: float | None,
                 t_gh: float | None) -> FieldState:
    if state == "minkowski":
        return FieldState.minkowski()
    if state == "thermal":
        if beta is None and temperature is None:
            raise ValueError("thermal state needs --temperature or --beta")
        return FieldState.thermal(beta=beta, temperature=temperature)
    if state == "desitter":
        if t_gh is None:
            raise ValueError("desitter state needs --t-gh")
        return FieldState.desitter(t_gh)
    raise ValueError(f"unknown state {state!r}")


def _cmd_point(args) -> int:
    spec = _quad_spec(vars(args))
    state = _field_state(args.state, args.temperature, args.beta, args.t_gh)
    cfg = ScenarioConfig(args.scenario, acceleration=args.a, separation=args.L)
    det = DetectorParams(coupling=args.coupling, gap=args.omega)
    res = harvest_point(cfg, det, state, spec)
    e = res.elements
    if args.json:
        print(json.dumps({
            "scenario": cfg.scenario,
            "a_sigma": cfg.acceleration,
            "omega_sigma": det.gap,
            "L_sigma": cfg.separation,
            "lambda": det.coupling,
            "state": state.kind,
            "L_AA": e.l_aa,
            "L_BB": e.l_bb,
            "L_AB": [e.l_ab.real, e.l_ab.imag],
            "M": [e.m.real, e.m.imag],
            "L_plus": res.l_plus,
            "L_minus": res.l_minus,
            "mutual_info": res.mutual_information,
            "concurrence": res.concurrence,
            "err_est": res.err_mutual_information,
        }))
        return 0
    print(f"scenario      {cfg.scenario}")
    print(f"a*sigma       {cfg.acceleration:g}")
    print(f"Omega*sigma   {det.gap:g}")
    print(f"L/sigma       {cfg.separation:g}")
    print(f"state         {state.kind}" + (f" (T={state.temperature:g})" if state.kind != "minkowski" else ""))
    print(f"coupling      {det.coupling:g}")
    print(f"L_AA          {e.l_aa:.9e}   (err {e.err_l_aa:.1e})")
    print(f"L_BB          {e.l_bb:.9e}   (err {e.err_l_bb:.1e})")
    print(f"L_AB          {e.l_ab.real:+.9e} {e.l_ab.imag:+.9e}i   (err {e.err_l_ab:.1e})")
    print(f"M             {e.m.real:+.9e} {e.m.imag:+.9e}i   (err {e.err_m:.1e})")
    print(f"L_+ / L_-     {res.l_plus:.9e} / {res.l_minus:.9e}")
    print(f"I_AB          {res.mutual_information:.9e}   (err {res.err_mutual_information:.1e})")
    print(f"C_AB          {res.concurrence:.9e}")
    return 0


def _read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    if not parser.has_section("sweep"):
        raise ValueError(f"{path}: missing [sweep] section")
    return dict(parser.items("sweep"))


def _cmd_sweep(args) -> int:
    conf = _read_config(args.config) if args.config else {}

    def pick(flag, key, cast=str):
        if flag is not None:
            return flag
        raw = conf.get(key)
        return cast(raw) if raw is not None else None

    scenario_txt = pick(args.scenario, "scenario")
    if not scenario_txt:
        raise ValueError("sweep needs --scenario (or a config file entry)")
    scenarios = tuple(s.strip() for s in scenario_txt.split(",") if s.strip())

    a_txt = pick(args.a, "a")
    omega_txt = pick(args.omega, "omega")
    l_txt = pick(args.L, "l")  # configparser lowercases option names
    if omega_txt is None or l_txt is None:
        raise ValueError("sweep needs --omega and --L (or config entries)")
    if a_txt is None:
        if set(scenarios) != {INERTIAL}:
            raise ValueError("sweep needs --a for accelerated scenarios")
        a_txt = "0"

    state = _field_state(
        pick(args.state, "state") or "minkowski",
        pick(args.temperature, "temperature", float),
        pick(args.beta, "beta", float),
        pick(args.t_gh, "t_gh", float),
    )
    numeric = {k: pick(getattr(args, k), k, float) for k in _NUMERIC_KEYS}
    if numeric["levels"] is not None:
        numeric["levels"] = int(numeric["levels"])

    spec = SweepSpec(
        scenarios=scenarios,
        a_values=parse_values(a_txt),
        omega_values=parse_values(omega_txt),
        l_values=parse_values(l_txt),
        state=state,
        coupling=pick(args.coupling, "coupling", float) or 0.1,
        quad=_quad_spec(numeric),
        output=pick(args.out, "out"),
    )
    workers = pick(args.workers, "workers", int)
    rows = run_sweep(spec, workers=workers, wall_clock=args.wall_clock)
    bad = sum(1 for r in rows if not r.converged)
    where = spec.output or "(not written; use --out)"
    print(f"{len(rows)} rows ({bad} unconverged) -> {where}")
    return 0 if bad == 0 else 1


def _check(name: str, ok: bool, detail: str, failures: list) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}  [{detail}]")
    if not ok:
        failures.append(name)


def _cmd_verify(args) -> int:
    grid = [0.5, 2.0] if args.fast else [0.5, 1.0, 2.0]
    failures: list[str] = []
    spec = QuadratureSpec.default_2d()
    vac = FieldState.minkowski()

    # closed-form response vs 2D quadrature of its definition (includes a = 0)
    for a in [0.0] + grid:
        for om in grid:
            cfg = ScenarioConfig(INERTIAL, 0.0, 1.0) if a == 0 else ScenarioConfig("parallel", a, 1.0)
            det = DetectorParams(coupling=1.0, gap=om)
            closed = transition_probability_closed(a, om)
            quad = l_element("A", "A", cfg, det, vac, spec, method="quadrature").value.real
            rel = abs(quad - closed) / abs(closed)
            _check(f"dual-path L_jj a={a:g} omega={om:g}", rel < 1e-4, f"rel dev {rel:.2e}", failures)

    # accelerated-in-vacuum vs static-in-bath at beta = 2 pi / a
    pairs = [(1.0, 0.5)] if args.fast else [(a, om) for a in grid for om in grid]
    rows = single_detector_equivalence_report(sorted({a for a, _ in pairs}),
                                              sorted({om for _, om in pairs}), spec)
    for r in rows:
        _check(
            f"bath equivalence a={r.a:g} omega={r.omega:g}",
            r.rel_deviation < 1e-4,
            f"rel dev {r.rel_deviation:.2e}",
            failures,
        )

    # zero-temperature series structure
    s = series_in_temperature("thermal", {"dt": 0.5, "r": 0.3})
    _check("thermal series c1 = 0", abs(s.coefficients[1]) < 1e-6, f"|c1| {abs(s.coefficients[1]):.2e}", failures)
    _check("thermal series c2 = 1/12", abs(s.coefficients[2] - 1 / 12) < 1e-4,
           f"|c2-1/12| {abs(s.coefficients[2] - 1 / 12):.2e}", failures)
    s = series_in_temperature("accelerated", {"dtau": 0.8})
    _check("accelerated series c1 = 0", abs(s.coefficients[1]) < 1e-6, f"|c1| {abs(s.coefficients[1]):.2e}", failures)
    _check("accelerated series c2 = 1/12", abs(s.coefficients[2] - 1 / 12) < 1e-4,
           f"|c2-1/12| {abs(s.coefficients[2] - 1 / 12):.2e}", failures)
    s = series_in_temperature("desitter", {"dt": 0.5, "dpt": 0.3, "L": 1.0})
    _check("expanding-universe series c1 != 0", abs(s.coefficients[1]) > 1e-4,
           f"|c1| {abs(s.coefficients[1]):.2e}", failures)

    if failures:
        print(f"{len(failures)} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def _cmd_report(args) -> int:
    a_values = parse_values(args.a)
    omega_values = parse_values(args.omega)
    rows = single_detector_equivalence_report(a_values, omega_values)
    print(format_equivalence_report(rows))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("a_sigma,omega_sigma,p_accelerated,p_thermal_bath,rel_deviation\n")
            for r in rows:
                fh.write(f"{r.a!r},{r.omega!r},{r.p_accelerated!r},{r.p_thermal_bath!r},{r.rel_deviation!r}\n")
        print(f"written -> {args.out}")
    worst = max(r.rel_deviation for r in rows)
    return 0 if worst < 1e-4 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="udw-harvest",
        description="Correlations harvested by switched two-level detectors",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one configuration")
    p.add_argument("--scenario", required=True, choices=SCENARIOS)
    p.add_argument("--a", type=float, default=0.0, help="acceleration a*sigma")
    p.add_argument("--omega", type=float, required=True, help="energy gap Omega*sigma")
    p.add_argument("--L", type=float, required=True, help="separation L/sigma")
    p.add_argument("--state", default="minkowski", choices=["minkowski", "thermal", "desitter"])
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--t-gh", type=float, default=None)
    p.add_argument("--coupling", type=float, default=0.1)
    p.add_argument("--json", action="store_true")
    _add_numeric_flags(p)
    p.set_defaults(func=_cmd_point)

    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    p.add_argument("--config", default=None, help="INI file with a [sweep] section")
    p.add_argument("--scenario", default=None, help="comma-separated scenario list")
    p.add_argument("--a", default=None, help="a*sigma grid: start:stop:step or list")
    p.add_argument("--omega", default=None, help="Omega*sigma grid")
    p.add_argument("--L", default=None, help="L/sigma grid")
    p.add_argument("--state", default=None, choices=["minkowski", "thermal", "desitter"])
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--t-gh", type=float, default=None)
    p.add_argument("--coupling", type=float, default=None)
    p.add_argument("--out", default=None, help="output CSV path")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: UDW_HARVEST_WORKERS env var or cpu count)")
    p.add_argument("--wall-clock", action="store_true",
                   help="record wall times and a timestamp (breaks byte-reproducibility)")
    _add_numeric_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the numerical identity suites")
    p.add_argument("--fast", action="store_true", help="smaller grid (~4x faster)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="one-detector thermality comparison table")
    p.add_argument("--a", default="0.5,1,2")
    p.add_argument("--omega", default="0.5,1,2")
    p.add_argument("--out", default=None, help="also write the table as CSV")
    p.set_defaults(func=_cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single machine-readable error line
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
