"""Zero-temperature expansions and the one-detector thermality identity.

series_in_temperature differentiates a correlator family numerically around
T = 0, where T is the bath temperature (thermal family), the acceleration
temperature a/2pi (accelerated family, with the worldlines moving along as
a = 2 pi T changes), or the expansion-rate temperature (desitter family).
Coefficients are extracted with central five-point stencils at steps h and
h/2 combined by Richardson extrapolation; negative T is probed through the
analytic continuation of the closed formulas, so even/odd structure is
measured, never assumed.

single_detector_equivalence_report compares the excitation probability of a
uniformly accelerated detector in the vacuum against a static detector in a
KMS bath at the matching temperature a/2pi, computed through entirely
different routes (1D closed form vs regulated 2D quadrature of the bath
correlator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import INERTIAL, DetectorParams, ScenarioConfig
from .density import l_element, transition_probability_closed
from .quadrature import ConvergenceError, QuadratureSpec
from .wightman import (
    FieldState,
    _accel_single_raw,
    _desitter_raw,
    _minkowski_dt_r,
    _parallel_cross_raw,
    _thermal_closed_raw,
    kms_beta,
)

__all__ = [
    "TemperatureSeries",
    "series_in_temperature",
    "EquivalenceRow",
    "single_detector_equivalence_report",
    "format_equivalence_report",
]

FAMILIES = ("thermal", "accelerated", "desitter")


@dataclass(frozen=True)
class TemperatureSeries:
    family: str
    coefficients: tuple[complex, ...]  # c0 .. c3 of W(T) = sum_k c_k T^k
    stability: tuple[float, ...]  # |step-halving change| per coefficient
    step: float


def _family_evaluator(family: str, point: Mapping[str, float], eps: float):
    """Return f(T) for the requested family, defined for T of either sign."""
    if family == "thermal":
        dt, r = point["dt"], point.get("r", 0.0)
        base = _minkowski_dt_r(dt, r, eps)

        def f(T):
            return base if T == 0.0 else _thermal_closed_raw(dt, r, 1.0 / T, eps)

        return f
    if family == "accelerated":
        if "dtau" in point:
            dtau = point["dtau"]
            base = _minkowski_dt_r(dtau, 0.0, eps)

            def f(T):
                if T == 0.0:
                    return base
                return _accel_single_raw(2.0 * math.pi * T, dtau, eps)

            return f
        tau_a, tau_b, L = point["tau_a"], point["tau_b"], point["L"]
        base = _minkowski_dt_r(tau_a - tau_b, L, eps)

        def f(T):
            if T == 0.0:
                return base
            return _parallel_cross_raw(2.0 * math.pi * T, L, tau_a, tau_b, eps)

        return f
    if family == "desitter":
        dt, dpt, L = point["dt"], point["dpt"], point["L"]
        base = _minkowski_dt_r(dt, L, eps)

        def f(T):
            return base if T == 0.0 else _desitter_raw(dt, dpt, L, T, eps)

        return f
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _stencil_coefficients(f, h: float) -> np.ndarray:
    """c1..c3 from central five-point stencils at step h."""
    fm2, fm1, f0, fp1, fp2 = (complex(f(t)) for t in (-2 * h, -h, 0.0, h, 2 * h))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h**3)
    return np.array([d1, d2 / 2.0, d3 / 6.0])


def series_in_temperature(family: str, point: Mapping[str, float], orders: int = 3,
                          step: float = 0.02, eps: float = 1e-10,
                          tol: float | None = None) -> TemperatureSeries:
    """Expansion coefficients of W(T) - in powers of T - around T = 0.

    point selects the (fixed) pair of events:
      thermal      {dt, r}
      accelerated  {dtau}  (one worldline)  or  {tau_a, tau_b, L}  (parallel pair)
      desitter     {dt, dpt, L}

    orders <= 3.  Raises ConvergenceError if tol is given and step halving
    moves any requested coefficient by more than it.
    """
    if not 0 <= orders <= 3:
        raise ValueError("orders must be between 0 and 3")
    f = _family_evaluator(family, point, eps)

    c0 = complex(f(0.0))
    coarse = _stencil_coefficients(f, step)
    fine = _stencil_coefficients(f, 0.5 * step)
    # the five-point first/second derivative stencils are O(h^4), the third
    # derivative one is O(h^2)
    order_of = np.array([4, 4, 2])
    richardson = (2.0**order_of * fine - coarse) / (2.0**order_of - 1.0)
    stability = np.abs(fine - coarse)

    coeffs = (c0, *richardson)[: orders + 1]
    stabs = (0.0, *stability)[: orders + 1]
    if tol is not None and max(stabs) > tol:
        raise ConvergenceError(
            f"temperature series unstable under step halving: max change "
            f"{max(stabs):.3e} > {tol:.3e}"
        )
    return TemperatureSeries(family, tuple(coeffs), tuple(float(s) for s in stabs), step)


@dataclass(frozen=True)
class EquivalenceRow:
    a: float
    omega: float
    p_accelerated: float
    p_thermal_bath: float
    rel_deviation: float


def single_detector_equivalence_report(a_values, omega_values,
                                       spec: QuadratureSpec | None = None) -> list[EquivalenceRow]:
    """Accelerated-in-vacuum vs static-in-bath excitation probabilities.

    For every (a, Omega) pair the bath route puts a detector at rest in the
    KMS state at beta = 2 pi / a and integrates the regulated bath correlator
    in 2D; the vacuum route is the hyperbolic closed form.  Coupling is 1.
    """
    spec = spec or QuadratureSpec.default_2d()
    a_values = [float(a) for a in np.atleast_1d(a_values)]
    omega_values = [float(om) for om in np.atleast_1d(omega_values)]
    cfg = ScenarioConfig(INERTIAL, 0.0, 0.0)
    rows = []
    for a in a_values:
        if a <= 0:
            raise ValueError("equivalence report needs a > 0")
        state = FieldState.thermal(beta=kms_beta(a))
        for om in omega_values:
            det = DetectorParams(coupling=1.0, gap=om)
            p_acc = transition_probability_closed(a, om)
            p_th = l_element("A", "A", cfg, det, state, spec).value.real
            rows.append(
                EquivalenceRow(a, om, p_acc, p_th, abs(p_th - p_acc) / abs(p_acc))
            )
    return rows


def format_equivalence_report(rows: list[EquivalenceRow]) -> str:
    """Plain-text table of the equivalence comparison."""
    lines = [
        f"{'a*sigma':>10} {'Omega*sigma':>12} {'P_accelerated':>16} "
        f"{'P_thermal_bath':>16} {'rel_deviation':>14}"
    ]
    for r in rows:
        lines.append(
            f"{r.a:>10.4g} {r.omega:>12.4g} {r.p_accelerated:>16.9e} "
            f"{r.p_thermal_bath:>16.9e} {r.rel_deviation:>14.3e}"
        )
    return "\n".join(lines)
