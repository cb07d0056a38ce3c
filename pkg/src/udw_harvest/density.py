"""Second-order density-matrix elements of the detector pair.

The joint state of the two detectors after the interaction is, to second
order in the coupling, the X-shaped matrix in the basis {gg, ge, eg, ee}

        [ 1 - L_AA - L_BB   0        0       M*  ]
        [ 0                 L_BB     L_AB*   0   ]
        [ 0                 L_AB     L_AA    0   ]
        [ M                 0        0       0   ]

with

  L_ij = lam^2 iint dtau dtau' chi(tau) chi(tau') e^{-i Omega (tau - tau')}
                               W(x_i(tau), x_j(tau'))
  M    = -lam^2 iint_{u > v} du dv chi(u) chi(v) e^{+i Omega (u + v)}
                               [ W(x_A(u), x_B(v)) + W(x_B(u), x_A(v)) ]

where the ordered form of M uses the fact that all worldlines here share one
strictly increasing coordinate-time map, so Minkowski-time ordering equals
proper-time ordering and the step function becomes a triangular domain
(never a discontinuous factor inside the integrand).

For a uniformly accelerated detector in the vacuum the diagonal element has
the closed form

  L_jj = lam^2/4pi [ e^{-Omega^2} - sqrt(pi) Omega erfc(Omega) ]
       + lam^2 a / (4 pi^{3/2}) int_0^inf ds cos(2 Omega s / a) e^{-s^2/a^2}
                                 (sinh^2 s - s^2) / (s^2 sinh^2 s)

(the first term alone at a = 0), which serves as the fast path; the 2D
quadrature of the definition is kept as its cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .core import INERTIAL, PARALLEL, DetectorParams, ScenarioConfig, switching
from .quadrature import (
    ConvergenceError,
    IntegralResult,
    QuadratureSpec,
    RegulatorPolicy,
    extrapolate_epsilon,
    extrapolation_noise_weights,
    integrate_1d_semiinfinite,
    integrate_2d,
    integrate_2d_triangle,
)
from .wightman import (
    DESITTER,
    MINKOWSKI,
    THERMAL,
    FieldState,
    thermal_kernel_closed,
    wightman_accel_single,
    wightman_cross,
)

__all__ = [
    "ElementResult",
    "MatrixElements",
    "transition_probability_closed",
    "l_element",
    "m_element",
    "assemble_rho",
]


@dataclass(frozen=True)
class ElementResult:
    """One matrix element with its numerical error budget."""

    value: complex
    error: float
    neval: int
    converged: bool


@dataclass(frozen=True)
class MatrixElements:
    """The four second-order elements (already including the lam^2 factor)."""

    l_aa: float
    l_bb: float
    l_ab: complex
    m: complex
    err_l_aa: float = 0.0
    err_l_bb: float = 0.0
    err_l_ab: float = 0.0
    err_m: float = 0.0

    def __post_init__(self):
        tiny = 1e-15 * (1.0 + abs(self.l_aa) + abs(self.l_bb))
        if self.l_aa < -(self.err_l_aa + tiny) or self.l_bb < -(self.err_l_bb + tiny):
            raise ValueError("transition probabilities must be nonnegative within error bars")

    def cauchy_schwarz_margin(self) -> float:
        """L_AA L_BB - |L_AB|^2; should be >= -(combined error)."""
        return self.l_aa * self.l_bb - abs(self.l_ab) ** 2

    def combined_cs_error(self) -> float:
        return (
            self.err_l_aa * abs(self.l_bb)
            + self.err_l_bb * abs(self.l_aa)
            + 2.0 * abs(self.l_ab) * self.err_l_ab
            + 1e-15 * (1.0 + abs(self.l_aa * self.l_bb))
        )


def _rational_sinh_factor(s):
    """(sinh^2 s - s^2) / (s^2 sinh^2 s) = 1/s^2 - 1/sinh^2 s, stable at 0."""
    s = np.asarray(s, dtype=float)
    small = np.abs(s) < 0.01
    ss = np.where(small, 1.0, s)
    direct = 1.0 / ss**2 - 1.0 / np.sinh(ss) ** 2
    s2 = s * s
    series = 1.0 / 3.0 - s2 / 15.0 + 2.0 * s2 * s2 / 189.0
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def _closed_l_jj(a: float, omega: float, spec: QuadratureSpec | None = None) -> ElementResult:
    """Closed-form transition probability per unit lam^2."""
    first = (math.exp(-(omega**2)) - math.sqrt(math.pi) * omega * erfc(omega)) / (4.0 * math.pi)
    if a == 0.0:
        return ElementResult(first, 5e-16 * abs(first) + 1e-18, 0, True)

    spec = spec or QuadratureSpec.default_1d()
    beta_osc = 2.0 * omega / a
    alpha = 1.0 / (a * a)

    def integrand(s):
        return math.cos(beta_osc * s) * math.exp(-alpha * s * s) * _rational_sinh_factor(s)

    def tail(s):
        return math.exp(-alpha * s * s) / (3.0 * 2.0 * alpha * s)

    res = integrate_1d_semiinfinite(integrand, spec, tail_bound=tail)
    pref = a / (4.0 * math.pi**1.5)
    value = first + pref * res.value
    return ElementResult(value, pref * res.error + 5e-16 * abs(value), res.neval, res.converged)


def transition_probability_closed(a: float, omega: float, coupling: float = 1.0,
                                  spec: QuadratureSpec | None = None) -> float:
    """Excitation probability of one detector (inertial a = 0 or accelerated)."""
    if a < 0:
        raise ValueError("acceleration must be >= 0")
    res = _closed_l_jj(a, omega, spec)
    if not res.converged:
        raise ConvergenceError("transition-probability integral did not converge")
    return coupling**2 * res.value.real


def _state_pair_kernel(cfg: ScenarioConfig, state: FieldState, pair: str, eps: float):
    """Integrand factory: the pulled-back correlator for one (i, j) pair.

    pair is one of 'AA', 'AB', 'BA' ('BB' reduces to 'AA' because both
    worldlines have identical intrinsic kinematics in every scenario here).
    """
    if state.kind == MINKOWSKI:
        if pair in ("AA", "BB"):
            if cfg.scenario == INERTIAL:
                return lambda t, tp: wightman_cross(
                    ScenarioConfig(INERTIAL, 0.0, 0.0), t, tp, eps
                )
            a = cfg.acceleration
            return lambda t, tp: wightman_accel_single(a, t - tp, eps)
        if pair == "AB":
            return lambda t, tp: wightman_cross(cfg, t, tp, eps)
        return lambda t, tp: np.conj(wightman_cross(cfg, tp, t, eps))
    if state.kind == THERMAL:
        if cfg.scenario != INERTIAL:
            raise ValueError(
                "the KMS correlator is implemented for detectors at rest; "
                "accelerated detectors in a thermal bath are out of scope"
            )
        beta = state.beta
        r = 0.0 if pair in ("AA", "BB") else cfg.separation
        return lambda t, tp: thermal_kernel_closed(t - tp, r, beta, eps)
    if state.kind == DESITTER:
        raise NotImplementedError(
            "two-detector response in the expanding universe is out of scope; "
            "use the correlator-level tools in the thermality module"
        )
    raise ValueError(f"unknown field state {state.kind!r}")


def _extrapolated(integrals, policy: RegulatorPolicy, context: str) -> ElementResult:
    """Run one integral per regulator level and extrapolate to eps = 0."""
    eps_levels = policy.eps_levels()
    values, errors, neval = [], [], 0
    for eps in eps_levels:
        res = integrals(float(eps))
        if not res.converged:
            raise ConvergenceError(
                f"{context}: quadrature did not converge at eps={eps:.4g} "
                f"(error estimate {res.error:.3e} after {res.neval} evaluations)"
            )
        values.append((float(eps), res.value))
        errors.append(res.error)
        neval += res.neval
    ex = extrapolate_epsilon(values, policy.order)
    weights = extrapolation_noise_weights(eps_levels, policy.order)
    noise = float(np.dot(weights, np.asarray(errors)[-weights.size:]))
    return ElementResult(ex.value, ex.stability + noise, neval, True)


def _shearable(cfg: ScenarioConfig, pair: str) -> bool:
    """Whether to integrate in the sheared variables (u, v) = (tau - tau', tau').

    The diagonal pairs are stationary (the correlator depends on u only) and
    the parallel/inertial cross correlators have their light-cone ridges
    hugging the diagonal, so the shear turns both into axis-aligned features
    the directional refinement resolves cheaply.  The anti-parallel and
    perpendicular ridges asymptote to constant-tau lines instead, which are
    already axis-aligned in the original variables.
    """
    return pair in ("AA", "BB") or cfg.scenario in (PARALLEL, INERTIAL)


def l_element(i: str, j: str, cfg: ScenarioConfig, det: DetectorParams, state: FieldState,
              spec: QuadratureSpec | None = None, method: str = "auto") -> ElementResult:
    """Matrix element L_ij for detectors i, j in {'A', 'B'}.

    method 'auto' takes the closed form for the diagonal vacuum elements and
    the 2D regulated quadrature otherwise; 'quadrature' forces the 2D route
    (the dual-path cross-check), 'closed' demands the fast path.
    """
    if i not in ("A", "B") or j not in ("A", "B"):
        raise ValueError("detector labels must be 'A' or 'B'")
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    spec = spec or QuadratureSpec.default_2d()
    lam2 = det.coupling**2
    omega = det.gap
    pair = i + j

    closed_ok = pair in ("AA", "BB") and state.kind == MINKOWSKI
    if method == "closed" and not closed_ok:
        raise ValueError("no closed form for this element; use the quadrature route")
    if closed_ok and method in ("auto", "closed"):
        res = _closed_l_jj(cfg.acceleration, omega, QuadratureSpec.default_1d())
        return ElementResult(lam2 * res.value, lam2 * res.error, res.neval, res.converged)

    T = spec.t_max
    shear = _shearable(cfg, pair)

    def run(eps: float) -> IntegralResult:
        w = _state_pair_kernel(cfg, state, pair, eps)

        if shear:

            def f(u, v):  # tau = u + v, tau' = v
                return switching(u + v) * switching(v) * np.exp(-1j * omega * u) * w(u + v, v)

            return integrate_2d(f, spec, bounds=(-2 * T, 2 * T, -T, T))

        def f(t, tp):
            return switching(t) * switching(tp) * np.exp(-1j * omega * (t - tp)) * w(t, tp)

        return integrate_2d(f, spec)

    res = _extrapolated(run, spec.regulator, f"L_{pair}")
    return ElementResult(lam2 * res.value, lam2 * res.error, res.neval, res.converged)


def m_element(cfg: ScenarioConfig, det: DetectorParams, state: FieldState,
              spec: QuadratureSpec | None = None) -> ElementResult:
    """Time-ordered element M, with the ordering realized as a domain.

    In the sheared variables the ordered region tau_A > tau_B is simply the
    half-plane u > 0, so no step function ever enters an integrand; the
    unsheared scenarios integrate over the triangle directly.
    """
    spec = spec or QuadratureSpec.default_2d()
    lam2 = det.coupling**2
    omega = det.gap
    T = spec.t_max
    shear = _shearable(cfg, "AB")

    def run(eps: float) -> IntegralResult:
        w_ab = _state_pair_kernel(cfg, state, "AB", eps)
        w_ba = _state_pair_kernel(cfg, state, "BA", eps)

        if shear:

            def f(u, v):  # later time tau_A = u + v, earlier tau_B = v
                phase = np.exp(1j * omega * (u + 2 * v))
                both = w_ab(u + v, v) + w_ba(u + v, v)
                return switching(u + v) * switching(v) * phase * both

            return integrate_2d(f, spec, bounds=(0.0, 2 * T, -T, T))

        def f(u, v):
            phase = np.exp(1j * omega * (u + v))
            return switching(u) * switching(v) * phase * (w_ab(u, v) + w_ba(u, v))

        return integrate_2d_triangle(f, spec)

    res = _extrapolated(run, spec.regulator, "M")
    return ElementResult(-lam2 * res.value, lam2 * res.error, res.neval, res.converged)


def assemble_rho(e: MatrixElements) -> np.ndarray:
    """Assemble the 4x4 X-shaped state in the basis {gg, ge, eg, ee}."""
    for name, v in (("L_AA", e.l_aa), ("L_BB", e.l_bb), ("L_AB", e.l_ab), ("M", e.m)):
        if not np.all(np.isfinite([np.real(v), np.imag(v)])):
            raise ValueError(f"{name} is not finite")
    if e.l_aa + e.l_bb >= 1.0:
        raise ValueError(
            "L_AA + L_BB >= 1: outside the perturbative regime (reduce the coupling)"
        )
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0 - e.l_aa - e.l_bb
    rho[1, 1] = e.l_bb
    rho[2, 2] = e.l_aa
    rho[2, 1] = e.l_ab
    rho[1, 2] = np.conj(e.l_ab)
    rho[3, 0] = e.m
    rho[0, 3] = np.conj(e.m)
    return rho
