"""Two-point field correlators along the detector worldlines.

All correlators are regulated by a finite imaginary time shift eps and are
meant to be driven to eps -> 0 by polynomial extrapolation (see
quadrature.extrapolate_epsilon); none of them is evaluated as a distribution.

Closed forms implemented here, in units of sigma (c = hbar = k_B = 1):

  vacuum          W(x, x') = -1/4pi^2 * 1/[(dt - i eps)^2 - r^2]
  one accelerated worldline, proper-time gap dtau:
                  W_a = -a^2/16pi^2 / sinh^2(a dtau / 2 - i eps)
  two parallel worldlines:
                  W_a = -a^2/4pi^2 / { [sinh(a tA) - sinh(a tB) - i a eps]^2
                                       - [cosh(a tA) - cosh(a tB) + a L]^2 }
  thermal bath at inverse temperature beta, realized as the imaginary-time
  image sum  sum_n W(dt + i n beta, r)  (truncated form plus a closed
  all-orders resummation used as the fast kernel), and
  an expanding conformally flat universe at Gibbons-Hawking temperature T:
                  W = -1/4pi^2 / [ sinh^2(pi T dt - i eps)/(pi T)^2
                                   - e^{2 pi T (t+t')} L^2 ]

The parallel two-detector form uses the regulator a*eps so that it agrees
with the generic vacuum pullback at equal eps, not merely in the eps -> 0
limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ANTI_PARALLEL,
    INERTIAL,
    PARALLEL,
    PERPENDICULAR,
    ScenarioConfig,
    SpacetimePoint,
    spatial_distance,
    trajectory_point,
)
from .quadrature import (
    ConvergenceError,
    IntegralResult,
    QuadratureSpec,
    RegulatorPolicy,
    integrate_1d_semiinfinite,
)

__all__ = [
    "FieldState",
    "RegulatorPolicy",
    "ThermalImageSum",
    "unruh_temperature",
    "kms_beta",
    "wightman_minkowski",
    "wightman_accel_single",
    "wightman_cross",
    "wightman_thermal",
    "thermal_kernel_closed",
    "wightman_thermal_integral",
    "wightman_desitter",
]

_PREF = 1.0 / (4.0 * math.pi**2)

MINKOWSKI = "minkowski"
THERMAL = "thermal"
DESITTER = "desitter"


@dataclass(frozen=True)
class FieldState:
    """Field state: vacuum, KMS bath at inverse temperature beta, or the
    conformal vacuum of an expanding universe at Gibbons-Hawking temperature
    t_gh (expansion rate kappa = 2 pi t_gh)."""

    kind: str = MINKOWSKI
    beta: float | None = None
    t_gh: float | None = None

    def __post_init__(self):
        if self.kind not in (MINKOWSKI, THERMAL, DESITTER):
            raise ValueError(f"unknown field state {self.kind!r}")
        if self.kind == THERMAL:
            if self.beta is None or self.beta <= 0:
                raise ValueError("thermal state requires beta > 0")
        if self.kind == DESITTER:
            if self.t_gh is None or self.t_gh < 0:
                raise ValueError("expanding-universe state requires t_gh >= 0")

    @classmethod
    def minkowski(cls) -> "FieldState":
        return cls(MINKOWSKI)

    @classmethod
    def thermal(cls, beta: float | None = None, temperature: float | None = None) -> "FieldState":
        if (beta is None) == (temperature is None):
            raise ValueError("give exactly one of beta or temperature")
        if beta is None:
            if temperature <= 0:
                raise ValueError("temperature must be > 0")
            beta = 1.0 / temperature
        return cls(THERMAL, beta=beta)

    @classmethod
    def desitter(cls, t_gh: float) -> "FieldState":
        return cls(DESITTER, t_gh=t_gh)

    @property
    def temperature(self) -> float:
        if self.kind == THERMAL:
            return 1.0 / self.beta
        if self.kind == DESITTER:
            return self.t_gh
        return 0.0


def unruh_temperature(a: float) -> float:
    """Temperature a/2pi perceived by a detector at proper acceleration a."""
    return a / (2.0 * math.pi)


def kms_beta(a: float) -> float:
    """Inverse temperature 2pi/a of the bath matching acceleration a."""
    if a <= 0:
        raise ValueError("acceleration must be > 0")
    return 2.0 * math.pi / a


def _check_eps(eps: float):
    if eps <= 0:
        raise ValueError("regulator eps must be > 0")


def wightman_minkowski(x: SpacetimePoint, xp: SpacetimePoint, eps: float):
    """Vacuum correlator between two events (broadcasts over array fields)."""
    _check_eps(eps)
    dt = np.asarray(x.t) - np.asarray(xp.t)
    r2 = (
        (np.asarray(x.x) - np.asarray(xp.x)) ** 2
        + (np.asarray(x.y) - np.asarray(xp.y)) ** 2
        + (np.asarray(x.z) - np.asarray(xp.z)) ** 2
    )
    return -_PREF / ((dt - 1j * eps) ** 2 - r2)


def _minkowski_dt_r(dt, r, eps: float):
    """Vacuum correlator as a function of time difference and distance."""
    dt = np.asarray(dt, dtype=float)
    return -_PREF / ((dt - 1j * eps) ** 2 - np.asarray(r) ** 2)


def _accel_single_raw(a: float, dtau, eps: float):
    arg = 0.5 * a * np.asarray(dtau, dtype=float) - 1j * eps
    return -(a * a) * _PREF / 4.0 / np.sinh(arg) ** 2


def wightman_accel_single(a: float, dtau, eps: float):
    """Correlator between two proper times on one uniformly accelerated line."""
    _check_eps(eps)
    if a <= 0:
        raise ValueError("acceleration must be > 0 (inertial limit handled separately)")
    return _accel_single_raw(a, dtau, eps)


def _parallel_cross_raw(a: float, L: float, tau_a, tau_b, eps: float):
    ta = a * np.asarray(tau_a, dtype=float)
    tb = a * np.asarray(tau_b, dtype=float)
    time_part = np.sinh(ta) - np.sinh(tb) - 1j * (a * eps)
    space_part = np.cosh(ta) - np.cosh(tb) + a * L
    return -(a * a) * _PREF / (time_part**2 - space_part**2)


def wightman_cross(cfg: ScenarioConfig, tau_a, tau_b, eps: float):
    """Correlator W(x_A(tau_a), x_B(tau_b)) for the configured pair.

    Parallel pairs use the hyperbolic closed form (with regulator a*eps so it
    matches the generic pullback identically at finite eps); the other
    scenarios substitute the worldlines into the vacuum correlator.
    """
    _check_eps(eps)
    if cfg.scenario == PARALLEL:
        return _parallel_cross_raw(cfg.acceleration, cfg.separation, tau_a, tau_b, eps)
    if cfg.scenario == INERTIAL:
        dt = np.asarray(tau_a, dtype=float) - np.asarray(tau_b, dtype=float)
        return _minkowski_dt_r(dt, cfg.separation, eps)
    xa = trajectory_point(cfg, "A", tau_a)
    xb = trajectory_point(cfg, "B", tau_b)
    return wightman_minkowski(xa, xb, eps)


# ---------------------------------------------------------------------------
# thermal (KMS) state
# ---------------------------------------------------------------------------


@dataclass
class ThermalImageSum:
    value: complex
    tail_bound: float
    n_images: int


def _image_tail_bound(n_images: int, beta: float, abs_z: float, r: float) -> float:
    """Bound on the modulus of the dropped |n| > n_images image terms.

    |(z + i n beta)^2 - r^2| >= (n beta - |z| - r)^2 once n beta > |z| + r,
    so the tail is dominated by 2 sum_{n>N} 1/(n beta - c)^2 with c = |z| + r,
    bounded in turn by the first term plus the integral.
    """
    w0 = beta * (n_images + 1) - abs_z - r
    if w0 <= 0:
        return math.inf
    return 2.0 * _PREF * (1.0 / (w0 * w0) + 1.0 / (beta * w0))


def thermal_image_sum(dt, r: float, beta: float, eps: float, n_images: int,
                      tol: float | None = None) -> ThermalImageSum:
    """Truncated imaginary-time image sum for the KMS correlator.

    Returns the partial sum over images |n| <= n_images together with a bound
    on the dropped tail; raises ConvergenceError if the bound exceeds tol.
    """
    _check_eps(eps)
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if n_images < 1:
        raise ValueError("need at least one image on each side")
    dt = np.asarray(dt, dtype=float)
    r = float(r)

    z = dt - 1j * eps
    n = np.arange(-n_images, n_images + 1)
    # chunk over images to keep the broadcast buffer modest
    total = np.zeros_like(z)
    step = max(1, int(4e6 / max(1, dt.size)))
    for lo in range(0, n.size, step):
        nn = n[lo : lo + step]
        shifted = z[..., None] + 1j * beta * nn
        total = total + (-_PREF / (shifted**2 - r * r)).sum(axis=-1)

    abs_z = float(np.max(np.abs(z)))
    bound = _image_tail_bound(n_images, beta, abs_z, r)
    if tol is not None and bound > tol:
        raise ConvergenceError(
            f"image sum tail bound {bound:.3e} exceeds tolerance {tol:.3e} "
            f"at n_images={n_images}"
        )
    value = total if total.ndim else complex(total)
    return ThermalImageSum(value, bound, n_images)


def wightman_thermal(x: SpacetimePoint, xp: SpacetimePoint, beta: float, eps: float,
                     n_images: int = 64, tol: float | None = None) -> ThermalImageSum:
    """KMS correlator between two events via the truncated image sum."""
    dt = np.asarray(x.t) - np.asarray(xp.t)
    dist = np.asarray(spatial_distance(x, xp))
    if dist.ndim and np.ptp(dist) > 1e-14:
        raise ValueError("array inputs must share one spatial separation")
    return thermal_image_sum(dt, float(np.max(dist)), beta, eps, n_images, tol)


_SINH_CLAMP = 300.0  # sinh overflows near 710; the correlator is ~0 long before


def _inv_sinh_sq(arg):
    """1 / sinh^2(arg) with the huge-|Re| region flushed to zero."""
    arg = np.asarray(arg, dtype=complex)
    big = np.abs(arg.real) > _SINH_CLAMP
    safe = np.where(big, 1.0, arg)
    out = 1.0 / np.sinh(safe) ** 2
    return np.where(big, 0.0, out)


def _thermal_closed_raw(dt, r: float, beta: float, eps: float):
    dt = np.asarray(dt, dtype=float)
    z = dt - 1j * eps
    w = math.pi / beta
    if r < 1e-8:
        return -1.0 / (4.0 * beta * beta) * _inv_sinh_sq(w * z)
    am, ap = w * (z - r), w * (z + r)
    # tanh is overflow-safe; its zeros sit on the regulated image light cones
    coth = lambda u: 1.0 / np.tanh(u)
    return -_PREF * (w / (2.0 * r)) * (coth(am) - coth(ap))


def thermal_kernel_closed(dt, r: float, beta: float, eps: float):
    """KMS correlator with the image sum carried out in closed form.

    The partial-fraction resummation gives, with z = dt - i eps and w = pi/beta,

        r = 0:   -1/(4 beta^2) / sinh^2(w z)
        r > 0:   -1/(4 pi^2) * (w / 2r) * [coth(w (z - r)) - coth(w (z + r))]

    This is the fast kernel used inside response integrals; the truncated
    image sum above and the momentum-space integral below cross-check it.
    """
    _check_eps(eps)
    if beta <= 0:
        raise ValueError("beta must be > 0")
    return _thermal_closed_raw(dt, r, beta, eps)


def wightman_thermal_integral(dt: float, r: float, beta: float,
                              spec: QuadratureSpec | None = None) -> IntegralResult:
    """Thermal part W_beta as the radial momentum integral (real oracle).

    After the angular integration the planckian 3D integral collapses to

        W_beta(dt, r) = 1/(2 pi^2) * int_0^inf dk k sinc(k r) cos(k dt)
                                      / (e^{beta k} - 1),

    which is used only to validate the image-sum realizations.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    spec = spec or QuadratureSpec.default_1d()
    pref = 1.0 / (2.0 * math.pi**2)

    def integrand(k):
        if k <= 0:
            return pref / beta
        if beta * k > 700.0:  # planckian factor underflows; avoid expm1 overflow
            return 0.0
        osc = np.cos(k * dt) if r == 0.0 else np.sinc(k * r / math.pi) * np.cos(k * dt)
        return pref * k * osc / np.expm1(beta * k)

    def tail(s):
        # |integrand| <= pref * k e^{-beta k} / (1 - e^{-beta s}) beyond s
        damp = 1.0 - math.exp(-beta * s)
        return pref * math.exp(-beta * s) * (s / beta + 1.0 / beta**2) / damp

    return integrate_1d_semiinfinite(integrand, spec, tail_bound=tail)


# ---------------------------------------------------------------------------
# expanding universe (conformal vacuum)
# ---------------------------------------------------------------------------


def _desitter_raw(dt, dpt, L: float, t_gh: float, eps: float):
    dt = np.asarray(dt, dtype=float)
    dpt = np.asarray(dpt, dtype=float)
    w = math.pi * t_gh
    denom = np.sinh(w * dt - 1j * eps) ** 2 / (w * w) - np.exp(2.0 * w * dpt) * L * L
    return -_PREF / denom


def wightman_desitter(dt, dpt, L: float, t_gh: float, eps: float):
    """Conformal-vacuum correlator of an exponentially expanding universe.

    dt = t - t', dpt = t + t', L the comoving coordinate separation.  Only
    the sinh^2 argument carries the regulator, matching the printed form;
    t_gh = 0 falls back to the flat-space correlator.
    """
    _check_eps(eps)
    if t_gh < 0:
        raise ValueError("t_gh must be >= 0")
    if t_gh == 0.0:
        return _minkowski_dt_r(dt, L, eps)
    return _desitter_raw(dt, dpt, L, t_gh, eps)
