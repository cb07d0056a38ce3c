"""Detector parameterization, worldlines and the Gaussian switching window.

Everything is expressed in units of the switching width sigma: accelerations
enter as a*sigma, energy gaps as Omega*sigma, times as tau/sigma.  sigma is
therefore fixed to 1 internally and is not a tunable runtime parameter.

Trajectory conventions (two detectors A and B, one acceleration a, one
coordinate separation L):

  inertial        A, B at rest at x = +L/2 and x = -L/2, t = tau
  parallel        both accelerate along +x,
                  x_j = [cosh(a tau)-1]/a +- L/2,  t = sinh(a tau)/a
  anti-parallel   A as above with +L/2, B mirrored:
                  x_B = -[cosh(a tau)-1]/a - L/2
  perpendicular   A accelerates along y from the origin,
                  B along x starting at x = +L

In all cases the detectors are separated by L at tau = 0 (for the parallel
pair, at every equal tau) and share the same coordinate-time map t(tau),
which is strictly increasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INERTIAL = "inertial"
PARALLEL = "parallel"
ANTI_PARALLEL = "anti-parallel"
PERPENDICULAR = "perpendicular"

SCENARIOS = (INERTIAL, PARALLEL, ANTI_PARALLEL, PERPENDICULAR)
ACCELERATED_SCENARIOS = (PARALLEL, ANTI_PARALLEL, PERPENDICULAR)

DETECTORS = ("A", "B")


@dataclass(frozen=True)
class DetectorParams:
    """Coupling strength, energy gap (times sigma) and the unit switching width."""

    coupling: float = 0.1
    gap: float = 0.5
    sigma: float = 1.0

    def __post_init__(self):
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.sigma != 1.0:
            raise ValueError(
                "sigma is the unit of time/length and is fixed to 1; "
                "rescale a*sigma, Omega*sigma, L/sigma instead"
            )


@dataclass(frozen=True)
class ScenarioConfig:
    """Trajectory family plus the dimensionless acceleration and separation."""

    scenario: str
    acceleration: float = 0.0
    separation: float = 1.0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.separation < 0:
            raise ValueError("separation L/sigma must be >= 0")
        if self.scenario == INERTIAL:
            if self.acceleration != 0.0:
                raise ValueError("inertial scenario requires acceleration = 0")
        else:
            # The accelerated closed forms are singular at a = 0; the a -> 0
            # limit is the inertial branch, which must be requested explicitly.
            if self.acceleration <= 0.0:
                raise ValueError(
                    f"scenario {self.scenario!r} requires acceleration > 0 "
                    "(use the inertial scenario for a = 0)"
                )

    @property
    def accelerated(self) -> bool:
        return self.scenario != INERTIAL


@dataclass(frozen=True)
class SpacetimePoint:
    """Minkowski coordinates (t, x, y, z) in units of sigma.

    Fields may be scalars or equal-shaped numpy arrays; the two-point
    functions broadcast over them.
    """

    t: float | np.ndarray
    x: float | np.ndarray
    y: float | np.ndarray
    z: float | np.ndarray


def switching(tau):
    """Gaussian window exp(-tau^2 / 2 sigma^2) with sigma = 1."""
    tau = np.asarray(tau, dtype=float)
    out = np.exp(-0.5 * tau * tau)
    return out if out.ndim else float(out)


def trajectory_txyz(cfg: ScenarioConfig, detector: str, tau):
    """Vectorized worldline evaluation; returns (t, x, y, z) arrays."""
    if detector not in DETECTORS:
        raise ValueError(f"detector must be 'A' or 'B', got {detector!r}")
    tau = np.asarray(tau, dtype=float)
    L = cfg.separation
    zero = np.zeros_like(tau)

    if cfg.scenario == INERTIAL:
        sign = 1.0 if detector == "A" else -1.0
        return tau, zero + sign * L / 2, zero, zero

    a = cfg.acceleration
    t = np.sinh(a * tau) / a
    hyp = (np.cosh(a * tau) - 1.0) / a

    if cfg.scenario == PARALLEL:
        sign = 1.0 if detector == "A" else -1.0
        return t, hyp + sign * L / 2, zero, zero
    if cfg.scenario == ANTI_PARALLEL:
        if detector == "A":
            return t, hyp + L / 2, zero, zero
        return t, -hyp - L / 2, zero, zero
    # perpendicular: A along y with no offset, B along x offset by +L
    if detector == "A":
        return t, zero, hyp, zero
    return t, hyp + L, zero, zero


def trajectory_point(cfg: ScenarioConfig, detector: str, tau) -> SpacetimePoint:
    """Worldline event of the given detector at proper time tau."""
    t, x, y, z = trajectory_txyz(cfg, detector, tau)
    return SpacetimePoint(t=t, x=x, y=y, z=z)


def coordinate_time(cfg: ScenarioConfig, detector: str, tau):
    """Minkowski time t(tau); strictly increasing for every scenario."""
    if cfg.scenario == INERTIAL:
        return np.asarray(tau, dtype=float) + 0.0
    if detector not in DETECTORS:
        raise ValueError(f"detector must be 'A' or 'B', got {detector!r}")
    a = cfg.acceleration
    return np.sinh(a * np.asarray(tau, dtype=float)) / a


def spatial_distance(p: SpacetimePoint, q: SpacetimePoint):
    """Euclidean distance between the spatial parts of two events."""
    return np.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.z - q.z) ** 2)
