import math

import numpy as np
import pytest

from udw_harvest.core import (
    ACCELERATED_SCENARIOS,
    ANTI_PARALLEL,
    INERTIAL,
    PARALLEL,
    PERPENDICULAR,
    SCENARIOS,
    DetectorParams,
    ScenarioConfig,
    coordinate_time,
    spatial_distance,
    switching,
    trajectory_point,
)


def test_parallel_a_at_origin():
    cfg = ScenarioConfig(PARALLEL, acceleration=1.0, separation=2.0)
    p = trajectory_point(cfg, "A", 0.0)
    assert p.t == 0.0 and p.y == 0.0 and p.z == 0.0
    assert p.x == pytest.approx(1.0, abs=1e-15)  # cosh(0)-1 = 0, so x = L/2


def test_antiparallel_b_at_origin():
    cfg = ScenarioConfig(ANTI_PARALLEL, acceleration=1.0, separation=1.0)
    p = trajectory_point(cfg, "B", 0.0)
    assert (p.t, p.x, p.y, p.z) == (0.0, -0.5, 0.0, 0.0)


def test_perpendicular_a_halfway():
    # high-precision hyperbolic values, frozen from mpmath (50 digits)
    cfg = ScenarioConfig(PERPENDICULAR, acceleration=2.0, separation=1.0)
    p = trajectory_point(cfg, "A", 0.5)
    assert p.t == pytest.approx(0.5876005968219007, abs=1e-12)   # sinh(1)/2
    assert p.y == pytest.approx(0.27154031740762186, abs=1e-12)  # (cosh(1)-1)/2
    assert p.x == 0.0 and p.z == 0.0


def test_perpendicular_b_offset():
    cfg = ScenarioConfig(PERPENDICULAR, acceleration=2.0, separation=1.5)
    p = trajectory_point(cfg, "B", 0.0)
    assert (p.t, p.x, p.y, p.z) == (0.0, 1.5, 0.0, 0.0)


def test_switching_values():
    assert switching(0.0) == 1.0
    assert switching(1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    taus = np.linspace(-4, 4, 41)
    np.testing.assert_allclose(switching(taus), switching(-taus), rtol=0, atol=0)
    assert np.all(switching(taus) > 0) and np.all(switching(taus) <= 1)


def test_coordinate_time_values():
    assert coordinate_time(ScenarioConfig(INERTIAL, 0.0, 1.0), "A", 3.0) == 3.0
    cfg = ScenarioConfig(PARALLEL, acceleration=1.0, separation=1.0)
    assert coordinate_time(cfg, "A", 0.0) == 0.0
    assert coordinate_time(cfg, "B", 1.0) == pytest.approx(1.1752011936438014, abs=1e-12)


@pytest.mark.parametrize("scenario", SCENARIOS)
@pytest.mark.parametrize("a", [0.3, 1.0, 4.0, 10.0])
def test_coordinate_time_strictly_increasing(scenario, a):
    if scenario == INERTIAL:
        cfg = ScenarioConfig(INERTIAL, 0.0, 1.0)
    else:
        cfg = ScenarioConfig(scenario, acceleration=a, separation=1.0)
    taus = np.linspace(-10, 10, 401)
    for det in ("A", "B"):
        t = coordinate_time(cfg, det, taus)
        assert np.all(np.diff(t) > 0)


def test_parallel_separation_constant():
    cfg = ScenarioConfig(PARALLEL, acceleration=1.7, separation=2.5)
    taus = np.linspace(-6, 6, 101)
    xa = trajectory_point(cfg, "A", taus)
    xb = trajectory_point(cfg, "B", taus)
    np.testing.assert_allclose(spatial_distance(xa, xb), 2.5, rtol=1e-14)


@pytest.mark.parametrize("scenario", [ANTI_PARALLEL, PERPENDICULAR])
def test_separation_at_switching_peak(scenario):
    cfg = ScenarioConfig(scenario, acceleration=2.0, separation=3.0)
    xa = trajectory_point(cfg, "A", 0.0)
    xb = trajectory_point(cfg, "B", 0.0)
    assert spatial_distance(xa, xb) == pytest.approx(3.0, abs=1e-14)


@pytest.mark.parametrize("scenario", ACCELERATED_SCENARIOS)
@pytest.mark.parametrize("detector", ["A", "B"])
def test_proper_time_normalization(scenario, detector):
    # (dt/dtau)^2 - |dx/dtau|^2 = 1 along the worldline, by finite differences
    cfg = ScenarioConfig(scenario, acceleration=1.3, separation=1.0)
    h = 1e-5
    for tau in np.linspace(-3, 3, 25):
        plus = trajectory_point(cfg, detector, tau + h)
        minus = trajectory_point(cfg, detector, tau - h)
        dt = (plus.t - minus.t) / (2 * h)
        dx = np.array([plus.x - minus.x, plus.y - minus.y, plus.z - minus.z]) / (2 * h)
        assert dt * dt - dx @ dx == pytest.approx(1.0, abs=1e-6)


def test_inertial_detectors_at_rest():
    cfg = ScenarioConfig(INERTIAL, 0.0, 2.0)
    for tau in (-3.0, 0.0, 5.0):
        assert trajectory_point(cfg, "A", tau).x == 1.0
        assert trajectory_point(cfg, "B", tau).x == -1.0
        assert trajectory_point(cfg, "A", tau).t == tau


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig("circular", 1.0, 1.0)
    with pytest.raises(ValueError):
        ScenarioConfig(PARALLEL, 0.0, 1.0)  # accelerated branch needs a > 0
    with pytest.raises(ValueError):
        ScenarioConfig(INERTIAL, 1.0, 1.0)  # inertial means a = 0
    with pytest.raises(ValueError):
        ScenarioConfig(PARALLEL, 1.0, -0.5)
    ScenarioConfig(INERTIAL, 0.0, 0.0)  # L = 0 is allowed


def test_detector_validation():
    with pytest.raises(ValueError):
        DetectorParams(coupling=-0.1)
    with pytest.raises(ValueError):
        DetectorParams(sigma=2.0)  # sigma is the unit and fixed to 1
    d = DetectorParams(coupling=0.1, gap=-1.0)  # negative gaps are legal
    assert d.gap == -1.0


def test_trajectory_rejects_unknown_detector():
    cfg = ScenarioConfig(PARALLEL, acceleration=1.0, separation=1.0)
    with pytest.raises(ValueError):
        trajectory_point(cfg, "C", 0.0)
