"""Correlation harvesting by inertial and uniformly accelerated detectors.

Numerical toolkit for the joint state of two switched two-level detectors
coupled to a massless scalar field: regulated two-point correlators on the
relevant worldlines, the second-order density-matrix elements, the mutual
information and concurrence they source, zero-temperature expansions, and a
reproducible parameter-sweep CLI.
"""

__version__ = "0.1.0"

from .core import (
    ANTI_PARALLEL,
    INERTIAL,
    PARALLEL,
    PERPENDICULAR,
    SCENARIOS,
    DetectorParams,
    ScenarioConfig,
    SpacetimePoint,
    coordinate_time,
    switching,
    trajectory_point,
)
from .correlations import (
    HarvestResult,
    concurrence,
    harvest_point,
    l_plus_minus,
    mutual_information,
)
from .density import (
    ElementResult,
    MatrixElements,
    assemble_rho,
    l_element,
    m_element,
    transition_probability_closed,
)
from .quadrature import (
    ConvergenceError,
    IntegralResult,
    QuadratureSpec,
    RegulatorPolicy,
    extrapolate_epsilon,
    integrate_1d_semiinfinite,
    integrate_2d,
)
from .sweep import ResultRow, SweepSpec, read_result_csv, run_sweep, write_result_csv
from .thermality import (
    EquivalenceRow,
    TemperatureSeries,
    series_in_temperature,
    single_detector_equivalence_report,
)
from .wightman import (
    FieldState,
    kms_beta,
    unruh_temperature,
    wightman_accel_single,
    wightman_cross,
    wightman_desitter,
    wightman_minkowski,
    wightman_thermal,
    wightman_thermal_integral,
)

__all__ = [
    "__version__",
    "ANTI_PARALLEL",
    "INERTIAL",
    "PARALLEL",
    "PERPENDICULAR",
    "SCENARIOS",
    "DetectorParams",
    "ScenarioConfig",
    "SpacetimePoint",
    "coordinate_time",
    "switching",
    "trajectory_point",
    "HarvestResult",
    "concurrence",
    "harvest_point",
    "l_plus_minus",
    "mutual_information",
    "ElementResult",
    "MatrixElements",
    "assemble_rho",
    "l_element",
    "m_element",
    "transition_probability_closed",
    "ConvergenceError",
    "IntegralResult",
    "QuadratureSpec",
    "RegulatorPolicy",
    "extrapolate_epsilon",
    "integrate_1d_semiinfinite",
    "integrate_2d",
    "ResultRow",
    "SweepSpec",
    "read_result_csv",
    "run_sweep",
    "write_result_csv",
    "EquivalenceRow",
    "TemperatureSeries",
    "series_in_temperature",
    "single_detector_equivalence_report",
    "FieldState",
    "kms_beta",
    "unruh_temperature",
    "wightman_accel_single",
    "wightman_cross",
    "wightman_desitter",
    "wightman_minkowski",
    "wightman_thermal",
    "wightman_thermal_integral",
]
