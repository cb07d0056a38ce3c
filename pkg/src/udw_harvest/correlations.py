"""Mutual information and concurrence derived from the matrix elements.

With L_+- = (L_AA + L_BB +- sqrt((L_AA - L_BB)^2 + 4 |L_AB|^2)) / 2 the
mutual information of the X-state is, to second order in the coupling,

    I_AB = L_+ ln L_+ + L_- ln L_- - L_AA ln L_AA - L_BB ln L_BB ,

and the entanglement is measured by the concurrence

    C_AB = 2 max{0, |M| - sqrt(L_AA L_BB)} .

Quadrature noise can push L_- slightly negative; negatives within the
caller's error budget are clamped to zero before the logarithm, anything
larger is treated as an upstream inconsistency and raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DetectorParams, ScenarioConfig
from .density import ElementResult, MatrixElements, l_element, m_element
from .quadrature import QuadratureSpec
from .wightman import FieldState

__all__ = [
    "l_plus_minus",
    "mutual_information",
    "concurrence",
    "HarvestResult",
    "harvest_point",
]


def _xlogx(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log(x)


def l_plus_minus(l_aa: float, l_bb: float, l_ab: complex) -> tuple[float, float]:
    """Eigenvalues of the one-excitation block."""
    if l_aa < 0 or l_bb < 0:
        raise ValueError("transition probabilities must be >= 0")
    if l_ab == 0:
        # exact so that the mutual information vanishes identically here
        return max(l_aa, l_bb), min(l_aa, l_bb)
    disc = math.hypot(l_aa - l_bb, 2.0 * abs(l_ab))
    half = 0.5 * (l_aa + l_bb)
    return half + 0.5 * disc, half - 0.5 * disc


def mutual_information(l_aa: float, l_bb: float, l_ab: complex, err: float = 0.0) -> float:
    """Second-order quantum mutual information between the detectors.

    err is the absolute error budget of the inputs: a negative L_- within it
    is clamped to 0, a Cauchy-Schwarz violation beyond it raises.
    """
    if l_aa < 0 or l_bb < 0:
        raise ValueError("transition probabilities must be >= 0")
    slack = err + 1e-14 * (1.0 + l_aa + l_bb)
    cs = l_aa * l_bb - abs(l_ab) ** 2
    cs_slack = err * (l_aa + l_bb + 2.0 * abs(l_ab)) + 1e-14 * (1.0 + l_aa * l_bb)
    if cs < -cs_slack:
        raise ValueError(
            f"inputs violate L_AA L_BB >= |L_AB|^2 beyond error bars "
            f"(margin {cs:.3e}, allowed -{cs_slack:.3e})"
        )
    if l_ab == 0:
        return 0.0  # the eigenvalues are then exactly the probabilities
    lp, lm = l_plus_minus(l_aa, l_bb, l_ab)
    if lm < 0:
        if lm < -slack:
            raise ValueError(f"L_- = {lm:.3e} negative beyond the error budget {slack:.3e}")
        lm = 0.0
    return _xlogx(lp) + _xlogx(lm) - _xlogx(l_aa) - _xlogx(l_bb)


def concurrence(l_aa: float, l_bb: float, m: complex) -> float:
    """Entanglement monotone 2 max{0, |M| - sqrt(L_AA L_BB)}."""
    if l_aa < 0 or l_bb < 0:
        raise ValueError("transition probabilities must be >= 0")
    return 2.0 * max(0.0, abs(m) - math.sqrt(l_aa * l_bb))


def _xlogx_uncertainty(x: float, d: float) -> float:
    """Worst-case change of x ln x when x moves by +-d (x, d >= 0)."""
    if d <= 0:
        return 0.0
    lo = max(x - d, 0.0)
    base = _xlogx(x)
    return max(abs(_xlogx(x + d) - base), abs(_xlogx(lo) - base))


def mutual_information_error(e: MatrixElements) -> float:
    """First-order error estimate for I_AB from the element error budget.

    |dL_+-/dL_AA|, |dL_+-/dL_BB| and |dL_+-/d|L_AB|| are all <= 1, so the
    eigenvalue errors are bounded by the summed element errors; the x ln x
    factors are bounded by their worst-case finite variation.
    """
    lp, lm = l_plus_minus(max(e.l_aa, 0.0), max(e.l_bb, 0.0), e.l_ab)
    d_eig = e.err_l_aa + e.err_l_bb + e.err_l_ab
    return (
        _xlogx_uncertainty(lp, d_eig)
        + _xlogx_uncertainty(max(lm, 0.0), d_eig)
        + _xlogx_uncertainty(max(e.l_aa, 0.0), e.err_l_aa)
        + _xlogx_uncertainty(max(e.l_bb, 0.0), e.err_l_bb)
    )


def concurrence_error(e: MatrixElements) -> float:
    """First-order error estimate for the concurrence."""
    err = 2.0 * e.err_m
    root = math.sqrt(max(e.l_aa, 0.0) * max(e.l_bb, 0.0))
    if root > 0:
        err += (e.err_l_aa * e.l_bb + e.err_l_bb * e.l_aa) / root
    else:
        err += 2.0 * math.sqrt(e.err_l_aa * e.err_l_bb)
    return err


@dataclass(frozen=True)
class HarvestResult:
    """Everything harvested at one parameter point."""

    cfg: ScenarioConfig
    det: DetectorParams
    state: FieldState
    elements: MatrixElements
    l_plus: float
    l_minus: float
    mutual_information: float
    concurrence: float | None
    err_mutual_information: float
    err_concurrence: float | None


def harvest_point(cfg: ScenarioConfig, det: DetectorParams, state: FieldState,
                  spec: QuadratureSpec | None = None, include_m: bool = True) -> HarvestResult:
    """Compute all matrix elements and derived correlations at one point.

    The two detectors have identical intrinsic kinematics in every scenario
    supported here, so L_BB = L_AA is computed once (the BB quadrature route
    remains available through l_element for cross-checks).
    """
    spec = spec or QuadratureSpec.default_2d()
    ljj = l_element("A", "A", cfg, det, state, spec)
    lab = l_element("A", "B", cfg, det, state, spec)
    if include_m:
        m = m_element(cfg, det, state, spec)
    else:
        m = ElementResult(0.0j, 0.0, 0, True)

    elements = MatrixElements(
        l_aa=ljj.value.real,
        l_bb=ljj.value.real,
        l_ab=lab.value,
        m=m.value,
        err_l_aa=ljj.error,
        err_l_bb=ljj.error,
        err_l_ab=lab.error,
        err_m=m.error,
    )
    lp, lm = l_plus_minus(elements.l_aa, elements.l_bb, elements.l_ab)
    err_budget = ljj.error + lab.error
    mi = mutual_information(elements.l_aa, elements.l_bb, elements.l_ab, err=err_budget)
    mi = max(mi, 0.0)
    return HarvestResult(
        cfg=cfg,
        det=det,
        state=state,
        elements=elements,
        l_plus=lp,
        l_minus=max(lm, 0.0),
        mutual_information=mi,
        concurrence=concurrence(elements.l_aa, elements.l_bb, elements.m) if include_m else None,
        err_mutual_information=mutual_information_error(elements),
        err_concurrence=concurrence_error(elements) if include_m else None,
    )
