"""Parameter-sweep engine with deterministic CSV persistence.

A sweep evaluates harvest_point on the cartesian grid of (scenario, a, Omega,
L), in deterministic lexicographic order regardless of how many workers
execute it.  Rows whose numerics fail to converge are recorded with NaN
values and an infinite error estimate instead of aborting the sweep.

The CSV begins with '#'-prefixed metadata (version and an echo of the spec)
followed by the fixed 17-column header.  Floats are written with shortest
round-trip repr, so re-parsing the file reproduces the in-memory rows
exactly and rerunning the same spec yields byte-identical output.  Wall-clock
timing and a timestamp line are opt-in (wall_clock=True) because they would
break that reproducibility contract.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import product

from . import __version__
from .core import INERTIAL, SCENARIOS, DetectorParams, ScenarioConfig
from .correlations import harvest_point
from .quadrature import ConvergenceError, QuadratureSpec
from .wightman import FieldState

__all__ = [
    "SweepSpec",
    "ResultRow",
    "CSV_COLUMNS",
    "parse_values",
    "build_grid",
    "run_sweep",
    "write_result_csv",
    "read_result_csv",
]

WORKERS_ENV = "UDW_HARVEST_WORKERS"

CSV_COLUMNS = (
    "scenario",
    "a_sigma",
    "omega_sigma",
    "L_sigma",
    "lambda",
    "L_AA",
    "L_BB",
    "re_LAB",
    "im_LAB",
    "re_M",
    "im_M",
    "L_plus",
    "L_minus",
    "mutual_info",
    "concurrence",
    "err_est",
    "wall_time_ms",
)


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    a_sigma: float
    omega_sigma: float
    L_sigma: float
    lam: float
    l_aa: float
    l_bb: float
    re_lab: float
    im_lab: float
    re_m: float
    im_m: float
    l_plus: float
    l_minus: float
    mutual_info: float
    concurrence: float
    err_est: float
    wall_time_ms: float

    @property
    def converged(self) -> bool:
        return math.isfinite(self.err_est)


def parse_values(text: str) -> tuple[float, ...]:
    """Parse a grid axis: 'start:stop:step' (inclusive), 'a,b,c', or 'x'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be > 0")
        if stop < start:
            raise ValueError("range stop must be >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 9) for k in range(n))
    return tuple(float(p) for p in text.split(",") if p.strip())


@dataclass(frozen=True)
class SweepSpec:
    scenarios: tuple[str, ...]
    a_values: tuple[float, ...]
    omega_values: tuple[float, ...]
    l_values: tuple[float, ...]
    state: FieldState = field(default_factory=FieldState.minkowski)
    coupling: float = 0.1
    quad: QuadratureSpec = field(default_factory=QuadratureSpec.default_2d)
    output: str | None = None

    def __post_init__(self):
        if not self.scenarios or not self.a_values or not self.omega_values or not self.l_values:
            raise ValueError("sweep grid must be non-empty on every axis")
        for s in self.scenarios:
            if s not in SCENARIOS:
                raise ValueError(f"unknown scenario {s!r}")
        if self.coupling <= 0:
            raise ValueError("coupling must be > 0")

    def describe(self) -> str:
        st = self.state
        state_txt = st.kind
        if st.kind == "thermal":
            state_txt += f"(beta={st.beta!r})"
        if st.kind == "desitter":
            state_txt += f"(t_gh={st.t_gh!r})"
        q = self.quad
        return (
            f"scenarios={','.join(self.scenarios)}; a={list(self.a_values)}; "
            f"omega={list(self.omega_values)}; L={list(self.l_values)}; "
            f"state={state_txt}; coupling={self.coupling!r}; "
            f"abs_tol={q.abs_tol!r}; rel_tol={q.rel_tol!r}; t_max={q.t_max!r}; "
            f"eps0={q.regulator.eps0!r}; levels={q.regulator.levels}"
        )


def build_grid(spec: SweepSpec) -> list[tuple[str, float, float, float]]:
    """Deterministic lexicographic grid; the inertial scenario pins a = 0."""
    points = set()
    for scenario in spec.scenarios:
        a_axis = (0.0,) if scenario == INERTIAL else spec.a_values
        for a, omega, L in product(a_axis, spec.omega_values, spec.l_values):
            points.add((scenario, float(a), float(omega), float(L)))
    return sorted(points)


def _nan_row(point, lam: float) -> ResultRow:
    scenario, a, omega, L = point
    nan = float("nan")
    return ResultRow(scenario, a, omega, L, lam, nan, nan, nan, nan, nan, nan,
                     nan, nan, nan, nan, float("inf"), 0.0)


def _compute_row(args) -> ResultRow:
    point, spec, wall_clock = args
    scenario, a, omega, L = point
    started = time.perf_counter()
    try:
        cfg = ScenarioConfig(scenario, acceleration=a, separation=L)
        det = DetectorParams(coupling=spec.coupling, gap=omega)
        res = harvest_point(cfg, det, spec.state, spec.quad)
    except (ConvergenceError, ValueError):
        return _nan_row(point, spec.coupling)
    elapsed_ms = (time.perf_counter() - started) * 1000.0 if wall_clock else 0.0
    e = res.elements
    return ResultRow(
        scenario=scenario,
        a_sigma=a,
        omega_sigma=omega,
        L_sigma=L,
        lam=spec.coupling,
        l_aa=e.l_aa,
        l_bb=e.l_bb,
        re_lab=e.l_ab.real,
        im_lab=e.l_ab.imag,
        re_m=e.m.real,
        im_m=e.m.imag,
        l_plus=res.l_plus,
        l_minus=res.l_minus,
        mutual_info=res.mutual_information,
        concurrence=res.concurrence,
        err_est=res.err_mutual_information,
        wall_time_ms=elapsed_ms,
    )


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: int | None = None,
              wall_clock: bool = False) -> list[ResultRow]:
    """Evaluate the full grid; rows come back canonically sorted."""
    grid = build_grid(spec)
    jobs = [(point, spec, wall_clock) for point in grid]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_compute_row, jobs, chunksize=1))
    else:
        rows = [_compute_row(j) for j in jobs]
    rows.sort(key=lambda r: (r.scenario, r.a_sigma, r.omega_sigma, r.L_sigma))
    if spec.output:
        write_result_csv(spec.output, rows, spec, wall_clock=wall_clock)
    return rows


def _fmt(x: float) -> str:
    return repr(float(x))


def write_result_csv(path, rows: list[ResultRow], spec: SweepSpec | None = None,
                     wall_clock: bool = False) -> None:
    lines = [f"# udw-harvest {__version__}"]
    if spec is not None:
        lines.append(f"# spec: {spec.describe()}")
    if wall_clock:
        lines.append(f"# timestamp: {datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        vals = [r.scenario] + [
            _fmt(v)
            for v in (
                r.a_sigma, r.omega_sigma, r.L_sigma, r.lam, r.l_aa, r.l_bb,
                r.re_lab, r.im_lab, r.re_m, r.im_m, r.l_plus, r.l_minus,
                r.mutual_info, r.concurrence, r.err_est, r.wall_time_ms,
            )
        ]
        lines.append(",".join(vals))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_result_csv(path) -> list[ResultRow]:
    """Parse a sweep CSV back into rows (exact float round-trip)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = None
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = tuple(line.split(","))
                if header != CSV_COLUMNS:
                    raise ValueError(
                        f"unexpected CSV header {header!r}; expected {CSV_COLUMNS!r}"
                    )
                continue
            parts = line.split(",")
            if len(parts) != len(CSV_COLUMNS):
                raise ValueError(f"row has {len(parts)} columns, expected {len(CSV_COLUMNS)}")
            rows.append(ResultRow(parts[0], *(float(p) for p in parts[1:])))
    if header is None:
        raise ValueError(f"{path}: no header found")
    return rows
