"""Parameter sweeps and threshold searches over the steady state.

Every sweep evaluates independent grid points and keeps them in axis order,
so identical inputs always give identical output files.  Searches for peaks
and thresholds work on the unclamped (signed) metrics.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .dynamics import STABILITY_EPS, SingularSolve, diffusion_matrix, drift_matrix, stability, steady_state_cm
from .measures import MetricsRecord, metrics_from_cm
from .model import SystemSpec, default_spec

SCHEMA_VERSION = 1

# CSV names for MetricsRecord attributes, in output order
CSV_COLUMNS = {
    "E12": "e12",
    "G12": "g12",
    "G21": "g21",
    "GS": "gs",
    "n1": "pop_1",
    "n2": "pop_2",
    "SX1": "s_x1",
    "SX2": "s_x2",
    "SY1": "s_y1",
    "SY2": "s_y2",
    "na": "pop_a",
    "stable": "stable",
    "margin": "margin",
    "E12_raw": "e12_raw",
    "G12_raw": "g12_raw",
    "G21_raw": "g21_raw",
}

FIG3_R = 1.0
FIG3_LAMBDA = 0.49


class NoThresholdInRange(RuntimeError):
    pass


@dataclass(frozen=True)
class Axis:
    """Linearly spaced sweep axis; ``name`` is the CSV column header."""

    name: str
    start: float
    stop: float
    num: int

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclass
class SweepGrid:
    axes: list[Axis]
    records: list[MetricsRecord]
    # True where the point was unstable or degenerate
    marginal: np.ndarray = field(default=None)

    def __post_init__(self):
        if len(self.records) != math.prod(self.shape):
            raise ValueError("number of records does not match the axis sizes")
        if self.marginal is None:
            self.marginal = np.array([not r.stable for r in self.records]).reshape(self.shape)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.num for ax in self.axes)

    def field(self, name: str) -> np.ndarray:
        """Metric ``name`` (attribute or CSV column name) shaped like the grid."""
        attr = CSV_COLUMNS.get(name, name)
        return np.array([getattr(r, attr) for r in self.records], dtype=float).reshape(self.shape)

    def coordinates(self):
        """Axis values of every point, in the same (C) order as ``records``."""
        if not self.axes:
            return iter([()])
        grids = np.meshgrid(*[ax.values for ax in self.axes], indexing="ij")
        return zip(*[g.ravel() for g in grids])


@dataclass(frozen=True)
class Peak:
    location: float
    value: float


def evaluate_point(spec: SystemSpec) -> tuple[MetricsRecord, np.ndarray | None]:
    """Metrics and covariance matrix at one parameter point.

    Unstable, marginal or numerically singular points return a marginal
    record and ``None`` instead of raising.
    """
    a = drift_matrix(spec)
    stab = stability(a)
    if not stab.is_stable:
        return MetricsRecord.marginal(stab.margin), None
    try:
        sigma = steady_state_cm(a, diffusion_matrix(spec))
    except SingularSolve:
        return MetricsRecord.marginal(stab.margin), None
    return metrics_from_cm(sigma, stab.margin), sigma


def metrics(spec: SystemSpec) -> MetricsRecord:
    return evaluate_point(spec)[0]


def sweep(base: SystemSpec, axes: list[Axis], setter) -> SweepGrid:
    """Evaluate ``setter(base, *coords)`` over the Cartesian product of ``axes``."""
    records = []
    grids = np.meshgrid(*[ax.values for ax in axes], indexing="ij")
    for coords in zip(*[g.ravel() for g in grids]):
        records.append(metrics(setter(base, *(float(c) for c in coords))))
    return SweepGrid(list(axes), records)


def parameter_sweep(base: SystemSpec, name: str, start: float, stop: float, num: int) -> SweepGrid:
    """1D sweep of one spec field; rates are in units of ``kappa_a``."""
    return sweep(base, [Axis(name, start, stop, num)], lambda s, v: s.in_kappa_units(**{name: v}))


def fig2_sweep(base: SystemSpec | None = None, r_axis: Axis | None = None,
               lambda_axis: Axis | None = None) -> SweepGrid:
    """Metrics over squeezing parameter ``r`` and OPA gain (units of kappa_a)."""
    base = base or default_spec()
    r_axis = r_axis or Axis("r", 0.0, 2.0, 61)
    lambda_axis = lambda_axis or Axis("lambda", 0.0, 0.49, 61)
    return sweep(base, [r_axis, lambda_axis],
                 lambda s, r, lam: s.in_kappa_units(squeeze_r=r, lambda_opa=lam))


def _ratio_setter(s: SystemSpec, ratio: float) -> SystemSpec:
    return s.replace(gamma_2=ratio * s.gamma_1)


def locate_peak(fn, grid_x: np.ndarray, grid_y: np.ndarray, xtol: float = 1e-7) -> Peak:
    """Refine the grid maximum of ``fn`` by golden-section search.

    The bracket is the grid maximum and its two neighbours; a maximum on
    the edge of the grid is returned unrefined.
    """
    y = np.where(np.isfinite(grid_y), grid_y, -np.inf)
    i = int(np.argmax(y))
    if i == 0 or i == len(grid_x) - 1:
        return Peak(float(grid_x[i]), float(grid_y[i]))
    res = minimize_scalar(lambda x: -fn(x), bracket=(grid_x[i - 1], grid_x[i], grid_x[i + 1]),
                          method="golden", tol=xtol)
    return Peak(float(res.x), float(-res.fun))


def fig3_fig4_ratio_sweep(base: SystemSpec | None = None, ratio_axis: Axis | None = None,
                          with_opa: bool = True) -> tuple[SweepGrid, dict[str, Peak]]:
    """Metrics against the coupling ratio Gamma_2/Gamma_1 with Gamma_1 fixed.

    ``base`` defaults to the baseline with r = 1 and an OPA gain of
    0.49 kappa_a; ``with_opa=False`` switches the OPA off.  Returns the grid
    and refined peaks keyed ``"G12"``, ``"G21"`` and ``"E12"``.
    """
    base = base or default_spec(FIG3_R, FIG3_LAMBDA)
    if not with_opa:
        base = base.replace(lambda_opa=0.0)
    ratio_axis = ratio_axis or Axis("ratio", 0.5, 2.0, 101)
    grid = sweep(base, [ratio_axis], _ratio_setter)
    x = ratio_axis.values
    peaks = {}
    for col, attr in (("G12", "g12_raw"), ("G21", "g21_raw"), ("E12", "e12_raw")):
        peaks[col] = locate_peak(
            lambda v, attr=attr: getattr(metrics(_ratio_setter(base, v)), attr),
            x, grid.field(attr),
        )
    return grid, peaks


def fig5_dissipation_sweep(base: SystemSpec | None = None, kappa_axis: Axis | None = None,
                           which_magnon: int = 1, gamma_2_value: float = 3.0) -> SweepGrid:
    """Metrics against one magnon's decay rate at fixed ``Gamma_2`` (units of kappa_a)."""
    if which_magnon not in (1, 2):
        raise ValueError("which_magnon must be 1 or 2")
    base = (base or default_spec(FIG3_R, FIG3_LAMBDA)).in_kappa_units(gamma_2=gamma_2_value)
    kappa_axis = kappa_axis or Axis(f"kappa_{which_magnon}", 0.1, 1.0, 101)
    key = f"kappa_{which_magnon}"
    return sweep(base, [kappa_axis], lambda s, k: s.in_kappa_units(**{key: k}))


def temperature_sweep(base: SystemSpec, t_axis: Axis) -> SweepGrid:
    """Sweep in temperature; the axis is in millikelvin."""
    return sweep(base, [t_axis], lambda s, t_mk: s.replace(temperature=t_mk * 1e-3))


def _metric_raw(metric: str):
    if metric == "steering":
        return lambda rec: min(rec.g12_raw, rec.g21_raw) if rec.stable else -math.inf
    if metric == "entanglement":
        return lambda rec: rec.e12_raw if rec.stable else -math.inf
    raise ValueError(f"metric must be 'steering' or 'entanglement', got {metric!r}")


def fig6_temperature_threshold(base: SystemSpec | None = None, metric: str = "steering",
                               r: float = 2.0, lambda_opa: float = 0.49,
                               t_min: float = 0.02, t_max: float = 5.0,
                               xtol: float = 5e-4) -> float:
    """Temperature (kelvin) at which the signed metric crosses zero.

    For ``"steering"`` the weaker of the two directions is used, i.e. the
    point where the symmetric steering disappears.
    """
    base = (base or default_spec()).in_kappa_units(squeeze_r=r, lambda_opa=lambda_opa)
    raw = _metric_raw(metric)

    def f(t):
        return raw(metrics(base.replace(temperature=t)))

    lo, hi = f(t_min), f(t_max)
    if not lo > 0:
        raise NoThresholdInRange(f"{metric} is not positive at T = {t_min * 1e3:g} mK")
    if hi > 0:
        raise NoThresholdInRange(f"{metric} is still positive at T = {t_max * 1e3:g} mK")
    return float(bisect(f, t_min, t_max, xtol=xtol))


def max_stable_gain(base: SystemSpec | None = None, xtol: float = 1e-5) -> float:
    """Largest OPA gain (units of kappa_a) for which the drift matrix is stable."""
    base = base or default_spec()

    def margin(lam):
        return stability(drift_matrix(base.in_kappa_units(lambda_opa=lam))).margin + STABILITY_EPS

    if not margin(0.0) < 0:
        raise ValueError("base spec is not stable without the OPA")
    hi = 0.25
    while margin(hi) < 0:
        hi *= 2
        if hi > 1e6:
            raise RuntimeError("no instability found for any OPA gain")
    return float(bisect(margin, 0.0, hi, xtol=xtol))


# --- output -----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return format(float(v), ".17g")


def write_csv(path, grid: SweepGrid, config: dict | None = None) -> None:
    """One row per grid point: axis columns, then the metric columns.

    The first line is a comment carrying the schema version and the
    resolved configuration as JSON.  ``path`` may also be an open text file.
    """
    if hasattr(path, "write"):
        _write_csv(path, grid, config)
    else:
        with open(path, "w", newline="") as fh:
            _write_csv(fh, grid, config)


def _write_csv(fh, grid, config):
    meta = json.dumps(config or {}, sort_keys=True)
    fh.write(f"# schema=magnon_steering.sweep/{SCHEMA_VERSION} config={meta}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([ax.name for ax in grid.axes] + list(CSV_COLUMNS))
    for coords, rec in zip(grid.coordinates(), grid.records):
        row = [_fmt(c) for c in coords]
        row += [_fmt(getattr(rec, attr)) for attr in CSV_COLUMNS.values()]
        w.writerow(row)


def read_csv(path) -> tuple[dict, list[dict[str, float]]]:
    """Inverse of :func:`write_csv`: ``(config, rows)``."""
    with open(path, newline="") as fh:
        first = fh.readline()
        config = json.loads(first.split("config=", 1)[1]) if "config=" in first else {}
        rows = [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
    return config, rows


def write_summary(path, summary: dict) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
