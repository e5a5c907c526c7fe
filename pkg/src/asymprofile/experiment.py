"""Config-driven experiment runs: time sweeps, fits, CSV/JSON artifacts.

A config is one JSON document describing one experiment::

    {
      "equation": "damped_wave",
      "n": 2,
      "data": {"u0": [{"kind": "gaussian", "amplitude": 1, "center": [0, 0], "width": 1}],
               "u1": [{"kind": "gaussian", "amplitude": 0.5, "center": [1, 0], "width": 1}]},
      "time": {"t_min": 1, "t_max": 10000, "per_decade": 24},
      "fit": {"t_min": 100, "t_max": 10000}
    }

Optional keys: ``grid`` (radial or tensor), ``floor``, ``tolerances``,
``output``.  :func:`run` returns a :class:`RunReport`; :func:`write_outputs`
stores ``run.csv`` and ``report.json``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import os
import platform
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
import scipy

from . import __version__
from .analysis import compute_M, data_norm, decay_fit, maximize_L
from .data import AnalyticDatum, Term, TermKind, default_grid
from .evolution import Equation, EvolutionProblem, residual_spectrum
from .quadrature import TAIL_FRACTION_LIMIT, RadialGrid, TensorGrid, band_l2_sq, radial_l2, tensor_l2
from .spectral import Band

__all__ = [
    "CSV_COLUMNS",
    "ConfigError",
    "ExperimentConfig",
    "GridSpec",
    "RunReport",
    "load_config",
    "load_report",
    "plotdata",
    "run",
    "write_outputs",
]

CSV_COLUMNS = ("t", "residual", "low", "mid", "high", "ratio")
CSV_SCHEMA_VERSION = 1
DEFAULT_SLOPE_TOLERANCE = {Equation.HEAT: 0.05, Equation.DAMPED_WAVE: 0.10}

_TERM_SCHEMA = {
    "type": "object",
    "required": ["kind", "amplitude", "center", "width"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["gaussian", "dipole"]},
        "amplitude": {"type": "number"},
        "center": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "width": {"type": "number", "exclusiveMinimum": 0},
        "axis": {"type": "integer", "minimum": 0},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["equation", "n", "data", "time"],
    "additionalProperties": False,
    "properties": {
        "equation": {"enum": ["heat", "damped_wave"]},
        "n": {"type": "integer", "minimum": 1},
        "data": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "array", "items": _TERM_SCHEMA} for k in ("v0", "u0", "u1")},
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["radial", "tensor"]},
                "R": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "levels": {"type": "integer", "minimum": 1},
                "nodes_per_panel": {"type": "integer", "minimum": 8},
                "angular_order": {"type": ["integer", "null"], "minimum": 1},
                "extent": {"type": "number", "exclusiveMinimum": 0},
                "points": {"type": "integer", "minimum": 2},
            },
        },
        "time": {
            "type": "object",
            "required": ["t_min", "t_max"],
            "additionalProperties": False,
            "properties": {
                "t_min": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "per_decade": {"type": "integer", "minimum": 1},
            },
        },
        "fit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_min": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "floor": {"type": "number", "exclusiveMinimum": 0},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"slope": {"type": "number", "exclusiveMinimum": 0}},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}},
        },
    },
}


class ConfigError(ValueError):
    """Invalid experiment config; ``errors`` lists every offending field."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid config:\n  " + "\n  ".join(self.errors))


@dataclass(frozen=True)
class GridSpec:
    type: str = "radial"
    R: float | None = None
    levels: int = 30
    nodes_per_panel: int = 24
    angular_order: int | None = None
    extent: float | None = None
    points: int | None = None

    def to_dict(self):
        if self.type == "tensor":
            return {"type": "tensor", "extent": self.extent, "points": self.points}
        return {
            "type": "radial",
            "R": self.R,
            "levels": self.levels,
            "nodes_per_panel": self.nodes_per_panel,
            "angular_order": self.angular_order,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    equation: Equation
    n: int
    data: tuple  # ((name, (Term, ...)), ...)
    t_min: float
    t_max: float
    per_decade: int = 24
    fit_window: tuple = (100.0, 1e4)
    grid: GridSpec = field(default_factory=GridSpec)
    floor: float = 1e-140
    slope_tolerance: float | None = None
    output_dir: str | None = None

    @classmethod
    def from_dict(cls, raw) -> "ExperimentConfig":
        errors = [
            f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
            for err in sorted(
                jsonschema.Draft7Validator(CONFIG_SCHEMA).iter_errors(raw), key=lambda e: list(map(str, e.path))
            )
        ]
        if errors:
            raise ConfigError(errors)
        equation = Equation(raw["equation"])
        n = raw["n"]
        names = ("v0",) if equation is Equation.HEAT else ("u0", "u1")
        data = raw["data"]
        for name in names:
            if name not in data:
                errors.append(f"data/{name}: required for {equation.value}")
        for name in data:
            if name not in names:
                errors.append(f"data/{name}: not used by {equation.value}")
        parsed = []
        for name in names:
            terms = []
            for i, spec in enumerate(data.get(name, [])):
                where = f"data/{name}/{i}"
                if len(spec["center"]) != n:
                    errors.append(f"{where}/center: length {len(spec['center'])} != n={n}")
                    continue
                axis = spec.get("axis", 0)
                if axis >= n:
                    errors.append(f"{where}/axis: {axis} out of range for n={n}")
                    continue
                terms.append(Term(spec["amplitude"], spec["center"], spec["width"], TermKind(spec["kind"]), axis))
            parsed.append((name, tuple(terms)))

        time = raw["time"]
        t_min, t_max = float(time["t_min"]), float(time["t_max"])
        if not t_min < t_max:
            errors.append(f"time: empty range t_min={t_min} >= t_max={t_max}")
        fit = raw.get("fit", {})
        fit_window = (float(fit.get("t_min", max(t_min, 100.0))), float(fit.get("t_max", t_max)))
        if not fit_window[0] < fit_window[1]:
            errors.append(f"fit: empty window {fit_window}")
        if fit_window[0] < t_min or fit_window[1] > t_max:
            errors.append(f"fit: window {fit_window} not inside time range ({t_min}, {t_max})")

        g = raw.get("grid", {})
        gtype = g.get("type", "radial")
        if gtype == "tensor":
            if n > 3:
                errors.append("grid/type: tensor grids need n <= 3")
            for key in ("extent", "points"):
                if key not in g:
                    errors.append(f"grid/{key}: required for tensor grids")
            pts = g.get("points", 2)
            if pts & (pts - 1):
                errors.append(f"grid/points: {pts} is not a power of two")
            grid = GridSpec("tensor", extent=g.get("extent"), points=g.get("points"))
        else:
            if g.get("R") is not None and g["R"] <= 1:
                errors.append("grid/R: must exceed 1 so the HIGH band is covered")
            grid = GridSpec(
                "radial",
                R=g.get("R"),
                levels=g.get("levels", 30),
                nodes_per_panel=g.get("nodes_per_panel", 24),
                angular_order=g.get("angular_order"),
            )
        if errors:
            raise ConfigError(errors)
        return cls(
            equation=equation,
            n=n,
            data=tuple(parsed),
            t_min=t_min,
            t_max=t_max,
            per_decade=time.get("per_decade", 24),
            fit_window=fit_window,
            grid=grid,
            floor=float(raw.get("floor", 1e-140)),
            slope_tolerance=raw.get("tolerances", {}).get("slope"),
            output_dir=raw.get("output", {}).get("dir"),
        )

    def to_dict(self):
        out = {
            "equation": self.equation.value,
            "n": self.n,
            "data": {
                name: [
                    {
                        "kind": t.kind.value,
                        "amplitude": t.amplitude,
                        "center": list(t.center),
                        "width": t.width,
                        "axis": t.axis,
                    }
                    for t in terms
                ]
                for name, terms in self.data
            },
            "grid": self.grid.to_dict(),
            "time": {"t_min": self.t_min, "t_max": self.t_max, "per_decade": self.per_decade},
            "fit": {"t_min": self.fit_window[0], "t_max": self.fit_window[1]},
            "floor": self.floor,
        }
        if self.slope_tolerance is not None:
            out["tolerances"] = {"slope": self.slope_tolerance}
        if self.output_dir is not None:
            out["output"] = {"dir": self.output_dir}
        return out

    @property
    def times(self) -> np.ndarray:
        decades = math.log10(self.t_max / self.t_min)
        count = max(2, int(round(decades * self.per_decade)) + 1)
        return np.logspace(math.log10(self.t_min), math.log10(self.t_max), count)

    @property
    def expected_slope(self) -> float:
        return -(self.n / 4 + 0.5)

    def build_problem(self) -> EvolutionProblem:
        data = tuple(AnalyticDatum(self.n, terms) for _, terms in self.data)
        g = self.grid
        if g.type == "tensor":
            grid = TensorGrid(self.n, g.extent, g.points)
        else:
            grid = default_grid(
                *data, levels=g.levels, nodes_per_panel=g.nodes_per_panel, angular_order=g.angular_order, R=g.R
            )
        return EvolutionProblem(self.equation, data, grid)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"<file>: not valid JSON ({exc})"]) from None
    return ExperimentConfig.from_dict(raw)


@dataclass
class RunReport:
    config: dict
    rows: list
    fits: dict
    fitted_constant: float
    constants: dict
    checks: list
    warnings: list
    stamp: dict

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self):
        return {
            "stamp": self.stamp,
            "config": self.config,
            "columns": list(CSV_COLUMNS),
            "rows": [[_json_float(v) for v in row] for row in self.rows],
            "fits": self.fits,
            "fitted_constant": _json_float(self.fitted_constant),
            "constants": self.constants,
            "checks": self.checks,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, raw):
        rows = [[float(v) if v is not None else math.nan for v in row] for row in raw["rows"]]
        fc = raw.get("fitted_constant")
        return cls(
            raw["config"],
            rows,
            raw.get("fits", {}),
            math.nan if fc is None else float(fc),
            raw.get("constants", {}),
            raw.get("checks", []),
            raw.get("warnings", []),
            raw.get("stamp", {}),
        )


def _json_float(v):
    return None if isinstance(v, float) and math.isnan(v) else v


def _sample(problem, t):
    field = residual_spectrum(problem, t)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if isinstance(field.grid, RadialGrid):
            residual, tail = radial_l2(field, return_tail=True)
        else:
            residual, tail = tensor_l2(field), 0.0
    bands = tuple(band_l2_sq(field, b) for b in (Band.LOW, Band.MID, Band.HIGH))
    return residual, bands, tail


def _fit_block(ts, values, window, floor):
    pts = [(t, v) for t, v in zip(ts, values) if window[0] <= t <= window[1] and v > floor]
    try:
        return decay_fit(pts).as_dict(), None
    except ValueError as exc:
        return None, f"fit over {window} skipped: {exc}"


def run(config: ExperimentConfig, workers: int | None = None, tolerance_scale: float = 1.0) -> RunReport:
    """Sweep the configured times and assemble a :class:`RunReport`.

    Rows are computed independently per time and stored in time order, so
    the result does not depend on ``workers``.
    """
    problem = config.build_problem()
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        denom = data_norm(problem)
    notes.extend(sorted({str(w.message) for w in caught}))

    times = config.times
    workers = workers or os.cpu_count() or 1
    problem.transforms  # populate the cache before fanning out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        samples = list(pool.map(lambda t: _sample(problem, t), times))

    rate = config.n / 4 + 0.5
    rows = []
    for t, (residual, bands, tail) in zip(times, samples):
        if residual == 0:
            ratio = 0.0
        elif denom == 0:
            ratio = math.nan
        else:
            ratio = residual * t**rate / denom
        rows.append([float(t), residual, *bands, ratio])
        if tail > TAIL_FRACTION_LIMIT:
            notes.append(f"t={t:.6g}: last radial panel holds {tail:.2e} of the residual norm (truncation suspect)")

    ts = [r[0] for r in rows]
    fits = {}
    fit, note = _fit_block(ts, [r[1] for r in rows], config.fit_window, config.floor)
    fits["residual"] = fit
    if note:
        notes.append(note)
    fit, note = _fit_block(ts, [r[2] for r in rows], config.fit_window, config.floor)
    fits["low_band"] = fit
    if note:
        notes.append(note)

    in_window = [r[5] for r in rows if config.fit_window[0] <= r[0] <= config.fit_window[1] and math.isfinite(r[5])]
    fitted = max(in_window) if in_window else math.nan

    tol = config.slope_tolerance or DEFAULT_SLOPE_TOLERANCE[config.equation]
    tol *= tolerance_scale
    checks = []
    if fits["residual"] is not None:
        measured = fits["residual"]["slope"]
        checks.append(
            {
                "name": "residual slope",
                "measured": measured,
                "expected": config.expected_slope,
                "tolerance": tol,
                "passed": abs(measured - config.expected_slope) <= tol,
            }
        )

    theta, L = maximize_L()
    return RunReport(
        config=config.to_dict(),
        rows=rows,
        fits=fits,
        fitted_constant=fitted,
        constants={"L": L, "theta_star": theta, "M": compute_M(), "data_norm": denom, "profile_mass": problem.profile_mass},
        checks=checks,
        warnings=notes,
        stamp={
            "package": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    )


def csv_text(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(["NaN" if math.isnan(v) else repr(float(v)) for v in row])
    return buf.getvalue()


def write_outputs(report: RunReport, out_dir) -> tuple:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / "run.csv", out / "report.json"
    csv_path.write_text(csv_text(report))
    json_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return csv_path, json_path


def load_report(path) -> RunReport:
    with open(path) as fh:
        return RunReport.from_dict(json.load(fh))


_PLOT_COLUMNS = {"residual": ("residual",), "bands": ("low", "mid", "high"), "ratio": ("ratio",)}


def plotdata(report, which: str) -> str:
    """Whitespace-separated columns for external plotting, with a ``#`` header."""
    if which not in _PLOT_COLUMNS:
        raise ValueError(f"unknown selector {which!r}; choose from {sorted(_PLOT_COLUMNS)}")
    if not isinstance(report, RunReport):
        report = load_report(report)
    if not report.rows:
        raise ValueError("report has no rows")
    cols = _PLOT_COLUMNS[which]
    idx = [CSV_COLUMNS.index(c) for c in cols]
    lines = ["# t " + " ".join(cols)]
    for row in report.rows:
        vals = ["NaN" if math.isnan(row[i]) else repr(float(row[i])) for i in idx]
        lines.append(" ".join([repr(float(row[0]))] + vals))
    return "\n".join(lines) + "\n"
