"""Parameter sweeps producing plot-ready tables.

* tau versus R / sigma for one or more models,
* time uncertainty versus elapsed time for optimal clocks, with the
  experimentally allowed CSL and DP bands,
* the one-year headline numbers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._io import csv_text, json_text
from .params import (
    CSL_LAMBDA_MAX,
    CSL_LAMBDA_MIN,
    CSL_REF_SIGMA,
    DEFAULT_CONSTANTS,
    DP_SIGMA_MIN,
    ModelKind,
    ModelParams,
    PhysicalConstants,
    standard_params,
)
from .tau import ClockGeometry, ConvergenceError, delta_t, tau_quadrature

# Not fixed by any bound: largest DP smearing length drawn in the band.
DEFAULT_DP_SIGMA_MAX = 1e-6

HEADLINE_EXPONENTS = {ModelKind.CSL: -28, ModelKind.DP: -31}
HEADLINE_LOG_TOL = 0.7


class ScanVariable(str, enum.Enum):
    RADIUS_RATIO = "radius"
    TIME = "time"


@dataclass(frozen=True)
class BandBounds:
    csl_lambda: tuple[float, float] = (CSL_LAMBDA_MIN, CSL_LAMBDA_MAX)
    dp_sigma: tuple[float, float] = (DP_SIGMA_MIN, DEFAULT_DP_SIGMA_MAX)
    # Only used when bands are evaluated for a finite clock radius.
    csl_sigma: float = CSL_REF_SIGMA

    def __post_init__(self):
        lo, hi = self.csl_lambda
        if not 0 < lo <= hi:
            raise ValueError("csl_lambda band must satisfy 0 < low <= high")
        lo, hi = self.dp_sigma
        if not 0 < lo <= hi:
            raise ValueError("dp_sigma band must satisfy 0 < low <= high")


@dataclass(frozen=True)
class ScanSpec:
    variable: ScanVariable
    grid_min: float
    grid_max: float
    count: int
    models: tuple[ModelParams, ...] = ()
    band_bounds: BandBounds | None = None
    clock_radius: float | None = None  # time scans only; None = optimal clocks
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        object.__setattr__(self, "variable", ScanVariable(self.variable))
        object.__setattr__(self, "models", tuple(self.models))
        if not (0 < self.grid_min < self.grid_max) or not math.isfinite(self.grid_max):
            raise ValueError("grid needs 0 < min < max")
        if int(self.count) < 2:
            raise ValueError("grid needs at least 2 points")
        object.__setattr__(self, "count", int(self.count))

    def grid(self) -> np.ndarray:
        g = np.geomspace(self.grid_min, self.grid_max, self.count)
        g[0], g[-1] = self.grid_min, self.grid_max
        return g


@dataclass
class ScanRow:
    x: float
    values: dict[str, float] = field(default_factory=dict)
    bands: dict[str, tuple[float, float]] = field(default_factory=dict)
    note: str = ""


def _labels(models, prefix: str, suffix: str) -> list[str]:
    kinds = [m.kind.value for m in models]
    out = []
    for i, k in enumerate(kinds):
        tag = k if kinds.count(k) == 1 else f"{k}{i}"
        out.append(f"{prefix}{tag}{suffix}")
    return out


def scan_tau_vs_radius(spec: ScanSpec) -> list[ScanRow]:
    """tau from quadrature at each R/sigma on the grid, for every model."""
    if spec.variable is not ScanVariable.RADIUS_RATIO:
        raise ValueError("scan_tau_vs_radius needs a radius-ratio scan spec")
    if not spec.models:
        raise ValueError("no models to scan")
    labels = _labels(spec.models, "tau_", "_s")
    rows = []
    for rho in spec.grid():
        row = ScanRow(float(rho))
        notes = []
        for label, model in zip(labels, spec.models):
            try:
                row.values[label] = tau_quadrature(model, ClockGeometry(rho * model.sigma)).tau
            except ConvergenceError as exc:
                row.values[label] = math.nan
                notes.append(f"{label}: {exc}")
        row.note = "; ".join(notes)
        rows.append(row)
    return rows


def _clock_tau(model: ModelParams, radius: float | None) -> float:
    if radius is None:
        return model.tau_max
    return tau_quadrature(model, ClockGeometry(radius)).tau


def band_models(bounds: BandBounds, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> dict:
    """The four parameter sets spanning the allowed bands, keyed by (band, edge)."""
    lam_lo, lam_hi = bounds.csl_lambda
    sig_lo, sig_hi = bounds.dp_sigma
    return {
        ("csl", "low"): ModelParams.csl(lam_lo, bounds.csl_sigma, constants),
        ("csl", "high"): ModelParams.csl(lam_hi, bounds.csl_sigma, constants),
        # Larger sigma means weaker DP noise.
        ("dp", "low"): ModelParams.dp(sig_hi, constants),
        ("dp", "high"): ModelParams.dp(sig_lo, constants),
    }


def scan_uncertainty_vs_time(spec: ScanSpec) -> list[ScanRow]:
    """sqrt(tau t) on a time grid for the scan's models and the allowed bands."""
    if spec.variable is not ScanVariable.TIME:
        raise ValueError("scan_uncertainty_vs_time needs a time scan spec")
    if spec.band_bounds is None:
        raise ValueError("time scans require band_bounds")
    edges = {key: _clock_tau(m, spec.clock_radius) for key, m in band_models(spec.band_bounds, spec.constants).items()}
    taus = [_clock_tau(m, spec.clock_radius) for m in spec.models]
    labels = _labels(spec.models, "delta_t_", "_s")
    rows = []
    for t in spec.grid():
        row = ScanRow(float(t))
        for label, tau in zip(labels, taus):
            row.values[label] = delta_t(tau, t)
        for band in ("csl", "dp"):
            row.bands[band] = (delta_t(edges[(band, "low")], t), delta_t(edges[(band, "high")], t))
        rows.append(row)
    return rows


def run_scan(spec: ScanSpec) -> list[ScanRow]:
    if spec.variable is ScanVariable.RADIUS_RATIO:
        return scan_tau_vs_radius(spec)
    return scan_uncertainty_vs_time(spec)


def _header(spec: ScanSpec, rows: list[ScanRow]) -> list[str]:
    first = rows[0]
    cols = ["rho" if spec.variable is ScanVariable.RADIUS_RATIO else "t_s"]
    cols += list(first.values)
    for band in first.bands:
        cols += [f"{band}_band_low_s", f"{band}_band_high_s"]
    if spec.variable is ScanVariable.RADIUS_RATIO:
        cols.append("note")
    return cols


def _flat(spec: ScanSpec, row: ScanRow) -> list:
    out = [row.x, *row.values.values()]
    for lo, hi in row.bands.values():
        out += [lo, hi]
    if spec.variable is ScanVariable.RADIUS_RATIO:
        out.append(row.note.replace(",", ";"))
    return out


def rows_to_csv(spec: ScanSpec, rows: list[ScanRow]) -> str:
    return csv_text(_header(spec, rows), (_flat(spec, r) for r in rows))


def scan_metadata(spec: ScanSpec) -> dict:
    meta = {
        "code": "chronocollapse",
        "version": __version__,
        "variable": spec.variable.value,
        "grid": {"min": spec.grid_min, "max": spec.grid_max, "count": spec.count, "spacing": "log"},
        "models": [m.as_dict() for m in spec.models],
        "constants": spec.constants.as_dict(),
    }
    if spec.variable is ScanVariable.TIME:
        b = spec.band_bounds
        meta["bands"] = {
            "csl_lambda_per_s": list(b.csl_lambda),
            "dp_sigma_m": list(b.dp_sigma),
            "dp_sigma_max_is_artifact_choice": True,
            "clock": "optimal (tau_max)" if spec.clock_radius is None else {"radius_m": spec.clock_radius},
        }
    return meta


def rows_to_json(spec: ScanSpec, rows: list[ScanRow]) -> str:
    header = _header(spec, rows)
    records = [dict(zip(header, _flat(spec, r))) for r in rows]
    return json_text(scan_metadata(spec), records)


@dataclass(frozen=True)
class HeadlineEntry:
    model: str
    tau_max_s: float
    delta_t_s: float
    log10_delta_t: float
    expected_exponent: int
    ok: bool


def headline_numbers(constants: PhysicalConstants = DEFAULT_CONSTANTS) -> list[HeadlineEntry]:
    """One-year time uncertainty of optimal clocks at the reference parameters."""
    year = constants.seconds_per_year
    out = []
    for kind in (ModelKind.CSL, ModelKind.DP):
        model = standard_params(kind, constants)
        dt = delta_t(model.tau_max, year)
        exp10 = HEADLINE_EXPONENTS[kind]
        lg = math.log10(dt)
        out.append(HeadlineEntry(kind.value, model.tau_max, dt, lg, exp10, abs(lg - exp10) <= HEADLINE_LOG_TOL))
    return out


def csl_bound_range(constants: PhysicalConstants = DEFAULT_CONSTANTS) -> tuple[float, float]:
    """One-year uncertainty of an optimal clock at the two CSL collapse-rate bounds."""
    year = constants.seconds_per_year
    lo = ModelParams.csl(CSL_LAMBDA_MIN, CSL_REF_SIGMA, constants)
    hi = ModelParams.csl(CSL_LAMBDA_MAX, CSL_REF_SIGMA, constants)
    return delta_t(lo.tau_max, year), delta_t(hi.tau_max, year)


def headline_text(entries: list[HeadlineEntry], constants: PhysicalConstants = DEFAULT_CONSTANTS) -> str:
    lines = []
    for e in entries:
        status = "ok" if e.ok else "MISMATCH"
        lines.append(
            f"{e.model}: tau_max = {e.tau_max_s:.4e} s, Delta_t(1 yr) = {e.delta_t_s:.4e} s, "
            f"log10 = {e.log10_delta_t:.2f} (expected ~{e.expected_exponent}) [{status}]"
        )
    lo, hi = csl_bound_range(constants)
    lines.append(f"csl bound range: Delta_t(1 yr) from {lo:.4e} s to {hi:.4e} s")
    return "\n".join(lines) + "\n"
