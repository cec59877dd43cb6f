"""Clock fractional-stability envelopes and their comparison with collapse noise.

A clock is described by a piecewise power law sigma_y(t) = A (t / 1 s)^p
over contiguous averaging-time segments. Its time fluctuation after t is
sigma_y(t) t / sqrt(3); the collapse-induced one is sqrt(tau t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import format_config
from .params import JULIAN_YEAR, ModelParams
from .tau import ClockGeometry, tau_quadrature

SQRT3 = math.sqrt(3.0)
JUNCTION_RTOL = 1e-9


@dataclass(frozen=True)
class Segment:
    A: float
    p: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A > 0):
            raise ValueError(f"segment amplitude must be positive, got {self.A!r}")
        if not math.isfinite(self.p):
            raise ValueError("segment exponent must be finite")
        if not (0 < self.t_min < self.t_max):
            raise ValueError(f"segment range must satisfy 0 < t_min < t_max, got [{self.t_min}, {self.t_max}]")

    def sigma_y(self, t: float) -> float:
        return self.A * t ** self.p

    def contains(self, t: float) -> bool:
        return self.t_min <= t <= self.t_max


@dataclass(frozen=True)
class StabilityModel:
    """Piecewise power-law sigma_y(t).

    ``radius`` is the clock's physical size in metres; ``None`` stands for
    an optimal clock that sees the full tau_max.
    """

    segments: tuple[Segment, ...]
    name: str = "custom"
    radius: float | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a stability model needs at least one segment")
        object.__setattr__(self, "segments", segs)
        for left, right in zip(segs, segs[1:]):
            if left.t_max != right.t_min:
                raise ValueError(
                    f"segments must be contiguous and ordered: {left.t_max} != {right.t_min}"
                )
            a, b = left.sigma_y(left.t_max), right.sigma_y(right.t_min)
            if abs(a - b) > JUNCTION_RTOL * max(a, b):
                raise ValueError(f"sigma_y jumps at t = {left.t_max:g} s ({a:.6g} vs {b:.6g})")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("clock radius must be positive")

    @property
    def t_min(self) -> float:
        return self.segments[0].t_min

    @property
    def t_max(self) -> float:
        return self.segments[-1].t_max

    def segment_at(self, t: float) -> Segment:
        for seg in self.segments:
            if seg.contains(t):
                return seg
        raise ValueError(
            f"t = {t:g} s lies outside the stability model range [{self.t_min:g}, {self.t_max:g}] s"
        )

    def sigma_y(self, t: float) -> float:
        return self.segment_at(t).sigma_y(t)

    def to_config(self) -> str:
        values: dict[str, object] = {}
        for i, seg in enumerate(self.segments):
            values[f"segments[{i}].A"] = seg.A
            values[f"segments[{i}].p"] = seg.p
            values[f"segments[{i}].t_min_s"] = seg.t_min
            values[f"segments[{i}].t_max_s"] = seg.t_max
        if self.radius is not None:
            values["radius_m"] = self.radius
        return format_config(values)

    @classmethod
    def from_config(cls, values: dict[str, str], name: str = "config") -> "StabilityModel":
        segments = []
        i = 0
        while f"segments[{i}].A" in values:
            try:
                seg = Segment(
                    float(values[f"segments[{i}].A"]),
                    float(values[f"segments[{i}].p"]),
                    float(values[f"segments[{i}].t_min_s"]),
                    float(values[f"segments[{i}].t_max_s"]),
                )
            except KeyError as exc:
                raise ValueError(f"segment {i} is missing key {exc.args[0]!r}") from None
            segments.append(seg)
            i += 1
        stray = [k for k in values if k.startswith("segments[") and not any(
            k.startswith(f"segments[{j}].") for j in range(i))]
        if stray:
            raise ValueError(f"segment keys out of sequence: {sorted(stray)}")
        radius = float(values["radius_m"]) if "radius_m" in values else None
        return cls(tuple(segments), name, radius)


# White-frequency-noise regime of optical lattice clocks, hours to days.
OPTICAL_LATTICE = StabilityModel(
    (Segment(1e-17, -0.5, 1.0, 1e6),), name="optical_lattice"
)

# Same white-noise regime running into a flicker floor at 1e-19.
OPTICAL_LATTICE_FLOOR = StabilityModel(
    (Segment(1e-17, -0.5, 1.0, 1e4), Segment(1e-19, 0.0, 1e4, 1e8)),
    name="optical_lattice_floor",
)

# Illustrative millisecond-pulsar envelope over 1 to 100 years; a
# neutron-star-sized clock, so the collapse side is volume-suppressed.
PULSAR = StabilityModel(
    (Segment(1e-15, 0.0, JULIAN_YEAR, 100 * JULIAN_YEAR),),
    name="pulsar",
    radius=1.2e4,
)

PRESETS = {m.name: m for m in (OPTICAL_LATTICE, OPTICAL_LATTICE_FLOOR, PULSAR)}


def get_preset(name: str) -> StabilityModel:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown stability preset {name!r}; choose from {sorted(PRESETS)}") from None


def clock_delta_t(model: StabilityModel, t: float) -> float:
    """Clock time fluctuation sigma_y(t) t / sqrt(3), in seconds."""
    return model.sigma_y(t) * t / SQRT3


def collapse_to_clock_ratio(tau: float, model: StabilityModel, t: float) -> float:
    if not (tau >= 0 and math.isfinite(tau)):
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    return math.sqrt(tau * t) / clock_delta_t(model, t)


def collapse_tau_for_clock(params: ModelParams, model: StabilityModel) -> float:
    """tau seen by the clock: tau_max, or the finite-radius value when the preset has one."""
    if model.radius is None:
        return params.tau_max
    return tau_quadrature(params, ClockGeometry(model.radius)).tau


def crossover_time(tau: float, model: StabilityModel) -> float | None:
    """Earliest t at which sqrt(tau t) reaches sigma_y(t) t / sqrt(3), or None.

    Per segment, tau t = A^2 t^(2p+2) / 3 gives t = (3 tau / A^2)^(1/(2p+1)).
    Segments with p = -1/2 scale like the collapse side and never cross.
    """
    if not (tau > 0 and math.isfinite(tau)):
        raise ValueError(f"tau must be positive, got {tau!r}")
    for seg in model.segments:
        k = 2.0 * seg.p + 1.0
        if k == 0.0:
            continue
        t = math.exp(math.log(3.0 * tau / seg.A ** 2) / k)
        if seg.contains(t):
            return t
    return None
