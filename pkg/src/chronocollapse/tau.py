"""Clock-averaged fluctuation strength tau for spherical clocks.

The double volume average of the smeared kernel over a ball of radius R is
reduced exactly to one dimension with the pair-distance density of two
uniform points in the ball,

    p(r; R) = 3 r^2 / R^3 * (1 - 3 r / (4 R) + r^3 / (16 R^3)),  0 <= r <= 2R,

and evaluated in the dimensionless variables u = r / sigma, rho = R / sigma:

    tau = tau_max * F(rho),   F(rho) = int_0^{2 rho} p(u; rho) f(u) du.

A brute-force Monte Carlo double average is kept as an independent check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import rng
from .kernels import kernel_shape, kernel_shape_complement
from .params import ModelKind, ModelParams

QUAD_EPSREL = 1e-8
# exp(-60^2 / 4) ~ 1e-391: the CSL integrand is exactly zero in double beyond this.
CSL_U_CUTOFF = 60.0
LARGE_RHO_MIN = 10.0


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, estimate=None, abs_error=None):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error = abs_error


class ClockShape(str, enum.Enum):
    SPHERE = "sphere"


class TauMethod(str, enum.Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"
    ASYMPTOTIC_SMALL = "asymptotic_small"
    ASYMPTOTIC_LARGE = "asymptotic_large"


@dataclass(frozen=True)
class ClockGeometry:
    radius: float
    shape: ClockShape = ClockShape.SPHERE

    def __post_init__(self):
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise ValueError(f"clock radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "shape", ClockShape(self.shape))


@dataclass(frozen=True)
class TauResult:
    tau: float
    method: TauMethod
    stderr: float = 0.0
    n_samples: int | None = None
    abs_error: float = 0.0  # quadrature error estimate, seconds


def pair_distance_density(r, R):
    """Density of the distance between two uniform points in a ball of radius R."""
    R = float(R)
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"R must be positive, got {R!r}")
    r = np.asarray(r, dtype=float)
    if np.any(~(r >= 0)):
        raise ValueError("r must be non-negative")
    x = r / R
    p = 3.0 * x * x / R * (1.0 - 0.75 * x + x ** 3 / 16.0)
    out = np.where(r <= 2.0 * R, p, 0.0)
    return float(out) if out.ndim == 0 else out


def tau_profile(kind, rho: float, epsrel: float = QUAD_EPSREL) -> tuple[float, float]:
    """Dimensionless profile F(rho) = tau / tau_max and its error estimate."""
    kind = ModelKind.parse(kind)
    rho = float(rho)
    if not (math.isfinite(rho) and rho > 0):
        raise ValueError(f"rho must be positive, got {rho!r}")
    upper = 2.0 * rho
    if kind is ModelKind.CSL:
        upper = min(upper, CSL_U_CUTOFF)

    def integrand(u):
        x = u / rho
        return 3.0 * x * x / rho * (1.0 - 0.75 * x + x ** 3 / 16.0) * kernel_shape(kind, u)

    # Breakpoint where the kernel starts to fall off, when inside the domain.
    points = [2.0] if upper > 2.0 else None
    value, abserr, info, *rest = integrate.quad(
        integrand, 0.0, upper, epsabs=0.0, epsrel=epsrel, limit=500, points=points, full_output=1
    )
    if rest and abserr > 10 * epsrel * abs(value):
        raise ConvergenceError(
            f"tau quadrature did not converge at rho={rho:g}: {rest[0]}", value, abserr
        )
    return value, abserr


def tau_max(model: ModelParams) -> float:
    """Fluctuation strength of a point-like (optimal) clock, in seconds."""
    return model.tau_max


def tau_quadrature(model: ModelParams, geom: ClockGeometry, epsrel: float = QUAD_EPSREL) -> TauResult:
    f, err = tau_profile(model.kind, geom.radius / model.sigma, epsrel)
    tmax = model.tau_max
    return TauResult(tmax * f, TauMethod.QUADRATURE, 0.0, None, tmax * err)


def _sample_ball(u: np.ndarray, rho: float) -> np.ndarray:
    """Map three U[0,1) columns to uniform points in a ball (radius-cube inverse transform)."""
    r = rho * np.cbrt(u[:, 0])
    cos_t = 2.0 * u[:, 1] - 1.0
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t * cos_t))
    phi = 2.0 * math.pi * u[:, 2]
    return np.column_stack((r * sin_t * np.cos(phi), r * sin_t * np.sin(phi), r * cos_t))


def sample_pair_distances(rho: float, seed: int, start: int, stop: int, stream: str = "pairs") -> np.ndarray:
    """Distances of pairs ``start:stop`` drawn uniformly in a ball of radius ``rho``."""
    u = rng.uniform_rows(seed, stream, start, stop, 6)
    a = _sample_ball(u[:, :3], rho)
    b = _sample_ball(u[:, 3:], rho)
    return np.sqrt(np.sum((a - b) ** 2, axis=1))


def tau_monte_carlo(
    model: ModelParams, geom: ClockGeometry, n: int, seed: int, workers: int | None = None
) -> TauResult:
    """Direct Monte Carlo estimate of the double volume average.

    The result depends only on ``(model, geom, n, seed)``; ``workers``
    changes wall time, never bits.
    """
    n = int(n)
    if n < 1000:
        raise ValueError(f"need at least 1000 samples, got {n}")
    seed = rng.check_seed(seed)
    rho = geom.radius / model.sigma
    kind = model.kind

    def block_sums(block, lo, hi):
        base = block * rng.BLOCK_ROWS
        d = sample_pair_distances(rho, seed, base + lo, base + hi)
        # Accumulate 1 - f so nearly constant integrands keep their variance.
        g = np.asarray(kernel_shape_complement(kind, d))
        return g.sum(), (g * g).sum()

    sums = np.array(rng.map_blocks(block_sums, n, workers))
    s1, s2 = float(sums[:, 0].sum()), float(sums[:, 1].sum())
    mean_g = s1 / n
    var = max(s2 - s1 * mean_g, 0.0) / (n - 1)
    tmax = model.tau_max
    return TauResult(tmax * (1.0 - mean_g), TauMethod.MONTE_CARLO, tmax * math.sqrt(var / n), n)


def tau_asymptotic_small(model: ModelParams) -> TauResult:
    return TauResult(model.tau_max, TauMethod.ASYMPTOTIC_SMALL)


def tau_asymptotic_large(model: ModelParams, geom: ClockGeometry) -> TauResult:
    """Large-clock limit: 6 sqrt(pi) tau_max / rho^3 (CSL), 6 sqrt(pi) tau_max / (5 rho) (DP)."""
    rho = geom.radius / model.sigma
    if rho < LARGE_RHO_MIN:
        raise ValueError(
            f"R/sigma = {rho:.3g} is out of the large-clock regime (needs >= {LARGE_RHO_MIN:g})"
        )
    c = 6.0 * math.sqrt(math.pi) * model.tau_max
    tau = c / rho ** 3 if model.kind is ModelKind.CSL else c / (5.0 * rho)
    return TauResult(tau, TauMethod.ASYMPTOTIC_LARGE)


def delta_t(tau, t):
    """Accumulated time uncertainty sqrt(tau * t)."""
    tau_a = np.asarray(tau, dtype=float)
    t_a = np.asarray(t, dtype=float)
    if np.any(~(tau_a >= 0)) or np.any(~(t_a >= 0)):
        raise ValueError("tau and t must be non-negative")
    out = np.sqrt(tau_a * t_a)
    return float(out) if out.ndim == 0 else out
