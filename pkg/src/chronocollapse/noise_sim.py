"""Stochastic clock drift, correlated field increments and a decoherence toy.

White-in-time noise is never sampled pointwise. Everything here works with
increments integrated over a finite step ``dt``, whose covariance between
points x_i, x_j is D(|x_i - x_j|) dt / c^4 in time-fluctuation units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from ._io import csv_text
from .kernels import kernel_shape, kernel_shape_complement, kernel_zero
from .params import ModelParams

EIGEN_FLOOR = 1e-12


@dataclass(frozen=True)
class DriftTrajectory:
    t_grid: np.ndarray
    delta_t_values: np.ndarray
    tau: float
    seed: int
    realization: int = 0


@dataclass(frozen=True)
class FieldIncrementSample:
    points: np.ndarray
    dt: float
    values: np.ndarray  # (n_points,) or (n_draws, n_points), seconds
    covariance_used: np.ndarray  # target covariance before regularization, s^2
    n_floored: int = 0  # eigenvalues raised to the jitter floor


@dataclass(frozen=True)
class DecoherenceSetup:
    mass: float
    separation: float
    model: ModelParams

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if not (math.isfinite(self.separation) and self.separation >= 0):
            raise ValueError(f"separation must be non-negative, got {self.separation!r}")


@dataclass(frozen=True)
class CoherenceEstimate:
    value: complex
    stderr: float  # of |value|, along the direction of the mean
    n: int
    expected: float  # exp(-Gamma t)

    @property
    def modulus(self) -> float:
        return abs(self.value)


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("t_grid must be a non-empty 1-D sequence")
    if t[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    return t


def drift_ensemble(tau: float, t_grid, n: int, seed: int, start: int = 0) -> np.ndarray:
    """Realizations ``start:start+n`` of the clock drift, shape (n, len(t_grid)).

    Each row is a zero-mean Gaussian random walk with increment variance
    ``tau * dt``; row ``i`` depends only on ``(seed, i, t_grid)``.
    """
    if not (tau >= 0 and math.isfinite(tau)):
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    t = _check_grid(t_grid)
    seed = rng.check_seed(seed)
    z = rng.normal_rows(seed, "drift", start, start + int(n), t.size - 1)
    steps = z * np.sqrt(tau * np.diff(t))
    out = np.zeros((int(n), t.size))
    np.cumsum(steps, axis=1, out=out[:, 1:])
    return out


def sample_drift(tau: float, t_grid, seed: int, realization: int = 0) -> DriftTrajectory:
    t = _check_grid(t_grid)
    values = drift_ensemble(tau, t, 1, seed, start=realization)[0]
    return DriftTrajectory(t, values, float(tau), seed, realization)


def drift_csv(t_grid, ensemble: np.ndarray, first_id: int = 0) -> str:
    """Long-format CSV with columns t_s, delta_t_s, realization_id."""
    t = np.asarray(t_grid, dtype=float)
    rows = (
        (t[j], ensemble[i, j], first_id + i)
        for i in range(ensemble.shape[0])
        for j in range(t.size)
    )
    return csv_text(("t_s", "delta_t_s", "realization_id"), rows)


def _pairwise(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def field_covariance(points, model: ModelParams, dt: float) -> np.ndarray:
    """Target covariance D(|x_i - x_j|) dt / c^4 of integrated increments, in s^2."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return model.tau_max * dt * np.asarray(kernel_shape(model.kind, _pairwise(pts) / model.sigma))


def _factor(matrix: np.ndarray) -> tuple[np.ndarray, int]:
    """Symmetric square-root factor L (L L^T ~ matrix) with a relative eigenvalue floor."""
    w, v = np.linalg.eigh(0.5 * (matrix + matrix.T))
    floor = EIGEN_FLOOR * w.max()
    low = w < floor
    w = np.where(low, floor, w)
    if not np.all(np.isfinite(w)) or w.max() <= 0:
        raise np.linalg.LinAlgError("covariance factorization failed after regularization")
    return v * np.sqrt(w), int(low.sum())


def sample_field_increments(
    points, model: ModelParams, dt: float, seed: int, n_draws: int | None = None,
    stream: str = "field",
) -> FieldIncrementSample:
    """Jointly Gaussian time-fluctuation increments at ``points`` over a step ``dt``.

    Coincident points share one draw exactly. With ``n_draws`` the values
    have shape ``(n_draws, n_points)``; draw ``i`` depends only on
    ``(seed, stream, i)`` and the configuration.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] != 3:
        raise ValueError("points must be an (n, 3) array with n >= 1")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError(f"dt must be positive, got {dt!r}")
    seed = rng.check_seed(seed)

    unique, inverse = np.unique(pts, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    shape = np.asarray(kernel_shape(model.kind, _pairwise(unique) / model.sigma))
    L, n_floored = _factor(shape)

    count = 1 if n_draws is None else int(n_draws)
    if count < 1:
        raise ValueError("n_draws must be positive")
    z = rng.normal_rows(seed, stream, 0, count, unique.shape[0])
    values = math.sqrt(model.tau_max * dt) * (z @ L.T)
    values = values[:, inverse]
    if n_draws is None:
        values = values[0]
    return FieldIncrementSample(pts, float(dt), values, field_covariance(pts, model, dt), n_floored)


def decoherence_rate(setup: DecoherenceSetup) -> float:
    """Off-diagonal decay rate m^2 (D(0) - D(d)) / hbar^2 for two point masses."""
    model = setup.model
    gap = kernel_shape_complement(model.kind, setup.separation / model.sigma)
    return (setup.mass / model.constants.hbar) ** 2 * kernel_zero(model) * gap


def decoherence_mc(
    setup: DecoherenceSetup, t: float, n: int, seed: int, n_steps: int = 1
) -> CoherenceEstimate:
    """Noise-averaged coherence E[exp(i (theta_1 - theta_2))] from random-phase trajectories.

    Each branch picks up theta_k = -(m c^2 / hbar) * (integrated time
    fluctuation at x_k), accumulated over ``n_steps`` increments.
    """
    n = int(n)
    if n < 1000:
        raise ValueError(f"need at least 1000 realizations, got {n}")
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"t must be positive, got {t!r}")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    model = setup.model
    points = np.array([[0.0, 0.0, 0.0], [setup.separation, 0.0, 0.0]])
    sample = sample_field_increments(
        points, model, t / n_steps, seed, n_draws=n * n_steps, stream="decoherence"
    )
    acc = sample.values.reshape(n, n_steps, 2).sum(axis=1)
    c = model.constants
    dtheta = -(setup.mass * c.c ** 2 / c.hbar) * (acc[:, 0] - acc[:, 1])
    phases = np.exp(1j * dtheta)
    mean = complex(phases.mean())
    direction = mean / abs(mean) if abs(mean) > 0 else 1.0
    proj = (phases * np.conj(direction)).real
    stderr = float(proj.std(ddof=1) / math.sqrt(n))
    expected = math.exp(-decoherence_rate(setup) * t)
    return CoherenceEstimate(mean, stderr, n, expected)
