"""Smeared spatial correlation functions of the collapse noise field.

The unsmeared CSL correlation is a Dirac delta and is never evaluated
pointwise here; only the twice Gaussian-smeared kernels are.

With ``u = r / sigma`` both smeared kernels factor as
``kernel_zero(model) * kernel_shape(kind, u)`` where

    CSL:  f(u) = exp(-u^2 / 4)
    DP:   f(u) = sqrt(pi) / u * erf(u / 2),   f(0) = 1

Kernel values are SI, m^4 s^-3 (potential squared times time). Callers
that integrate them should work with the dimensionless shape instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .params import ModelKind, ModelParams

SQRT_PI = math.sqrt(math.pi)

# Below this u the DP shape switches to the Maclaurin series of erf(x)/x.
DP_SERIES_SWITCH = 1e-3

# sqrt(pi)/2 * erf(x)/x = sum_n (-1)^n x^(2n) / (n! (2n+1))
_ERF_OVER_X = (1.0, -1.0 / 3.0, 1.0 / 10.0, -1.0 / 42.0)
# 1 - sqrt(pi)/2 * erf(x)/x, used for 1 - f(u) at small u
_ONE_MINUS_ERF_OVER_X = (1.0 / 3.0, -1.0 / 10.0, 1.0 / 42.0, -1.0 / 216.0, 1.0 / 1320.0, -1.0 / 9360.0)
DP_COMPLEMENT_SWITCH = 0.1


@dataclass(frozen=True)
class KernelEvaluation:
    r: float
    value: float
    model: ModelKind


def _as_nonnegative(name, x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr >= 0)):
        raise ValueError(f"{name} must be non-negative")
    return arr


def _poly(coeffs, x2):
    acc = np.zeros_like(x2)
    for c in reversed(coeffs):
        acc = acc * x2 + c
    return acc


def _dp_shape(u):
    x = 0.5 * u
    small = u < DP_SERIES_SWITCH
    safe_u = np.where(small, 1.0, u)
    exact = SQRT_PI * erf(0.5 * safe_u) / safe_u
    series = _poly(_ERF_OVER_X, x * x)
    return np.where(small, series, exact)


def kernel_shape(kind, u):
    """Dimensionless kernel profile f(u) = D(u sigma) / D(0).

    Accepts scalars or arrays; returns the same shape (a float for scalar
    input).
    """
    kind = ModelKind.parse(kind)
    arr = _as_nonnegative("u", u)
    if kind is ModelKind.CSL:
        out = np.exp(-0.25 * arr * arr)
    else:
        out = _dp_shape(arr)
    return float(out) if out.ndim == 0 else out


def kernel_shape_complement(kind, u):
    """1 - f(u), evaluated without cancellation for small u."""
    kind = ModelKind.parse(kind)
    arr = _as_nonnegative("u", u)
    if kind is ModelKind.CSL:
        out = -np.expm1(-0.25 * arr * arr)
    else:
        x2 = 0.25 * arr * arr
        small = arr < DP_COMPLEMENT_SWITCH
        series = x2 * _poly(_ONE_MINUS_ERF_OVER_X, x2)
        out = np.where(small, series, 1.0 - _dp_shape(arr))
    return float(out) if out.ndim == 0 else out


def kernel_zero(model: ModelParams) -> float:
    """D(0): hbar^2 lam / m0^2 for CSL, hbar G / (sqrt(pi) sigma) for DP."""
    k = model.constants
    if model.kind is ModelKind.CSL:
        return (k.hbar / k.m0) ** 2 * model.lam
    return k.hbar * k.G / (SQRT_PI * model.sigma)


def kernel_smeared(model: ModelParams, r):
    """Smeared correlation D(r) for separation(s) ``r`` in metres."""
    arr = _as_nonnegative("r", r)
    out = kernel_zero(model) * np.asarray(kernel_shape(model.kind, arr / model.sigma))
    return float(out) if out.ndim == 0 else out


def evaluate(model: ModelParams, r: float) -> KernelEvaluation:
    return KernelEvaluation(float(r), kernel_smeared(model, float(r)), model.kind)


def kernel_dp_fourier(model: ModelParams, k):
    """Fourier transform of the smeared DP kernel, 4 pi hbar G / k^2 * exp(-sigma^2 k^2)."""
    if model.kind is not ModelKind.DP:
        raise ValueError("the Fourier-space kernel is provided for the DP model only")
    arr = np.asarray(k, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("wavenumber k must be positive")
    c = model.constants
    out = 4.0 * math.pi * c.hbar * c.G / (arr * arr) * np.exp(-(model.sigma * arr) ** 2)
    return float(out) if out.ndim == 0 else out
