"""Clock-time uncertainty from spontaneous-collapse noise fields (CSL and DP)."""

__version__ = "0.1.0"

from .params import (
    DEFAULT_CONSTANTS,
    BoundsReport,
    ModelKind,
    ModelParams,
    PhysicalConstants,
    check_bounds,
    gamma_from_lambda,
    lambda_from_gamma,
    standard_params,
)
from .kernels import kernel_dp_fourier, kernel_shape, kernel_smeared, kernel_zero
from .tau import (
    ClockGeometry,
    TauMethod,
    TauResult,
    delta_t,
    pair_distance_density,
    tau_asymptotic_large,
    tau_max,
    tau_monte_carlo,
    tau_quadrature,
)

__all__ = [
    "DEFAULT_CONSTANTS",
    "BoundsReport",
    "ClockGeometry",
    "ModelKind",
    "ModelParams",
    "PhysicalConstants",
    "TauMethod",
    "TauResult",
    "check_bounds",
    "delta_t",
    "gamma_from_lambda",
    "kernel_dp_fourier",
    "kernel_shape",
    "kernel_smeared",
    "kernel_zero",
    "lambda_from_gamma",
    "pair_distance_density",
    "standard_params",
    "tau_asymptotic_large",
    "tau_max",
    "tau_monte_carlo",
    "tau_quadrature",
]
