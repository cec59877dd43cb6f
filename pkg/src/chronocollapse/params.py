"""Physical constants, collapse-model parameter sets and their conversions.

Everything is SI. The CSL model is parametrized by the microscopic collapse
rate ``lam`` (s^-1) and smearing length ``sigma`` (m); the DP model by
``sigma`` alone. Equivalent parametrizations (gamma, alpha = sigma^-2) are
exposed as derived properties.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

# Experimentally allowed regions.
CSL_LAMBDA_MIN = 1e-20  # s^-1, exclusive
CSL_LAMBDA_MAX = 1e-11  # s^-1, exclusive
DP_SIGMA_MIN = 4.94e-10  # m, inclusive

# Reference parameter sets.
CSL_REF_LAMBDA = 1e-16
CSL_REF_SIGMA = 1e-7
DP_REF_SIGMA = 1e-9

JULIAN_YEAR = 3.15576e7  # s

NUCLEON_MASSES = {
    "proton": 1.67262192369e-27,
    "neutron": 1.67492749804e-27,
    "amu": 1.66053906660e-27,
}


class ModelKind(str, enum.Enum):
    CSL = "csl"
    DP = "dp"

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown model {value!r}; expected 'csl' or 'dp'") from None


class BoundsWarning(UserWarning):
    """Parameters lie outside the experimentally allowed region."""


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used throughout. Defaults are fixed, not looked up."""

    hbar: float = 1.054571817e-34
    G: float = 6.67430e-11
    c: float = 299792458.0
    m0: float = NUCLEON_MASSES["proton"]
    seconds_per_year: float = JULIAN_YEAR
    age_of_universe: float = 4.35e17

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"constant {name} must be positive and finite, got {value!r}")

    @classmethod
    def with_nucleon(cls, name: str) -> "PhysicalConstants":
        """Defaults with the reference mass set to 'proton', 'neutron' or 'amu'."""
        try:
            return cls(m0=NUCLEON_MASSES[name])
        except KeyError:
            raise ValueError(f"unknown nucleon mass {name!r}; choose from {sorted(NUCLEON_MASSES)}") from None

    def as_dict(self) -> dict[str, float]:
        return {
            "hbar": self.hbar,
            "G": self.G,
            "c": self.c,
            "m0": self.m0,
            "seconds_per_year": self.seconds_per_year,
            "age_of_universe": self.age_of_universe,
        }


DEFAULT_CONSTANTS = PhysicalConstants()


def _require_positive(name: str, value) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """A CSL or DP parameter set.

    ``lam`` is the CSL collapse rate in s^-1 and must be ``None`` for DP.
    """

    kind: ModelKind
    sigma: float
    lam: float | None = None
    constants: PhysicalConstants = field(default=DEFAULT_CONSTANTS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        object.__setattr__(self, "sigma", _require_positive("sigma", self.sigma))
        if self.kind is ModelKind.CSL:
            if self.lam is None:
                raise ValueError("CSL parameters require lam (collapse rate)")
            object.__setattr__(self, "lam", _require_positive("lam", self.lam))
        elif self.lam is not None:
            raise ValueError("DP parameters take no collapse rate")

    @classmethod
    def csl(cls, lam: float, sigma: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> "ModelParams":
        return cls(ModelKind.CSL, sigma, lam, constants)

    @classmethod
    def dp(cls, sigma: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> "ModelParams":
        return cls(ModelKind.DP, sigma, None, constants)

    @property
    def gamma(self) -> float:
        if self.kind is not ModelKind.CSL:
            raise AttributeError("gamma is defined for CSL only")
        return gamma_from_lambda(self.lam, self.sigma)

    @property
    def alpha(self) -> float:
        return self.sigma ** -2

    @property
    def tau_max(self) -> float:
        """Fluctuation strength of an optimal (point-like) clock, in seconds."""
        k = self.constants
        if self.kind is ModelKind.CSL:
            return (k.hbar / k.m0) ** 2 * self.lam / k.c ** 4
        return k.hbar * k.G / (math.sqrt(math.pi) * k.c ** 4 * self.sigma)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict[str, object]:
        out: dict[str, object] = {"model": self.kind.value}
        if self.lam is not None:
            out["lambda_per_s"] = self.lam
        out["sigma_m"] = self.sigma
        return out

    def label(self) -> str:
        if self.kind is ModelKind.CSL:
            return f"csl(lambda={self.lam:.3g} 1/s, sigma={self.sigma:.3g} m)"
        return f"dp(sigma={self.sigma:.3g} m)"


def standard_params(kind, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> ModelParams:
    """Reference parameters: GRW values for CSL, sigma = 1 nm for DP."""
    kind = ModelKind.parse(kind)
    if kind is ModelKind.CSL:
        return ModelParams.csl(CSL_REF_LAMBDA, CSL_REF_SIGMA, constants)
    return ModelParams.dp(DP_REF_SIGMA, constants)


def gamma_from_lambda(lam: float, sigma: float) -> float:
    """Collapse strength gamma = lam * (4 pi sigma^2)^(3/2), in m^3/s."""
    lam = _require_positive("lambda", lam)
    sigma = _require_positive("sigma", sigma)
    return lam * (4.0 * math.pi * sigma * sigma) ** 1.5


def lambda_from_gamma(gamma: float, sigma: float) -> float:
    gamma = _require_positive("gamma", gamma)
    sigma = _require_positive("sigma", sigma)
    return gamma / (4.0 * math.pi * sigma * sigma) ** 1.5


@dataclass(frozen=True)
class BoundsReport:
    within_experimental_region: bool
    messages: tuple[str, ...] = ()


def check_bounds(params: ModelParams) -> BoundsReport:
    """Compare ``params`` with the experimentally allowed region.

    CSL bounds are strict on both sides; the DP lower bound on sigma is
    inclusive.
    """
    if params.kind is ModelKind.CSL:
        ok = CSL_LAMBDA_MIN < params.lam < CSL_LAMBDA_MAX
        msg = () if ok else (
            f"CSL collapse rate {params.lam:.3g} 1/s outside allowed range "
            f"({CSL_LAMBDA_MIN:g}, {CSL_LAMBDA_MAX:g}) 1/s",
        )
    else:
        ok = params.sigma >= DP_SIGMA_MIN
        msg = () if ok else (
            f"DP smearing length {params.sigma:.3g} m below lower bound {DP_SIGMA_MIN:g} m",
        )
    return BoundsReport(ok, msg)


def validate(params: ModelParams, strict: bool = False) -> BoundsReport:
    """Warn (or raise, if ``strict``) when ``params`` are experimentally excluded."""
    report = check_bounds(params)
    if not report.within_experimental_region:
        text = "; ".join(report.messages)
        if strict:
            raise ValueError(text)
        warnings.warn(text, BoundsWarning, stacklevel=2)
    return report
