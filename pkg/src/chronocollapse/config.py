"""Flat ``key = value`` configuration files shared by all CLI commands.

Format: UTF-8 text, one ``key = value`` pair per line, ``#`` starts a
comment, blank lines ignored, keys are case-sensitive and unique.

Model keys::

    model = csl            # or dp
    lambda_per_s = 1e-16   # CSL only
    sigma_m = 1e-7
    nucleon = proton       # optional: proton | neutron | amu

Stability keys (indexed from 0, contiguous)::

    segments[0].A = 1e-17
    segments[0].p = -0.5
    segments[0].t_min_s = 1
    segments[0].t_max_s = 1e6
    radius_m = 1.2e4       # optional clock radius
"""

from __future__ import annotations

import os

from .params import DEFAULT_CONSTANTS, NUCLEON_MASSES, ModelKind, ModelParams, PhysicalConstants

MODEL_KEYS = ("model", "lambda_per_s", "sigma_m", "nucleon")


def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"config line {lineno}: empty key")
        if key in out:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path: str | os.PathLike) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(values: dict[str, object]) -> str:
    lines = []
    for key, value in values.items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _float(values: dict[str, str], key: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ValueError(f"config key {key!r}: not a number: {values[key]!r}") from None


def params_from_config(values: dict[str, str]) -> ModelParams:
    """Build :class:`ModelParams` from parsed config values."""
    if "model" not in values:
        raise ValueError("config missing required key 'model'")
    kind = ModelKind.parse(values["model"])
    if "sigma_m" not in values:
        raise ValueError("config missing required key 'sigma_m'")
    constants = DEFAULT_CONSTANTS
    if "nucleon" in values:
        constants = PhysicalConstants.with_nucleon(values["nucleon"])
    sigma = _float(values, "sigma_m")
    if kind is ModelKind.CSL:
        if "lambda_per_s" not in values:
            raise ValueError("CSL config requires 'lambda_per_s'")
        return ModelParams.csl(_float(values, "lambda_per_s"), sigma, constants)
    if "lambda_per_s" in values:
        raise ValueError("DP config must not set 'lambda_per_s'")
    return ModelParams.dp(sigma, constants)


def params_to_config(params: ModelParams) -> str:
    values = params.as_dict()
    for name, mass in NUCLEON_MASSES.items():
        if params.constants == PhysicalConstants(m0=mass) and name != "proton":
            values["nucleon"] = name
    return format_config(values)
