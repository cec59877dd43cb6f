"""Command-line front end.

All physical inputs are SI. Exit codes: 0 success, 1 invalid input,
2 I/O failure, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import __version__, rng
from ._io import csv_text, fmt, json_text, write_text
from .config import MODEL_KEYS, load_config, params_from_config
from .kernels import kernel_shape, kernel_smeared
from .noise_sim import DecoherenceSetup, decoherence_mc, decoherence_rate, drift_csv, drift_ensemble
from .params import (
    DEFAULT_CONSTANTS,
    NUCLEON_MASSES,
    BoundsWarning,
    ModelKind,
    ModelParams,
    PhysicalConstants,
    standard_params,
    validate,
)
from .scan import (
    DEFAULT_DP_SIGMA_MAX,
    BandBounds,
    ScanSpec,
    ScanVariable,
    headline_numbers,
    headline_text,
    rows_to_csv,
    rows_to_json,
    run_scan,
)
from .stability import (
    PRESETS,
    StabilityModel,
    clock_delta_t,
    collapse_tau_for_clock,
    collapse_to_clock_ratio,
    crossover_time,
    get_preset,
)
from .tau import (
    ClockGeometry,
    ConvergenceError,
    tau_asymptotic_large,
    tau_asymptotic_small,
    tau_monte_carlo,
    tau_quadrature,
)

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3

STABILITY_KEY_PREFIX = "segments["
STABILITY_KEYS = ("radius_m",)


class UsageError(ValueError):
    pass


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    # Flags whose default is resolved later carry their own "[default: ...]" note.
    def _get_help_string(self, action):
        if action.default is None or isinstance(action.default, bool):
            return action.help
        return super()._get_help_string(action)


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        kwargs.setdefault("formatter_class", _HelpFormatter)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    value = int(float(text))
    if value < 1 or value != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _seed(text):
    try:
        return rng.check_seed(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a non-negative integer, got {text!r}") from None


def _add_model_args(p):
    g = p.add_argument_group("model (SI units; flags override --config)")
    g.add_argument("--config", help="key = value file (model, lambda_per_s, sigma_m, nucleon)")
    g.add_argument("--model", choices=["csl", "dp"], help="collapse model [default: csl]")
    g.add_argument("--lambda-per-s", "--lambda", dest="lam", type=float,
                   help="CSL collapse rate in 1/s [default: 1e-16]")
    g.add_argument("--sigma-m", "--sigma", dest="sigma", type=float,
                   help="smearing length in m [default: 1e-7 CSL, 1e-9 DP]")
    g.add_argument("--nucleon", choices=sorted(NUCLEON_MASSES), help="reference mass m0 [default: proton]")
    g.add_argument("--strict", action="store_true", help="reject parameters outside experimental bounds")


def _add_seed_arg(p):
    p.add_argument("--seed", type=_seed, default=None,
                   help="RNG seed [default: $CHRONO_SEED or 0]")


def _add_out_args(p, formats=("csv", "json")):
    p.add_argument("--out", help="output file path [default: standard output]")
    p.add_argument("--format", choices=formats, default=formats[0], help="output format")


def _config_values(args) -> dict[str, str]:
    if not getattr(args, "config", None):
        return {}
    values = load_config(args.config)
    unknown = [
        k for k in values
        if k not in MODEL_KEYS and k not in STABILITY_KEYS and not k.startswith(STABILITY_KEY_PREFIX)
    ]
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return values


def resolve_model(args) -> ModelParams:
    values = {k: v for k, v in _config_values(args).items() if k in MODEL_KEYS}
    if args.model is not None:
        if "model" in values and ModelKind.parse(values["model"]).value != args.model:
            values = {k: v for k, v in values.items() if k == "nucleon"}
        values["model"] = args.model
    values.setdefault("model", "csl")
    if args.nucleon is not None:
        values["nucleon"] = args.nucleon
    ref = standard_params(values["model"])
    if args.sigma is not None:
        values["sigma_m"] = repr(args.sigma)
    values.setdefault("sigma_m", repr(ref.sigma))
    if ref.kind is ModelKind.CSL:
        if args.lam is not None:
            values["lambda_per_s"] = repr(args.lam)
        values.setdefault("lambda_per_s", repr(ref.lam))
    elif args.lam is not None:
        raise ValueError("--lambda-per-s applies to the CSL model only")
    params = params_from_config(values)
    validate(params, strict=args.strict)
    return params


def _constants(args) -> PhysicalConstants:
    if getattr(args, "nucleon", None):
        return PhysicalConstants.with_nucleon(args.nucleon)
    return DEFAULT_CONSTANTS


def _seed_of(args) -> int:
    return rng.default_seed() if args.seed is None else args.seed


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _kv_text(pairs) -> str:
    return "".join(f"{k} = {fmt(v)}\n" for k, v in pairs)


# -- subcommands -------------------------------------------------------------

def cmd_kernel(args):
    model = resolve_model(args)
    if not (0 <= args.u_min < args.u_max):
        raise ValueError("need 0 <= --u-min < --u-max")
    u = np.linspace(args.u_min, args.u_max, args.count)
    r = u * model.sigma
    values = kernel_smeared(model, r)
    shape = kernel_shape(model.kind, u)
    header = ("u", "r_m", "kernel_si", "shape")
    rows = list(zip(u, r, values, shape))
    if args.format == "json":
        meta = {"code": "chronocollapse", "version": __version__, "model": model.as_dict(),
                "constants": model.constants.as_dict()}
        return _emit(args, json_text(meta, [dict(zip(header, row)) for row in rows]))
    _emit(args, csv_text(header, rows))


def cmd_tau(args):
    model = resolve_model(args)
    radius = model.sigma if args.radius is None else args.radius
    geom = ClockGeometry(radius)
    if args.method == "quadrature":
        res = tau_quadrature(model, geom)
    elif args.method == "monte-carlo":
        res = tau_monte_carlo(model, geom, args.n, _seed_of(args), workers=args.workers)
    elif args.method == "asymptotic-large":
        res = tau_asymptotic_large(model, geom)
    else:
        res = tau_asymptotic_small(model)
    pairs = [
        ("model", model.kind.value),
        ("radius_m", radius),
        ("rho", radius / model.sigma),
        ("method", getattr(res.method, "value", res.method)),
        ("tau_s", res.tau),
        ("stderr_s", res.stderr),
        ("tau_max_s", model.tau_max),
        ("tau_over_tau_max", res.tau / model.tau_max),
    ]
    if res.n_samples is not None:
        pairs += [("n_samples", res.n_samples), ("seed", _seed_of(args))]
    _emit(args, _kv_text(pairs))


def cmd_drift(args):
    if args.tau_s is not None:
        if args.tau_s < 0:
            raise ValueError("--tau-s must be non-negative")
        tau = args.tau_s
    else:
        model = resolve_model(args)
        tau = model.tau_max if args.radius is None else tau_quadrature(model, ClockGeometry(args.radius)).tau
    if not args.t_max_s > 0:
        raise ValueError("--t-max-s must be positive")
    t = np.linspace(0.0, args.t_max_s, args.steps + 1)
    ens = drift_ensemble(tau, t, args.realizations, _seed_of(args))
    _emit(args, drift_csv(t, ens))


def cmd_decohere(args):
    model = resolve_model(args)
    setup = DecoherenceSetup(args.mass_kg, args.separation_m, model)
    rate = decoherence_rate(setup)
    pairs = [("model", model.kind.value), ("mass_kg", args.mass_kg),
             ("separation_m", args.separation_m), ("rate_per_s", rate)]
    if args.time_s is not None:
        est = decoherence_mc(setup, args.time_s, args.n, _seed_of(args), n_steps=args.steps)
        pairs += [
            ("time_s", args.time_s),
            ("expected_coherence", est.expected),
            ("mc_coherence_modulus", est.modulus),
            ("mc_stderr", est.stderr),
            ("n", est.n),
            ("seed", _seed_of(args)),
        ]
    _emit(args, _kv_text(pairs))


def cmd_stability(args):
    values = _config_values(args)
    if any(k.startswith(STABILITY_KEY_PREFIX) for k in values):
        clock = StabilityModel.from_config(
            {k: v for k, v in values.items() if k not in MODEL_KEYS}, name=args.config
        )
    else:
        clock = get_preset(args.preset)
    model = resolve_model(args)
    tau = collapse_tau_for_clock(model, clock)
    times = args.time_s or [clock.t_min]
    rows = []
    for t in times:
        rows.append((t, clock.sigma_y(t), clock_delta_t(clock, t), math.sqrt(tau * t),
                     collapse_to_clock_ratio(tau, clock, t)))
    cross = crossover_time(tau, clock) if tau > 0 else None
    text = csv_text(("t_s", "sigma_y", "clock_delta_t_s", "collapse_delta_t_s", "ratio"), rows)
    text += f"# clock = {clock.name}, tau = {fmt(tau)} s, crossover_s = {fmt(cross) if cross else 'none'}\n"
    _emit(args, text)


def cmd_scan(args):
    variable = ScanVariable(args.variable)
    if args.config or args.model:
        models = [resolve_model(args)]
    else:
        models = [standard_params(k, _constants(args)) for k in args.models.split(",")]
    if variable is ScanVariable.RADIUS_RATIO:
        lo, hi, count = args.min or 0.01, args.max or 1000.0, args.count
        spec = ScanSpec(variable, lo, hi, count, tuple(models), constants=_constants(args))
    else:
        k = _constants(args)
        lo, hi, count = args.min or 1.0, args.max or k.age_of_universe, args.count
        bounds = BandBounds(
            (args.lambda_min, args.lambda_max), (args.dp_sigma_min, args.dp_sigma_max)
        )
        spec = ScanSpec(variable, lo, hi, count, tuple(models), bounds, args.clock_radius_m, k)
    rows = run_scan(spec)
    _emit(args, rows_to_json(spec, rows) if args.format == "json" else rows_to_csv(spec, rows))


def cmd_headline(args):
    k = _constants(args)
    entries = headline_numbers(k)
    if args.format == "json":
        meta = {"code": "chronocollapse", "version": __version__, "constants": k.as_dict(),
                "t_s": k.seconds_per_year}
        rows = [e.__dict__ for e in entries]
        return _emit(args, json_text(meta, rows))
    _emit(args, headline_text(entries, k))


def cmd_constants(args):
    _emit(args, _kv_text(_constants(args).as_dict().items()))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chronocollapse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", help="tabulate the smeared correlation kernel")
    _add_model_args(p)
    p.add_argument("--u-min", type=float, default=0.0, help="smallest r/sigma")
    p.add_argument("--u-max", type=float, default=10.0, help="largest r/sigma")
    p.add_argument("--count", type=_positive_int, default=101, help="grid points (linear)")
    _add_out_args(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("tau", help="fluctuation strength of a spherical clock")
    _add_model_args(p)
    p.add_argument("--radius-m", "--radius", dest="radius", type=float,
                   help="clock radius in m [default: sigma]")
    p.add_argument("--method", choices=["quadrature", "monte-carlo", "asymptotic-large", "max"],
                   default="quadrature", help="evaluation method")
    p.add_argument("--n", type=_positive_int, default=1_000_000, help="Monte Carlo pair count")
    p.add_argument("--workers", type=_positive_int, default=None, help="Monte Carlo threads")
    _add_seed_arg(p)
    p.add_argument("--out", help="output file path [default: standard output]")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("drift", help="simulate clock drift trajectories (CSV: t_s, delta_t_s, realization_id)")
    _add_model_args(p)
    p.add_argument("--tau-s", type=float, help="fluctuation strength in s [default: from model]")
    p.add_argument("--radius-m", "--radius", dest="radius", type=float,
                   help="clock radius in m for tau [default: optimal clock]")
    p.add_argument("--t-max-s", type=float, default=DEFAULT_CONSTANTS.seconds_per_year, help="duration in s")
    p.add_argument("--steps", type=_positive_int, default=100, help="time steps")
    p.add_argument("--realizations", type=_positive_int, default=10, help="number of trajectories")
    _add_seed_arg(p)
    p.add_argument("--out", help="output CSV path [default: standard output]")
    p.set_defaults(func=cmd_drift)

    p = sub.add_parser("decohere", help="two-point-mass decoherence rate and Monte Carlo check")
    _add_model_args(p)
    p.add_argument("--mass-kg", type=float, required=True, help="mass of each branch in kg")
    p.add_argument("--separation-m", type=float, required=True, help="branch separation in m")
    p.add_argument("--time-s", type=float, help="run the Monte Carlo check at this time in s")
    p.add_argument("--n", type=_positive_int, default=100_000, help="Monte Carlo realizations")
    p.add_argument("--steps", type=_positive_int, default=1, help="noise increments per realization")
    _add_seed_arg(p)
    p.add_argument("--out", help="output file path [default: standard output]")
    p.set_defaults(func=cmd_decohere)

    p = sub.add_parser("stability", help="compare collapse noise with a clock stability model")
    _add_model_args(p)
    p.add_argument("--preset", choices=sorted(PRESETS), default="optical_lattice",
                   help="stability preset (ignored when --config has segments)")
    p.add_argument("--time-s", type=float, action="append",
                   help="averaging time in s; repeatable [default: start of the model range]")
    p.add_argument("--out", help="output file path [default: standard output]")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("scan", help="tau vs R/sigma or Delta_t vs t tables")
    _add_model_args(p)
    p.add_argument("--variable", choices=[v.value for v in ScanVariable], default="radius",
                   help="scan abscissa")
    p.add_argument("--models", default="csl,dp",
                   help="comma-separated reference models (when --model/--config absent)")
    p.add_argument("--min", type=float, help="grid minimum [default: 0.01 rho or 1 s]")
    p.add_argument("--max", type=float, help="grid maximum [default: 1000 rho or age of universe]")
    p.add_argument("--count", type=_positive_int, default=61, help="grid points (log spaced)")
    p.add_argument("--lambda-min", type=float, default=1e-20, help="CSL band lower rate in 1/s")
    p.add_argument("--lambda-max", type=float, default=1e-11, help="CSL band upper rate in 1/s")
    p.add_argument("--dp-sigma-min", type=float, default=4.94e-10, help="DP band smallest sigma in m")
    p.add_argument("--dp-sigma-max", type=float, default=DEFAULT_DP_SIGMA_MAX,
                   help="DP band largest sigma in m (artifact choice)")
    p.add_argument("--clock-radius-m", type=float, default=None,
                   help="finite clock radius for time scans [default: optimal clocks]")
    _add_out_args(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("headline", help="one-year time uncertainty at the reference parameters")
    p.add_argument("--nucleon", choices=sorted(NUCLEON_MASSES), help="reference mass m0 [default: proton]")
    _add_out_args(p, formats=("text", "json"))
    p.set_defaults(func=cmd_headline)

    p = sub.add_parser("constants", help="print the physical constants in use")
    p.add_argument("--nucleon", choices=sorted(NUCLEON_MASSES), help="reference mass m0 [default: proton]")
    p.add_argument("--out", help="output file path [default: standard output]")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("always", BoundsWarning)
            warnings.showwarning = _show_warning
            args.func(args)
    except (ConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
