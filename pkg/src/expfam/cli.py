"""Command-line interface.

Subcommands: density, predict, interval, coverage, verify.  Output is a
JSON object (or array) or RFC-4180 CSV on stdout; identical inputs and
seeds produce byte-identical output.  Exit codes: 0 success, 1 failed
verification, 2 input/domain error, 3 numerical non-convergence,
4 degenerate data.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from .errors import (
    DegenerateDataError,
    DomainError,
    ImproperPosteriorError,
    NoSignChangeError,
    NonConvergenceError,
    NonNormalizableError,
    SupportError,
)
from .families import (
    GammaFamily,
    GaussianLocationFamily,
    InverseGaussianFamily,
    PoissonExponentialFamily,
)
from .intervals import (
    METHOD_DIVERGENCE_BALL,
    coverage_simulation,
    gamma_confidence,
    gamma_credible,
    gaussian_divergence_ball,
    poisson_exp_confidence,
    poisson_exp_credible,
)
from .numerics import DEFAULT_TOL
from .prediction import as_batch, make_predictor
from .verify import available_suites, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_DEGENERATE = 4

FAMILIES = ("gamma", "gaussian", "inverse-gaussian", "poisson-exp")


def _parse_matrix(text):
    try:
        rows = [
            [float(entry) for entry in row.split(",")]
            for row in text.strip().split(";")
        ]
    except ValueError as exc:
        raise DomainError(f"cannot parse matrix {text!r}: {exc}") from None
    if len(rows) == 1 and len(rows[0]) == 1:
        return rows[0][0]
    return np.asarray(rows)


def _parse_vector(text):
    try:
        values = [float(entry) for entry in text.split(",")]
    except ValueError as exc:
        raise DomainError(f"cannot parse vector {text!r}: {exc}") from None
    return values[0] if len(values) == 1 else np.asarray(values)


def _load_config(path):
    config = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise DomainError(
                        f"{path}:{lineno}: expected key=value, got {line!r}"
                    )
                key, _, value = line.partition("=")
                config[key.strip()] = value.strip()
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from None
    return config


def _resolve(args, config, key, default, convert):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        try:
            return convert(config[key])
        except ValueError as exc:
            raise DomainError(f"bad config value for {key}: {exc}") from None
    return default


def _load_observations(path, d=1):
    rows = []
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    if d == 1:
                        rows.append(float(line))
                    else:
                        entries = [float(v) for v in line.split(",")]
                        if len(entries) != d:
                            raise ValueError(f"expected {d} coordinates")
                        rows.append(entries)
                except ValueError as exc:
                    raise DomainError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise DomainError(f"cannot read data file {path}: {exc}") from None
    if not rows:
        raise DomainError(f"data file {path} contains no observations")
    return np.asarray(rows)


def _make_family(args):
    if args.family is None:
        raise DomainError("--family is required")
    if args.family == "gamma":
        if args.shape is None:
            raise DomainError("gamma needs --shape")
        return GammaFamily(args.shape)
    if args.family == "gaussian":
        cov = 1.0 if args.cov is None else _parse_matrix(args.cov)
        return GaussianLocationFamily(cov)
    if args.family == "inverse-gaussian":
        if args.kappa is None:
            raise DomainError("inverse-gaussian needs --kappa")
        return InverseGaussianFamily(args.kappa)
    if args.family == "poisson-exp":
        if args.kappa is None:
            raise DomainError("poisson-exp needs --kappa")
        return PoissonExponentialFamily(args.kappa)
    raise DomainError(f"unknown family {args.family!r}")


def _theta_for(args, family):
    """Natural parameter from the user-facing parametrization."""
    if isinstance(family, (GammaFamily, PoissonExponentialFamily)):
        if args.rate is None:
            raise DomainError(f"{args.family} needs --rate")
        if args.rate <= 0:
            raise DomainError(f"--rate must be > 0, got {args.rate}")
        return -args.rate
    if args.mu is None:
        raise DomainError(f"{args.family} needs --mu")
    return family.mle(_parse_vector(args.mu))


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value)
    return str(value)


def _emit(records, fmt, out):
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        out.write(json.dumps(payload, indent=2))
        out.write("\n")
        return
    fieldnames = []
    for record in records:
        for key in record:
            if key not in fieldnames:
                fieldnames.append(key)
    writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\r\n")
    writer.writeheader()
    for record in records:
        writer.writerow({k: _csv_cell(v) for k, v in record.items()})


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def cmd_density(args, config):
    family = _make_family(args)
    if args.x is None:
        raise DomainError("density needs --x")
    x = _parse_vector(args.x)
    theta = _theta_for(args, family)
    record = {"family": args.family, "x": _jsonable(x)}
    if family.has_atom and np.ndim(x) == 0 and float(x) == family.atom_point:
        log_value = family.log_density(theta, float(x))
        record["value_type"] = "atom"
    else:
        log_value = family.log_density(theta, x)
        record["value_type"] = "density"
    record["value"] = math.exp(log_value)
    record["log_value"] = log_value
    return [record], EXIT_OK


def cmd_predict(args, config):
    family = _make_family(args)
    if args.data is None:
        raise DomainError("predict needs --data")
    if args.future is None:
        raise DomainError("predict needs --future")
    tol = _resolve(args, config, "tol", DEFAULT_TOL, float)
    prefix = _load_observations(args.data, family.d)
    future = np.atleast_1d(_parse_vector(args.future))
    horizon = future.shape[0]
    methods = ["cnml", "jeffreys"] if args.compare else [args.method]
    records = []
    values = {}
    for method in methods:
        predictor = make_predictor(method, family, horizon=horizon, tol=tol)
        predictor.fit(prefix)
        value = predictor.predictive_value(future)
        values[method] = value.log_density
        records.append(
            {
                "method": value.method,
                "m": int(prefix.shape[0]),
                "future": _jsonable(future),
                "log_density": value.log_density,
                "normalizer_error": value.normalizer_error,
            }
        )
    if args.compare:
        records.append(
            {
                "method": "compare",
                "abs_log_difference": abs(values["cnml"] - values["jeffreys"]),
            }
        )
    return records, EXIT_OK


def _interval_record(result):
    return {
        "lower": result.lower,
        "upper": result.upper,
        "level": result.level,
        "method": result.method,
        "diagnostics": _jsonable(result.diagnostics),
    }


def cmd_interval(args, config):
    family = _make_family(args)
    if args.data is None:
        raise DomainError("interval needs --data")
    level = _resolve(args, config, "level", 0.9, float)
    data = _load_observations(args.data, family.d)
    batch = as_batch(family, data)
    method = args.method
    if isinstance(family, GammaFamily):
        if method == "credible":
            result = gamma_credible(family.alpha, batch, level)
        elif method == "confidence":
            result = gamma_confidence(family.alpha, batch, level)
        else:
            raise DomainError(f"gamma supports credible/confidence, got {method!r}")
        return [_interval_record(result)], EXIT_OK
    if isinstance(family, PoissonExponentialFamily):
        if method == "credible":
            result = poisson_exp_credible(family.kappa, batch, level)
        elif method == "confidence":
            result = poisson_exp_confidence(family.kappa, batch, level)
        else:
            raise DomainError(
                f"poisson-exp supports credible/confidence, got {method!r}"
            )
        return [_interval_record(result)], EXIT_OK
    if isinstance(family, GaussianLocationFamily):
        if method != "divergence-ball":
            raise DomainError(f"gaussian supports divergence-ball, got {method!r}")
        region = gaussian_divergence_ball(family, batch, level)
        record = {
            "method": METHOD_DIVERGENCE_BALL,
            "center": _jsonable(region.center),
            "radius": region.radius,
            "level": region.level,
            "diagnostics": _jsonable(region.diagnostics),
        }
        return [record], EXIT_OK
    raise DomainError(f"no interval construction for family {args.family!r}")


def cmd_coverage(args, config):
    family = _make_family(args)
    level = _resolve(args, config, "level", 0.9, float)
    trials = int(_resolve(args, config, "trials", 100_000, float))
    seed = int(_resolve(args, config, "seed", 0, float))
    m = int(_resolve(args, config, "m", 1, float))
    theta_true = _theta_for(args, family)
    if isinstance(family, GammaFamily):
        ops = {
            "credible": lambda b: gamma_credible(family.alpha, b, level),
            "confidence": lambda b: gamma_confidence(family.alpha, b, level),
        }
    elif isinstance(family, PoissonExponentialFamily):
        ops = {
            "credible": lambda b: poisson_exp_credible(family.kappa, b, level),
            "confidence": lambda b: poisson_exp_confidence(family.kappa, b, level),
        }
    elif isinstance(family, GaussianLocationFamily):
        ops = {
            "divergence-ball": lambda b: gaussian_divergence_ball(family, b, level)
        }
    else:
        raise DomainError(f"no coverage simulation for family {args.family!r}")
    if args.method not in ops:
        raise DomainError(
            f"{args.family} supports methods {sorted(ops)}, got {args.method!r}"
        )
    report = coverage_simulation(
        family, ops[args.method], theta_true, m, level, trials, seed
    )
    record = {
        "family": args.family,
        "method": args.method,
        "level": report.level,
        "trials": report.trials,
        "hits": report.hits,
        "empirical_coverage": report.empirical_coverage,
        "three_sigma_band": list(report.three_sigma_band),
        "degenerate": report.degenerate,
        "within_band": report.within_band,
    }
    return [record], EXIT_OK


def cmd_verify(args, config):
    tol = _resolve(args, config, "tol", DEFAULT_TOL, float)
    seed = int(_resolve(args, config, "seed", 0, float))
    trials = int(_resolve(args, config, "trials", 100_000, float))
    reports = run_suite(args.suite, tol=tol, seed=seed, trials=trials)
    records = []
    for report in reports:
        record = {
            "check": report.check,
            "pass": report.passed,
            "statistic": report.statistic,
            "threshold": report.threshold,
            "detail": report.detail,
        }
        if args.timing:
            record["runtime"] = report.runtime
        records.append(record)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED
    return records, code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="expfam",
        description="Exponential-family densities, prediction, intervals and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--shape", type=float, help="gamma shape alpha")
        p.add_argument("--kappa", type=float, help="shape of the IG/compound family")
        p.add_argument("--cov", help="gaussian covariance, e.g. '1' or '2,0.3;0.3,0.5'")
        p.add_argument("--rate", type=float, help="rate beta (gamma, poisson-exp)")
        p.add_argument("--mu", help="location / mean parameter")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--level", type=float)
        p.add_argument("--m", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--data", help="file with one observation per line")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--config", help="flat key=value config file")

    p_density = sub.add_parser("density", help="evaluate a density or atom mass")
    add_common(p_density)
    p_density.add_argument("--x", help="evaluation point")
    p_density.set_defaults(handler=cmd_density)

    p_predict = sub.add_parser("predict", help="log predictive density of a suffix")
    add_common(p_predict)
    p_predict.add_argument(
        "--method", choices=("cnml", "jeffreys", "plugin"), default="cnml"
    )
    p_predict.add_argument("--future", help="future point(s), comma separated")
    p_predict.add_argument(
        "--compare", action="store_true", help="report CNML and Jeffreys side by side"
    )
    p_predict.set_defaults(handler=cmd_predict)

    p_interval = sub.add_parser("interval", help="one-sided interval or ball")
    add_common(p_interval)
    p_interval.add_argument(
        "--method",
        choices=("credible", "confidence", "divergence-ball"),
        default="credible",
    )
    p_interval.set_defaults(handler=cmd_interval)

    p_coverage = sub.add_parser("coverage", help="Monte Carlo coverage simulation")
    add_common(p_coverage)
    p_coverage.add_argument(
        "--method",
        choices=("credible", "confidence", "divergence-ball"),
        default="credible",
    )
    p_coverage.set_defaults(handler=cmd_coverage)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    add_common(p_verify)
    p_verify.add_argument("--suite", choices=available_suites(), default="all")
    p_verify.add_argument(
        "--timing", action="store_true", help="include per-check runtimes"
    )
    p_verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config) if getattr(args, "config", None) else {}
        records, code = args.handler(args, config)
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (
        NonNormalizableError,
        NonConvergenceError,
        ImproperPosteriorError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, SupportError, NoSignChangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    fmt = _resolve(args, config, "format", "json", str)
    _emit(records, fmt, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
