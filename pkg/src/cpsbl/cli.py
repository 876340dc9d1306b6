"""Command line front end.

Subcommands: sweep (Monte Carlo NMSE table), trial (single trial), gradcheck
(gradient vs finite differences), dict-info (dictionary summary). System
settings come from an optional flat key=value config file, overridden by
repeated --set key=value flags, then by --seed. Every error path prints a
one-line diagnostic with a greppable prefix and a category-specific exit
status.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .cross_predictive import max_gradient_deviation
from .dictionary import build_polar_dictionary
from .harness import (
    ESTIMATORS,
    SWEEPABLE,
    SystemConfig,
    run_sweep,
    run_trial,
    write_results_table,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

GRADCHECK_TOLERANCE = 1e-5

# config file key -> (SystemConfig field, parser)
CONFIG_KEYS = {
    "m": ("num_antennas", int),
    "n": ("pilot_length", int),
    "k": ("num_users", int),
    "l": ("num_paths", int),
    "snr_db": ("snr_db", float),
    "wavelength": ("wavelength", float),
    "num_angle_bins": ("num_angle_bins", int),
    "coherence_beta": ("coherence_beta", float),
    "min_distance_frac": ("min_distance_frac", float),
    "esbl_nu": ("esbl_dof", float),
    "esbl_shape": ("esbl_shape", float),
    "esbl_scale": ("esbl_scale", float),
    "cpsbl_step": ("cpsbl_step", float),
    "cpsbl_iters": ("cpsbl_iters", int),
    "trials": ("num_trials", int),
    "seed": ("master_seed", int),
}


class ConfigError(ValueError):
    """Raised for unknown keys, bad values, or violated config invariants."""


class NumericCheckError(RuntimeError):
    """Raised when a numerical self-check exceeds its tolerance."""


def _parse_pair(line: str, source: str) -> tuple[str, str]:
    if "=" not in line:
        raise ConfigError(f"{source}: expected key=value, got {line!r}")
    key, value = line.split("=", 1)
    return key.strip(), value.strip()


def _convert(key: str, raw: str):
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    _, parser = CONFIG_KEYS[key]
    try:
        return parser(raw)
    except ValueError:
        raise ConfigError(
            f"invalid value for {key}: {raw!r} is not a valid {parser.__name__}"
        ) from None


def parse_config(path: str | None = None, overrides=()) -> SystemConfig:
    """Build a SystemConfig from a flat key=value file plus overrides.

    Unset keys keep the package defaults. Lines starting with '#' and blank
    lines are ignored. Overrides are key=value strings applied after the
    file. All violations are reported with the offending key named.
    """
    assignments: dict[str, object] = {}
    sources: dict[str, str] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                content = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
        for lineno, line in enumerate(content.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, raw = _parse_pair(line, f"{path}:{lineno}")
            assignments[key] = _convert(key, raw)
            sources[key] = f"{path}:{lineno}"
    for item in overrides:
        key, raw = _parse_pair(item, "override")
        assignments[key] = _convert(key, raw)
        sources[key] = "override"

    fields = {CONFIG_KEYS[key][0]: value for key, value in assignments.items()}
    try:
        config = SystemConfig(**fields)
    except ValueError as exc:
        # Map the failing field back to its config key for the message. A
        # cross-field message can mention several fields; the validator
        # names the violated one first.
        message = str(exc)
        candidates = [
            (message.index(field), key)
            for key, (field, _) in CONFIG_KEYS.items()
            if field in message and key in assignments
        ]
        if candidates:
            offender = min(candidates)[1]
            raise ConfigError(f"invalid value for {offender}: {message}") from None
        raise ConfigError(message) from None
    return config


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports errors through ConfigError."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpsbl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key; repeatable",
        )
        p.add_argument("--seed", type=int, default=None, help="override the seed")

    p_sweep = sub.add_parser("sweep", help="Monte Carlo NMSE sweep to a TSV table")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--variable", required=True, choices=SWEEPABLE, help="swept system variable"
    )
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated sweep values"
    )
    p_sweep.add_argument("--out", required=True, help="output table path")
    p_sweep.add_argument(
        "--jobs", type=int, default=1, help="parallel trial workers (default 1)"
    )

    p_trial = sub.add_parser("trial", help="run one trial and print per-estimator NMSE")
    add_common(p_trial)
    p_trial.add_argument("--trial-index", type=int, default=0)

    p_grad = sub.add_parser(
        "gradcheck", help="compare analytic and finite-difference gradients"
    )
    add_common(p_grad)

    p_info = sub.add_parser("dict-info", help="print polar dictionary summary")
    add_common(p_info)

    return parser


def _resolve_config(args) -> SystemConfig:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    return parse_config(args.config, overrides)


def _parse_values(variable: str, raw: str) -> list:
    values = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise ConfigError(f"invalid sweep value {token!r}") from None
        if variable != "snr_db":
            if value != int(value):
                raise ConfigError(
                    f"sweep variable {variable} takes integer values, got {token!r}"
                )
            value = int(value)
        values.append(value)
    if not values:
        raise ConfigError("no sweep values given")
    return values


def _cmd_sweep(args) -> int:
    config = _resolve_config(args)
    values = _parse_values(args.variable, args.values)
    result = run_sweep(config, (args.variable, values), n_jobs=args.jobs)
    write_results_table(result, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_trial(args) -> int:
    config = _resolve_config(args)
    if args.trial_index < 0:
        raise ConfigError("trial index must be non-negative")
    outcome = run_trial(config, args.trial_index)
    for name in ESTIMATORS:
        if outcome.valid[name]:
            ratio = outcome.squared_errors[name] / outcome.channel_energy
            print(f"{name}\t{ratio:.8g}")
        else:
            print(f"{name}\tinvalid")
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    config = _resolve_config(args)
    rng = np.random.default_rng(config.master_seed)
    worst = max_gradient_deviation(rng)
    print(f"max_relative_error\t{worst:.3e}")
    if not worst < GRADCHECK_TOLERANCE:
        raise NumericCheckError(
            f"gradient deviation {worst:.3e} exceeds {GRADCHECK_TOLERANCE:.0e}"
        )
    return EXIT_OK


def _cmd_dict_info(args) -> int:
    config = _resolve_config(args)
    dictionary = build_polar_dictionary(config.geometry(), config.grid_config())
    counts = dictionary.ring_counts()
    print(f"fraunhofer_m\t{config.fraunhofer():.6f}")
    print(f"num_atoms\t{dictionary.num_atoms}")
    print(f"num_angles\t{counts.shape[0]}")
    print("ring_counts\t" + ",".join(str(int(c)) for c in counts))
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "trial": _cmd_trial,
    "gradcheck": _cmd_gradcheck,
    "dict-info": _cmd_dict_info,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericCheckError as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
