"""Command-line interface.

    qparamag sweep  --config cfg.toml [--model exact] [--two-s 2]
                    [--temps 0.2:50:12 | 0.2:50:12:lin] [--ns 8]
                    [--seed 7] --out sweep.csv [--format csv|json]
    qparamag oracle --config cfg.toml --out oracle.csv [--format csv|json]
    qparamag validate

Flags override the corresponding config keys. Exit codes: 0 success,
1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .dynamics import NumericalError
from .harness import ConfigError, SweepConfig, emit, oracle_sweep, run_sweep
from .validate import run_validation

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _parse_temps(spec: str):
    """Parse 'a:b:n', optionally suffixed ':log'/':lin' or '(log)'/'(lin)'."""
    text = spec.strip().lower()
    spacing = "log"
    for suffix, name in (("(log)", "log"), ("(lin)", "linear"),
                         ("(linear)", "linear")):
        if text.endswith(suffix):
            spacing = name
            text = text[: -len(suffix)]
    parts = text.split(":")
    if len(parts) == 4:
        tag = parts.pop()
        if tag in ("log",):
            spacing = "log"
        elif tag in ("lin", "linear"):
            spacing = "linear"
        else:
            raise ConfigError(f"bad temperature spacing {tag!r}")
    if len(parts) != 3:
        raise ConfigError(f"--temps must look like a:b:n, got {spec!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as err:
        raise ConfigError(f"bad --temps {spec!r}: {err}") from err
    return lo, hi, count, spacing


def _load_config(args) -> SweepConfig:
    cfg = SweepConfig.from_file(args.config) if args.config else SweepConfig()
    overrides = {}
    if getattr(args, "model", None) is not None:
        overrides["model"] = args.model
    if getattr(args, "two_s", None) is not None:
        overrides["two_s"] = args.two_s
    if getattr(args, "ns", None) is not None:
        overrides["n_s"] = args.ns
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "temps", None) is not None:
        lo, hi, count, spacing = _parse_temps(args.temps)
        overrides.update(temperatures=None, temp_min=lo, temp_max=hi,
                         temp_count=count, temp_spacing=spacing)
    return cfg.with_overrides(**overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qparamag",
        description="Thermal expectation values of a single paramagnetic "
                    "spin from stochastic moment dynamics, with an exact "
                    "level-sum reference.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run dynamics over a temperature grid")
    sweep.add_argument("--config", help="TOML config file")
    sweep.add_argument("--model", help="classical | hight:N | exact")
    sweep.add_argument("--two-s", dest="two_s", type=int,
                       help="twice the spin quantum number")
    sweep.add_argument("--temps", help="a:b:n temperature grid, log-spaced "
                                       "(append :lin for linear)")
    sweep.add_argument("--ns", type=int, help="noise realisations per point")
    sweep.add_argument("--seed", type=int, help="ensemble RNG seed")
    sweep.add_argument("--out", required=True, help="output path")
    sweep.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: from --out extension)")

    orc = sub.add_parser("oracle", help="exact reference columns only")
    orc.add_argument("--config", help="TOML config file")
    orc.add_argument("--two-s", dest="two_s", type=int)
    orc.add_argument("--temps")
    orc.add_argument("--out", required=True)
    orc.add_argument("--format", choices=("csv", "json"), default=None)

    sub.add_parser("validate", help="run the invariant self-checks")
    return parser


def _format_for(args) -> str:
    if args.format:
        return args.format
    return "json" if args.out.lower().endswith(".json") else "csv"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            checks = run_validation()
            for name, ok, detail in checks:
                status = "PASS" if ok else "FAIL"
                print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
            return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_NUMERICAL
        config = _load_config(args)
        if args.command == "sweep":
            result = run_sweep(config)
        else:
            result = oracle_sweep(config)
        emit(result, args.out, _format_for(args))
        print(f"wrote {len(result.points)} rows to {args.out}")
        return EXIT_OK
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
