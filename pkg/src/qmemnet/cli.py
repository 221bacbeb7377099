"""Command-line interface.

    qmemnet simulate CONFIG [--out DIR] [--seed N] [--truncation D] [--mode K=V ...]
    qmemnet preset NAME    [--out DIR] [--seed N] [--truncation D] [--mode K=V ...]
    qmemnet list-presets
    qmemnet validate CONFIG
    qmemnet plotdata CSV

--mode keys: inductance=bare|loaded, coupling_sign=sum|difference,
eof_h=squared|linear.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import (ANALYSES, ConfigError, ExperimentConfig,
                     config_from_preset, parse_config)
from .presets import PRESETS
from .runner import emit_plot_data, run_experiment

_MODE_KEYS = {"inductance": ("bare", "loaded"),
              "coupling_sign": ("sum", "difference"),
              "eof_h": ("squared", "linear")}


def _apply_modes(config: ExperimentConfig, mode_args: list[str]) -> ExperimentConfig:
    updates = {}
    for item in mode_args:
        if "=" not in item:
            raise SystemExit(f"--mode expects KEY=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        if key not in _MODE_KEYS:
            raise SystemExit(f"--mode: unknown key {key!r} (known: {', '.join(_MODE_KEYS)})")
        if val not in _MODE_KEYS[key]:
            raise SystemExit(f"--mode {key}: must be one of {_MODE_KEYS[key]}, got {val!r}")
        updates[key] = val
    if not updates:
        return config
    return replace(config, modes=replace(config.modes, **updates))


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for randomized analyses")
    p.add_argument("--truncation", type=int, default=None, help="Fock truncation per site")
    p.add_argument("--mode", action="append", default=[], metavar="KEY=VALUE",
                   help="override a convention flag (repeatable)")
    p.add_argument("--analyses", default=None,
                   help=f"comma list overriding the configured analyses ({', '.join(ANALYSES)})")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qmemnet",
                                     description="coupled quantum-memristor simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run an experiment from a config file")
    p_sim.add_argument("config", type=Path)
    _add_run_flags(p_sim)

    p_pre = sub.add_parser("preset", help="run a bundled preset")
    p_pre.add_argument("name", choices=sorted(PRESETS))
    _add_run_flags(p_pre)

    sub.add_parser("list-presets", help="list bundled presets")

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config", type=Path)

    p_plot = sub.add_parser("plotdata", help="emit gnuplot-ready columns from an analysis CSV")
    p_plot.add_argument("csv", type=Path)

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name in sorted(PRESETS):
            p = PRESETS[name]
            print(f"{name:8s} {p.circuit.topology:10s} {p.description}")
        return 0

    if args.command == "validate":
        try:
            parse_config(args.config.read_text())
        except ConfigError as exc:
            for err in exc.errors:
                print(f"error: {err}", file=sys.stderr)
            return 1
        print("OK")
        return 0

    if args.command == "plotdata":
        sys.stdout.write(emit_plot_data(args.csv))
        return 0

    if args.command == "simulate":
        try:
            config = parse_config(args.config.read_text())
        except ConfigError as exc:
            for err in exc.errors:
                print(f"error: {err}", file=sys.stderr)
            return 1
    else:
        config = config_from_preset(args.name)

    if args.truncation is not None:
        config = replace(config, truncation=args.truncation)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.analyses is not None:
        requested = tuple(sorted(a.strip() for a in args.analyses.split(",") if a.strip()))
        unknown = [a for a in requested if a not in ANALYSES]
        if unknown:
            raise SystemExit(f"unknown analyses: {', '.join(unknown)}")
        config = replace(config, analyses=requested)
    config = _apply_modes(config, args.mode)

    paths = run_experiment(config, output_dir=args.out)
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
