"""Command-line entry point: ``distilldyn <scenario> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import scenarios
from .errors import ConfigError, DistillDynError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _add_common(p: argparse.ArgumentParser, config_required: bool = False) -> None:
    p.add_argument("--config", required=config_required, help="key = value config file")
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-a", type=float, dest="gamma_a")
    p.add_argument("--gamma-b", type=float, dest="gamma_b")
    p.add_argument("--omega", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--d-values", dest="d_values",
                   type=lambda s: tuple(int(x) for x in s.split(",") if x.strip()),
                   help="comma-separated dimensions (fig2)")
    p.add_argument("--t-max", type=float, dest="t_max")
    p.add_argument("--dt", type=float)
    p.add_argument("--record-stride", type=int, dest="record_stride")
    p.add_argument("--out", dest="output", help="CSV path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distilldyn",
        description="Distillability of maximally entangled pairs under decoherence and dissipation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "fig1": "two-qubit fidelity under dissipation and dephasing master equations",
        "fig2": "critical time of the first-order reduction value versus dimension",
        "fig3": "reduction value for spin pairs under dissipation and dephasing",
        "kraus2x2": "two-qubit Kraus-channel fidelity, reduction and PT curves",
    }
    for name, text in helps.items():
        _add_common(sub.add_parser(name, help=text))
    custom = sub.add_parser("custom", help="run the scenario described by a config file")
    _add_common(custom, config_required=True)
    custom.add_argument("--model", choices=scenarios.MODELS)
    custom.add_argument("--initial", choices=scenarios.INITIAL_STATES)
    custom.add_argument("--sides", choices=("one", "two"))
    return parser


_OVERRIDES = ("gamma", "gamma_a", "gamma_b", "omega", "d", "d_values", "t_max", "dt",
              "record_stride", "output", "model", "initial", "sides")


def load_config(args: argparse.Namespace) -> scenarios.ScenarioConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = scenarios.parse_config(fh.read())
        if args.command != "custom" and cfg.scenario != args.command:
            raise ConfigError(
                f"config is for scenario {cfg.scenario!r}, not {args.command!r}", key="scenario"
            )
    else:
        cfg = scenarios.with_defaults(scenarios.ScenarioConfig(scenario=args.command))
    changes = {k: getattr(args, k, None) for k in _OVERRIDES}
    return scenarios.override(cfg, **changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = scenarios.run(cfg, jobs=max(1, args.jobs))
    except DistillDynError as exc:
        print(f"numerical failure in {cfg.scenario}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = table.to_csv()
    if cfg.output:
        scenarios.write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
