"""Experiment driver: `anosovlab run` / `anosovlab list`.

Configuration is flat key=value text read by configparser, one section
per experiment plus an optional [DEFAULT] section:

    [DEFAULT]
    seed = 123
    format = csv

    [cat-quantum]
    samples = 25
    t_min = -6
    t_max = 6
    tol_defect_base = 1e-8

Command-line flags override the file. Exit status is 0 iff every case
of the requested suite passed; configuration or I/O problems exit
non-zero with a one-line diagnostic.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import time

from .experiments import (
    EXPERIMENT_NAMES,
    ExperimentConfig,
    ExperimentReport,
    build_cases,
    default_config,
    describe,
    render_csv,
    render_json,
)

_INT_KEYS = {"seed", "samples", "n_steps", "invariance_trials", "max_index",
             "commutant_cases"}
_FLOAT_KEYS = {"t_min", "t_max", "s_min", "s_max", "eps"}
_STR_KEYS = {"out", "format", "survey_out"}


class ConfigError(ValueError):
    pass


def _apply_config_file(cfg: ExperimentConfig, path: str):
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if parser.has_section(cfg.experiment):
        section = parser[cfg.experiment]
    else:
        section = parser["DEFAULT"]
    for key, raw in section.items():
        try:
            _apply_key(cfg, key, raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config value {key} = {raw!r}: {exc}") from exc


def _apply_key(cfg: ExperimentConfig, key: str, raw: str):
    if key in _INT_KEYS:
        value = int(raw)
        if key == "seed":
            cfg.seed = value
        elif key == "samples":
            cfg.samples = value
        else:
            cfg.options[key] = value
    elif key in _FLOAT_KEYS:
        value = float(raw)
        if hasattr(cfg, key):
            setattr(cfg, key, value)
        else:
            cfg.options[key] = value
    elif key in _STR_KEYS:
        if key == "out":
            cfg.output_path = raw
        elif key == "survey_out":
            cfg.options["survey_out"] = raw
        else:
            cfg.fmt = raw
    elif key.startswith("tol_"):
        cfg.tolerances[key[4:]] = float(raw)
    elif key == "resolutions":
        cfg.options["resolutions"] = tuple(
            int(v) for v in raw.replace(",", " ").split()
        )
    elif key == "lambdas":
        cfg.options["lambdas"] = tuple(
            float(v) for v in raw.replace(",", " ").split()
        )
    else:
        raise ConfigError(f"unknown config key {key!r}")


def load_config(experiment: str, config_path: str | None = None,
                seed: int | None = None, out: str | None = None,
                fmt: str | None = None) -> ExperimentConfig:
    """Builtin defaults, overlaid by config file, environment, and flags."""
    if experiment not in EXPERIMENT_NAMES:
        raise ConfigError(
            f"unknown experiment {experiment!r}; run `anosovlab list`"
        )
    cfg = default_config(experiment)
    env_seed = os.environ.get("ANOSOVLAB_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"bad ANOSOVLAB_SEED {env_seed!r}") from exc
    if config_path is not None:
        _apply_config_file(cfg, config_path)
    if seed is not None:
        cfg.seed = seed
    if out is not None:
        cfg.output_path = out
    if fmt is not None:
        cfg.fmt = fmt
    if cfg.output_path is None:
        cfg.output_path = f"anosovlab-{experiment}.{cfg.fmt}"
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Execute the configured suite and write its report file."""
    start = time.perf_counter()
    cases = build_cases(cfg)
    duration = time.perf_counter() - start
    aggregate = all(c.passed for c in cases)
    report = ExperimentReport(
        experiment=cfg.experiment,
        verifies=describe(cfg.experiment),
        cases=cases,
        aggregate_pass=aggregate,
        duration=duration,
    )
    if cfg.fmt == "csv":
        text = render_csv(cases)
    else:
        text = render_json(cases, experiment=cfg.experiment,
                           verifies=report.verifies, aggregate=aggregate)
    # The report file carries no timing, so fixed seeds give fixed bytes.
    with open(cfg.output_path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)
    return report


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.experiment, args.config, args.seed, args.out,
                          args.format)
        report = run_experiment(cfg)
    except (ConfigError, OSError) as exc:
        print(f"anosovlab: error: {exc}", file=sys.stderr)
        return 2
    failures = sum(1 for c in report.cases if not c.passed)
    status = "PASS" if report.aggregate_pass else "FAIL"
    print(f"experiment:   {report.experiment}")
    print(f"verifies:     {report.verifies}")
    print(f"cases:        {len(report.cases)} ({failures} failed)")
    print(f"duration:     {report.duration:.3f}s")
    print(f"report:       {cfg.output_path}")
    print(f"result:       {status}")
    return 0 if report.aggregate_pass else 1


def _cmd_list(_args) -> int:
    for name in EXPERIMENT_NAMES:
        print(f"{name:20s} {describe(name)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anosovlab",
        description="run hyperbolicity verification suites and emit defect tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a named experiment suite")
    runp.add_argument("--experiment", required=True, metavar="NAME")
    runp.add_argument("--config", metavar="PATH", default=None,
                      help="flat key=value config file (sections per experiment)")
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--out", metavar="PATH", default=None)
    runp.add_argument("--format", choices=("csv", "json"), default=None)
    runp.set_defaults(func=_cmd_run)
    listp = sub.add_parser("list", help="list experiments with what they verify")
    listp.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
