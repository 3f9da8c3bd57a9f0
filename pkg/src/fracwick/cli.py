"""Command-line entry point.

    fracwick <suite> --config experiment.yaml [--seed N] [--out DIR] [--plots]

Exit status: 0 when every check passes, 1 when a numerical check fails
(the failing checks are named on stderr), 2 for configuration problems.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import SUITE_NAMES, ExperimentConfig, config_from_mapping, load_config
from .errors import ConfigError, FracwickError, LongMemoryRequiredError
from .suites import run_suite

_SUITE_HELP = {
    "generate": "sample paths with each generator and check terminal moments",
    "verify-ito": "Monte Carlo residuals of the change-of-variable identity",
    "verify-product-rule": "Monte Carlo residuals of the product rule",
    "verify-wentzell": "Monte Carlo residuals of the composed-field identity",
    "girsanov": "shifted-path expectation against the reweighted one",
    "isometry": "second-moment identity of the Wick integral",
    "solve-sde": "integrate an additive-noise equation and test its moments",
    "converge": "rms residual ladder over nested grid refinements",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracwick",
        description="numerical checks for long-memory stochastic calculus",
    )
    sub = parser.add_subparsers(dest="suite", metavar="suite")
    sub.required = True
    for name in SUITE_NAMES:
        sp = sub.add_parser(name, help=_SUITE_HELP[name])
        sp.add_argument("--config", metavar="FILE", help="YAML experiment config")
        sp.add_argument("--seed", type=int, metavar="N", help="override master_seed")
        sp.add_argument("--out", metavar="DIR", help="override output_dir")
        sp.add_argument(
            "--plots", action="store_true", default=None, help="emit SVG plots"
        )
    return parser


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config, args.suite)
    else:
        cfg = config_from_mapping(args.suite, {})
    overrides = {}
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must satisfy 0 <= seed < 2**64")
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.plots is not None:
        overrides["plots"] = True
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        manifest = run_suite(cfg)
    except (ConfigError, LongMemoryRequiredError) as exc:
        print(f"fracwick: config error: {exc}", file=sys.stderr)
        return 2
    except FracwickError as exc:
        print(f"fracwick: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for name in manifest.failures:
        print(f"fracwick: FAILED check: {name}", file=sys.stderr)
    status = "pass" if manifest.all_pass else "FAIL"
    print(
        f"{manifest.suite}: {manifest.rows} checks, "
        f"{len(manifest.failures)} failed [{status}] "
        f"({manifest.wall_seconds:.1f}s, artifacts in {cfg.output_dir})"
    )
    return 0 if manifest.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
