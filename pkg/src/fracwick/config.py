"""Experiment configuration: YAML in, validated dataclass out.

Validation is strict: unknown keys at any nesting level raise ConfigError,
as do wrong types or out-of-range values. An unrecognized key is almost
always a typo of a recognized one, and silently ignoring it would run a
different experiment than the one the user wrote down.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import yaml

from .errors import ConfigError

SUITE_NAMES = (
    "generate",
    "verify-ito",
    "verify-product-rule",
    "verify-wentzell",
    "girsanov",
    "isometry",
    "solve-sde",
    "converge",
)

_GENERATOR_CHOICES = ("cholesky", "circulant", "hosking")
_SOLVER_CHOICES = ("flow-euler", "flow-rk4", "direct-euler", "picard")
_RESIDUAL_CHOICES = ("ito", "product-rule", "wentzell")

# key -> (python type, brief description); bool checked before int since
# bool is an int subclass in Python.
_COMMON_KEYS = {
    "suite": (str, "suite name"),
    "hurst": (float, "Hurst exponent in (0, 1)"),
    "horizon": (float, "time horizon T > 0"),
    "master_seed": (int, "master seed, 0 <= seed < 2**64"),
    "output_dir": (str, "artifact directory"),
    "plots": (bool, "emit SVG plots"),
    "n_paths": (int, "ensemble size"),
    "grid_n": (int, "number of grid cells"),
}

_SUITE_EXTRA = {
    "generate": {"generators": (list, "generator names")},
    "verify-ito": {"cases": (list, "case names")},
    "verify-product-rule": {},
    "verify-wentzell": {"cases": (list, "case names")},
    "girsanov": {"cases": (list, "case names")},
    "isometry": {},
    "solve-sde": {
        "sde": (dict, "equation block"),
        "solver": (str, "solver name"),
        "checkpoints": (list, "report times"),
        "tol": (float, "picard tolerance"),
    },
    "converge": {
        "residual": (str, "residual family"),
        "case": (str, "case name"),
        "grid_sizes": (list, "grid ladder"),
    },
}

_SDE_KEYS = {
    "kind": (str, "equation kind"),
    "lam": (float, "mean-reversion rate"),
    "sigma": (float, "noise amplitude"),
    "x0": (float, "initial value"),
}


@dataclass(frozen=True)
class SdeBlock:
    kind: str = "fou"
    lam: float = 1.0
    sigma: float = 1.0
    x0: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    suite: str
    hurst: float = 0.7
    horizon: float = 1.0
    master_seed: int = 0
    output_dir: str = "fracwick-out"
    plots: bool = False
    n_paths: int = 2000
    grid_n: int = 256
    generators: tuple[str, ...] = _GENERATOR_CHOICES
    cases: tuple[str, ...] = ()
    sde: SdeBlock = field(default_factory=SdeBlock)
    solver: str = "flow-rk4"
    checkpoints: tuple[float, ...] = (0.5, 1.0)
    tol: float = 1e-10
    residual: str = "ito"
    case: str = "x2"
    grid_sizes: tuple[int, ...] = (32, 64, 128, 256)


def _type_name(tp: type) -> str:
    return {float: "number", int: "integer", str: "string", bool: "boolean", list: "list", dict: "mapping"}[tp]


def _check_type(key: str, value: Any, tp: type) -> Any:
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"key '{key}' must be a boolean, got {value!r}")
        return value
    if isinstance(value, bool):
        raise ConfigError(f"key '{key}' must be a {_type_name(tp)}, got a boolean")
    if tp is float:
        if not isinstance(value, (int, float)):
            raise ConfigError(f"key '{key}' must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, tp):
        raise ConfigError(f"key '{key}' must be a {_type_name(tp)}, got {value!r}")
    return value


def _scalar_list(key: str, value: list, tp: type) -> tuple:
    out = []
    for i, item in enumerate(value):
        out.append(_check_type(f"{key}[{i}]", item, tp))
    return tuple(out)


def _parse_sde_block(raw: dict) -> SdeBlock:
    unknown = set(raw) - set(_SDE_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s) under 'sde': {sorted(unknown)}")
    vals: dict[str, Any] = {}
    for key, value in raw.items():
        tp, _ = _SDE_KEYS[key]
        vals[key] = _check_type(f"sde.{key}", value, tp)
    block = SdeBlock(**vals)
    if block.kind != "fou":
        raise ConfigError(f"sde.kind must be 'fou', got {block.kind!r}")
    if block.lam < 0:
        raise ConfigError("sde.lam must be nonnegative")
    return block


def config_from_mapping(suite: str, raw: dict | None) -> ExperimentConfig:
    """Validate a parsed YAML mapping for the given suite."""
    if suite not in SUITE_NAMES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {SUITE_NAMES}")
    raw = dict(raw or {})
    allowed = dict(_COMMON_KEYS)
    allowed.update(_SUITE_EXTRA[suite])
    unknown = set(raw) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) for suite '{suite}': {sorted(unknown)}")

    vals: dict[str, Any] = {}
    for key, value in raw.items():
        tp, _ = allowed[key]
        vals[key] = _check_type(key, value, tp)

    declared = vals.pop("suite", suite)
    if declared != suite:
        raise ConfigError(
            f"config declares suite {declared!r} but was run as {suite!r}"
        )

    if "generators" in vals:
        vals["generators"] = _scalar_list("generators", vals["generators"], str)
        for g in vals["generators"]:
            if g not in _GENERATOR_CHOICES:
                raise ConfigError(f"unknown generator {g!r}; choose from {_GENERATOR_CHOICES}")
        if not vals["generators"]:
            raise ConfigError("generators must not be empty")
    if "cases" in vals:
        vals["cases"] = _scalar_list("cases", vals["cases"], str)
    if "checkpoints" in vals:
        vals["checkpoints"] = _scalar_list("checkpoints", vals["checkpoints"], float)
    if "grid_sizes" in vals:
        vals["grid_sizes"] = _scalar_list("grid_sizes", vals["grid_sizes"], int)
    if "sde" in vals:
        vals["sde"] = _parse_sde_block(vals["sde"])

    cfg = ExperimentConfig(suite=suite, **vals)

    if not 0.0 < cfg.hurst < 1.0:
        raise ConfigError(f"hurst must lie in (0, 1), got {cfg.hurst}")
    if cfg.horizon <= 0:
        raise ConfigError("horizon must be positive")
    if not 0 <= cfg.master_seed < 2**64:
        raise ConfigError("master_seed must satisfy 0 <= seed < 2**64")
    if cfg.n_paths < 1:
        raise ConfigError("n_paths must be at least 1")
    if cfg.grid_n < 1:
        raise ConfigError("grid_n must be at least 1")
    if cfg.solver not in _SOLVER_CHOICES:
        raise ConfigError(f"unknown solver {cfg.solver!r}; choose from {_SOLVER_CHOICES}")
    if cfg.residual not in _RESIDUAL_CHOICES:
        raise ConfigError(f"unknown residual {cfg.residual!r}; choose from {_RESIDUAL_CHOICES}")
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive")
    for t in cfg.checkpoints:
        if not 0.0 < t <= cfg.horizon:
            raise ConfigError(f"checkpoint {t} outside (0, horizon]")
    for n in cfg.grid_sizes:
        if n < 2:
            raise ConfigError("grid_sizes entries must be at least 2")
    return cfg


def load_config(path: str, suite: str) -> ExperimentConfig:
    """Read and validate a YAML config file for the given suite."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse {path}: {exc}")
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")
    return config_from_mapping(suite, raw)
