"""Experiment configuration.

Configs are YAML (or JSON) mappings. Unknown keys are rejected by name and
missing keys take experiment-specific defaults. Example::

    experiment: shortest_path
    n_grid: [50, 100, 200, 500]
    replications: 10
    test_size: 2000
    methods: [eto/correct_linear, eto/wrong_linear, spo_plus/wrong_linear]
    master_seed: 7
    output_path: results/sp.csv
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ConfigError

EXPERIMENTS = ("simple_example", "shortest_path", "noise_profile", "oracle_check")
ESTIMATORS = ("eto", "ierm_left", "ierm_mid", "spo_plus", "truth")
HYPOTHESES = ("threshold", "correct_linear", "wrong_linear", "kernel", "truth")

# ridge grid: 0 and third-of-a-decade steps from 1/10 to 100
LINEAR_LAMBDA_GRID = (0.0,) + tuple(10.0 ** (k / 3) for k in range(-3, 7))
KERNEL_LAMBDA_GRID = (1e-3, 1e-2) + tuple(10.0 ** (k / 3) for k in range(-3, 7))
KERNEL_RHO_GRID = (0.01, 0.1, 0.5, 1.0, 2.0)

# 19 geometric points from 32 to 2048
SIMPLE_N_GRID = tuple(int(round(32 * 2 ** (k / 3))) for k in range(19))
SHORTEST_PATH_N_GRID = tuple(range(50, 1001, 50))


@dataclass(frozen=True)
class MethodSpec:
    estimator: str
    hypothesis: str

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"methods: unknown estimator {self.estimator!r}")
        if self.hypothesis not in HYPOTHESES:
            raise ConfigError(f"methods: unknown hypothesis {self.hypothesis!r}")
        if self.estimator.startswith("ierm") and self.hypothesis != "threshold":
            raise ConfigError("methods: exact IERM is only available for the threshold class")

    @property
    def label(self) -> str:
        return f"{self.estimator}/{self.hypothesis}"

    @classmethod
    def parse(cls, item) -> "MethodSpec":
        if isinstance(item, MethodSpec):
            return item
        if isinstance(item, dict):
            extra = set(item) - {"estimator", "hypothesis"}
            if extra:
                raise ConfigError(f"methods: unknown key {sorted(extra)[0]!r}")
            return cls(item.get("estimator", ""), item.get("hypothesis", "truth"))
        if isinstance(item, str):
            if item == "truth":
                return cls("truth", "truth")
            est, _, hyp = item.partition("/")
            return cls(est, hyp or "threshold")
        raise ConfigError(f"methods: cannot parse {item!r}")


DEFAULT_METHODS = {
    "simple_example": ("eto/threshold", "ierm_left/threshold", "ierm_mid/threshold"),
    "shortest_path": (
        "eto/correct_linear",
        "spo_plus/correct_linear",
        "eto/wrong_linear",
        "spo_plus/wrong_linear",
        "eto/kernel",
        "spo_plus/kernel",
    ),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_grid: tuple = ()
    replications: int = 50
    sigma2: float = 1.0
    test_size: int = 10000
    methods: tuple = ()
    grids: dict = field(default_factory=dict)
    master_seed: int = 0
    output_path: str = "results.csv"
    threads: object = 1
    sgd: dict = field(default_factory=dict)
    evaluation: str = "monte_carlo"
    wrong_linear_intercept: bool = True
    grid_width: int = 5
    grid_height: int = 5
    coef_seed: int = 10
    dgp: str = "simple"
    sample_size: int = 100000
    delta_grid: tuple = ()

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "methods":
                v = [m.label for m in v]
            elif isinstance(v, tuple):
                v = list(v)
            elif isinstance(v, dict):
                v = {k: list(x) if isinstance(x, tuple) else x for k, x in v.items()}
            out[f.name] = v
        return out

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def resolved_threads(self) -> int:
        if self.threads == "auto":
            import os

            return os.cpu_count() or 1
        return int(self.threads)


_KEYS = {f.name for f in dataclasses.fields(ExperimentConfig)}
_GRID_KEYS = {"linear_lambda", "kernel_lambda", "kernel_rho"}
_SGD_KEYS = {"batch_size", "iterations", "step_scale"}


def _defaults(experiment: str) -> dict:
    d = {
        "n_grid": SIMPLE_N_GRID if experiment == "simple_example" else SHORTEST_PATH_N_GRID,
        "methods": DEFAULT_METHODS.get(experiment, ()),
        "grids": {
            "linear_lambda": LINEAR_LAMBDA_GRID,
            "kernel_lambda": KERNEL_LAMBDA_GRID,
            "kernel_rho": KERNEL_RHO_GRID,
        },
        "sgd": {"batch_size": 10, "iterations": 1000, "step_scale": 1.0},
        "evaluation": "dense_grid" if experiment == "simple_example" else "monte_carlo",
        "delta_grid": tuple(float(v) for v in np.geomspace(1e-3, 2.0, 30)),
    }
    return d


def _positive_int(name, v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
        raise ConfigError(f"{name}: must be a positive integer, got {v!r}")
    return int(v)


def parse_config(source, **overrides) -> ExperimentConfig:
    """Build a validated config from YAML/JSON text or a mapping.

    Keyword ``overrides`` (e.g. from command-line flags) replace file values;
    ``None`` overrides are ignored.
    """
    if isinstance(source, str):
        try:
            raw = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML/JSON: {exc}") from exc
    else:
        raw = dict(source)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}
    for key in raw:
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: must be one of {EXPERIMENTS}, got {experiment!r}")

    d = _defaults(experiment)
    grids = dict(d["grids"])
    for k, v in (raw.pop("grids", None) or {}).items():
        if k not in _GRID_KEYS:
            raise ConfigError(f"unknown config key 'grids.{k}'")
        if not v:
            raise ConfigError(f"grids.{k}: empty grid")
        grids[k] = tuple(float(x) for x in v)
    sgd = dict(d["sgd"])
    for k, v in (raw.pop("sgd", None) or {}).items():
        if k not in _SGD_KEYS:
            raise ConfigError(f"unknown config key 'sgd.{k}'")
        sgd[k] = v
    _positive_int("sgd.batch_size", sgd["batch_size"])
    if not isinstance(sgd["iterations"], int) or sgd["iterations"] < 0:
        raise ConfigError("sgd.iterations: must be a nonnegative integer")
    if not float(sgd["step_scale"]) > 0:
        raise ConfigError("sgd.step_scale: must be positive")
    sgd["step_scale"] = float(sgd["step_scale"])

    n_grid = tuple(raw.pop("n_grid", d["n_grid"]))
    if not n_grid:
        raise ConfigError("n_grid: must be nonempty")
    n_grid = tuple(_positive_int("n_grid", n) for n in n_grid)
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ConfigError("n_grid: must be strictly increasing")

    methods = tuple(MethodSpec.parse(m) for m in raw.pop("methods", d["methods"]))
    delta_grid = tuple(float(v) for v in raw.pop("delta_grid", d["delta_grid"]))
    if any(not v > 0 for v in delta_grid):
        raise ConfigError("delta_grid: entries must be positive")

    cfg = ExperimentConfig(
        experiment=experiment,
        n_grid=n_grid,
        methods=methods,
        grids=grids,
        sgd=sgd,
        delta_grid=delta_grid,
        evaluation=raw.pop("evaluation", d["evaluation"]),
        **{k: v for k, v in raw.items() if k != "experiment"},
    )
    _positive_int("replications", cfg.replications)
    _positive_int("test_size", cfg.test_size)
    _positive_int("sample_size", cfg.sample_size)
    _positive_int("grid_width", cfg.grid_width)
    _positive_int("grid_height", cfg.grid_height)
    if not float(cfg.sigma2) >= 0:
        raise ConfigError("sigma2: must be nonnegative")
    if cfg.evaluation not in ("dense_grid", "monte_carlo"):
        raise ConfigError("evaluation: must be 'dense_grid' or 'monte_carlo'")
    if cfg.evaluation == "dense_grid" and experiment != "simple_example":
        raise ConfigError("evaluation: dense_grid is only available for simple_example")
    if cfg.dgp not in ("simple", "shortest_path"):
        raise ConfigError("dgp: must be 'simple' or 'shortest_path'")
    if cfg.threads != "auto":
        _positive_int("threads", cfg.threads)
    if isinstance(cfg.master_seed, bool) or not isinstance(cfg.master_seed, int) or cfg.master_seed < 0:
        raise ConfigError("master_seed: must be a nonnegative integer")
    if not isinstance(cfg.wrong_linear_intercept, bool):
        raise ConfigError("wrong_linear_intercept: must be a boolean")
    for m in methods:
        if experiment == "simple_example" and m.hypothesis not in ("threshold", "truth"):
            raise ConfigError(f"methods: {m.label} is not available for simple_example")
        if experiment == "shortest_path" and m.hypothesis == "threshold":
            raise ConfigError(f"methods: {m.label} is not available for shortest_path")
    return cfg


def load_config(path, **overrides) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)
