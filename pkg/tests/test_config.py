import pytest

from clo_bench.config import SIMPLE_N_GRID, MethodSpec, parse_config
from clo_bench.errors import ConfigError


def test_minimal_simple_config_defaults():
    cfg = parse_config("experiment: simple_example\nsigma2: 1\n")
    assert cfg.n_grid == SIMPLE_N_GRID and len(cfg.n_grid) == 19
    assert cfg.n_grid[0] == 32 and cfg.n_grid[-1] == 2048
    assert all(b > a for a, b in zip(cfg.n_grid, cfg.n_grid[1:]))
    assert cfg.test_size == 10000 and cfg.replications == 50
    assert cfg.sgd == {"batch_size": 10, "iterations": 1000, "step_scale": 1.0}
    assert cfg.evaluation == "dense_grid"
    assert [m.label for m in cfg.methods] == ["eto/threshold", "ierm_left/threshold", "ierm_mid/threshold"]


def test_shortest_path_defaults():
    cfg = parse_config({"experiment": "shortest_path"})
    assert cfg.n_grid == tuple(range(50, 1001, 50))
    assert len(cfg.methods) == 6
    assert len(cfg.grids["kernel_rho"]) == 5


@pytest.mark.parametrize(
    "bad,field",
    [
        ({"replications": 0}, "replications"),
        ({"n_grid": []}, "n_grid"),
        ({"n_grid": [64, 32]}, "n_grid"),
        ({"test_size": -1}, "test_size"),
        ({"sigma2": -0.5}, "sigma2"),
        ({"threads": 0}, "threads"),
        ({"methods": ["ierm_left/kernel"]}, "methods"),
        ({"experiment": "nope"}, "experiment"),
    ],
)
def test_invalid_fields_named(bad, field):
    with pytest.raises(ConfigError, match=field):
        parse_config({"experiment": "simple_example", **bad})


def test_unknown_key_named():
    with pytest.raises(ConfigError, match="replicaitons"):
        parse_config({"experiment": "simple_example", "replicaitons": 3})
    with pytest.raises(ConfigError, match="grids.lambda"):
        parse_config({"experiment": "shortest_path", "grids": {"lambda": [1.0]}})


@pytest.mark.parametrize("experiment", ["simple_example", "shortest_path", "noise_profile", "oracle_check"])
def test_roundtrip(experiment):
    cfg = parse_config({"experiment": experiment, "master_seed": 5, "threads": "auto"})
    assert parse_config(cfg.dump()) == cfg


def test_overrides_and_method_forms():
    cfg = parse_config("experiment: simple_example\nmaster_seed: 1\n", master_seed=9, threads=None)
    assert cfg.master_seed == 9 and cfg.threads == 1
    assert MethodSpec.parse({"estimator": "spo_plus", "hypothesis": "kernel"}).label == "spo_plus/kernel"
    assert MethodSpec.parse("truth").label == "truth/truth"
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")
