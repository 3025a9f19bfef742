import json

import pytest

from railyard.config import ExperimentConfig, load_config
from railyard.errors import ConfigError

FOUR_COLUMN = {
    "schema_version": 1,
    "name": "four_column",
    "model": {"finite": {"l": 1, "r": 4, "a": "LRRL", "b": "++--", "x": [0.3, 0.2, 0.4, 0.5]}},
    "task": {"seed": 3, "cap": 30},
}


@pytest.mark.parametrize("name", ["four_column", "single_segment", "two_segment", "staircase_m2", "piecewise_four_slot"])
def test_shipped_configs_round_trip(configs_dir, name):
    config = load_config(configs_dir / f"{name}.json")
    assert config.name == name
    assert ExperimentConfig.from_json(config.to_json()) == config


def test_shipped_piecewise_boundary(configs_dir, four_slot_boundary):
    config = load_config(configs_dir / "piecewise_four_slot.json")
    boundary = config.boundary.piecewise()
    assert boundary.a == pytest.approx(four_slot_boundary.a)
    assert boundary.b == pytest.approx(four_slot_boundary.b)


def test_defaults_and_spec(four_column):
    config = ExperimentConfig.from_dict(FOUR_COLUMN)
    assert config.boundary.kind == "empty"
    assert config.task.orders == (1, 2, 3)
    assert config.spec() == four_column
    assert not config.periodic
    with pytest.raises(ConfigError):
        config.asymptotic()


def test_periodic_spec_is_realised(configs_dir):
    config = load_config(configs_dir / "single_segment.json")
    assert config.periodic
    assert config.spec().n_columns == 60


@pytest.mark.parametrize(
    "patch",
    [
        {"schema_version": 2},
        {"task": {"speed": 1}},
        {"task": {"t": 3, "chi": 0.5}},
        {"task": {"cap": 0}},
        {"model": {}},
        {"model": {"finite": {"l": 1, "r": 2, "a": "LL", "b": "+-", "x": [2.0, 1.0]}}},
        {"boundary": {"kind": "round"}},
        {"boundary": {"kind": "staircase", "M": 0}},
        {"boundary": {"kind": "piecewise", "a": [0.0], "b": [0.5]}},
    ],
)
def test_invalid_documents(patch):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**FOUR_COLUMN, **patch})


def test_missing_schema_version():
    data = dict(FOUR_COLUMN)
    del data["schema_version"]
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


def test_bad_json_and_paths(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_overrides(tmp_path):
    config = ExperimentConfig.from_dict(FOUR_COLUMN).with_overrides(seed=9, cap=12, out=str(tmp_path), png=True)
    assert (config.task.seed, config.task.cap) == (9, 12)
    assert config.output.png
    assert config.output.path("z", "json") == tmp_path / "z.json"


def test_seed_required_for_sampling():
    data = {**FOUR_COLUMN, "task": {}}
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data).task.require_seed()


def test_kappa_grid_and_prefix():
    data = {**FOUR_COLUMN, "task": {"kappa": [0, 2, 5]}, "output": {"directory": "o", "prefix": "run"}}
    config = ExperimentConfig.from_dict(data)
    assert config.task.kappa_grid().tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert config.output.path("density", "csv").name == "run_density.csv"
    assert json.loads(config.to_json())["task"]["kappa"] == [0.0, 2.0, 5]


@pytest.mark.parametrize(
    "name, empty",
    [("single_segment", True), ("two_segment", True), ("staircase_m2", False), ("piecewise_four_slot", False)],
)
def test_empty_boundary_requirement(configs_dir, name, empty):
    config = load_config(configs_dir / f"{name}.json")
    assert config.boundary.empty is empty
    if empty:
        config.require_empty_boundary("sampling")
    else:
        with pytest.raises(ConfigError, match="empty left boundary"):
            config.require_empty_boundary("sampling")
