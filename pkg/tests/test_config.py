from __future__ import annotations

import json
from pathlib import Path

import pytest

from specmix.config import ConfigError, load_config, load_train_config
from specmix.train import PRESETS, TrainConfig

FIXTURES = Path(__file__).parent / "fixtures"
REPO_CONFIG = Path(__file__).parent.parent / "config"


def test_load_valid_experiment_config():
    cfg = load_config(FIXTURES / "experiment.valid.yml")
    assert cfg["io"]["runs_dir"] == "runs"
    assert cfg["experiment"]["models"] == ["linear", "ppnm"]
    assert cfg["experiment"]["snr_db"] == [30, None]


def test_unknown_model_rejected():
    with pytest.raises(ConfigError, match="fanmodel"):
        load_config(FIXTURES / "experiment.invalid.yml")


def test_missing_runs_dir(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("io: {}\nexperiment:\n  models: [linear]\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="io.runs_dir"):
        load_config(path)


def test_bad_train_override(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("io:\n  runs_dir: r\nexperiment:\n  models: [linear]\n  train:\n    momentum: 0.5\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_unknown_preset(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("io:\n  runs_dir: r\nexperiment:\n  models: [linear]\n  preset: orbital\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="orbital"):
        load_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "absent.yml")


def test_repo_experiment_config_loads():
    cfg = load_config(Path(__file__).parent.parent / "config.yml")
    assert cfg["experiment"]["bands"] == 224


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_shipped_train_configs_match_presets(name: str):
    assert load_train_config(REPO_CONFIG / f"train_{name}.json") == TrainConfig.preset(name)


def test_train_config_uses_lambda_key(tmp_path):
    path = tmp_path / "train.json"
    path.write_text(json.dumps({"lambda": 0.25, "epochs": 3}), encoding="utf-8")
    cfg = load_train_config(path)
    assert cfg.lam == 0.25
    assert cfg.to_json_dict()["lambda"] == 0.25
    assert TrainConfig.preset("synthetic", lam=0.5).lam == 0.5


def test_train_config_rejects_unknown_keys_and_bad_json(tmp_path):
    path = tmp_path / "train.json"
    path.write_text(json.dumps({"lr": 0.001, "learning_rate": 0.1}), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_train_config(path)
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_train_config(path)
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_train_config(path)


def test_laboratory_preset_values():
    cfg = TrainConfig.preset("laboratory")
    assert (cfg.batch_size, cfg.epochs, cfg.lam, cfg.gamma) == (100, 50, 1e-4, 1e-6)
    with pytest.raises(ValueError):
        TrainConfig.preset("orbital")
