from __future__ import annotations

import csv
import json
from pathlib import Path

import yaml

from specmix.cli import main
from specmix.config import load_config
from specmix.pipeline import run_experiment

FIXTURES = Path(__file__).parent / "fixtures"


def _config(tmp_path: Path, **experiment) -> Path:
    data = yaml.safe_load((FIXTURES / "experiment.valid.yml").read_text(encoding="utf-8"))
    data["io"]["runs_dir"] = str(tmp_path / "runs")
    data["experiment"].update(experiment)
    path = tmp_path / "config.yml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def test_experiment_writes_run_directory(tmp_path):
    path = _config(tmp_path)
    result = run_experiment(load_config(path), path, run_id="exp_test")
    run_dir = tmp_path / "runs" / "exp_test"
    assert result.run_dir == run_dir
    assert len(result.scenes) == 4

    meta = json.loads((run_dir / "run_meta.json").read_text(encoding="utf-8"))
    assert meta["counts"] == {"scenes_planned": 4, "scenes_done": 4}
    assert meta["train_config"]["epochs"] == 2
    assert meta["train_config"]["lambda"] == 0.01
    assert meta["train_config"]["batch_size"] == 100
    assert "finished_at" in meta

    with (run_dir / "summary.csv").open(encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    assert [(r["model"], r["snr_db"]) for r in rows] == [
        ("linear", "30"), ("linear", "inf"), ("ppnm", "30"), ("ppnm", "inf"),
    ]
    for name in ("linear_snr30_seed0", "linear_snrinf_seed0", "ppnm_snr30_seed0", "ppnm_snrinf_seed0"):
        report = json.loads((run_dir / name / "report.json").read_text(encoding="utf-8"))
        assert report["rmse"] >= 0
        assert not (run_dir / name / "model.smxm").exists()


def test_experiment_saves_artifacts_when_asked(tmp_path):
    path = _config(tmp_path, models=["bilinear"], snr_db=[40], save_artifacts=True)
    result = run_experiment(load_config(path), path, run_id="exp_art")
    out = result.scenes[0].out_dir
    for name in ("scene.smxc", "endmembers.csv", "model.smxm", "history.csv",
                 "abundances.est.smxc", "x_nlin.smxc", "endmembers.est.csv", "report.json"):
        assert (out / name).exists(), name


def test_experiment_command(tmp_path):
    path = _config(tmp_path, models=["linear"], snr_db=[20])
    assert main(["experiment", "--config", str(path), "--run-id", "cli_run"]) == 0
    assert (tmp_path / "runs" / "cli_run" / "summary.csv").exists()


def test_experiment_command_config_error(tmp_path):
    assert main(["experiment", "--config", str(FIXTURES / "experiment.invalid.yml")]) == 2
