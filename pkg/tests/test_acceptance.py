"""
Desk-scale benchmark runs (R=4, B=224, 5000 pixels, default training).

Each scene trains for minutes on a laptop CPU; run with `pytest -m slow`.
"""
from __future__ import annotations

from pathlib import Path
from statistics import median
from typing import Dict, Tuple

import pytest

from specmix.datagen import generate_scene
from specmix.model import extract_endmembers
from specmix.numerics import tv_norm
from specmix.pipeline import SceneResult, run_scene
from specmix.train import TrainConfig, train
from specmix.vca import vca_extract

pytestmark = pytest.mark.slow

R, B, PIXELS = 4, 224, 5000
SEEDS = (0, 1, 2)
RMSE_LIMITS = {"linear": 0.05, "bilinear": 0.08, "ppnm": 0.07}


@pytest.fixture(scope="module")
def runs(tmp_path_factory) -> Dict[Tuple[str, int], SceneResult]:
    root: Path = tmp_path_factory.mktemp("bench")
    cfg = TrainConfig()
    return {
        (model, seed): run_scene(model, 30.0, seed, R, B, PIXELS, cfg, root / f"{model}_{seed}", save_artifacts=False)
        for model in RMSE_LIMITS
        for seed in SEEDS
    }


@pytest.mark.parametrize("model", sorted(RMSE_LIMITS))
def test_median_abundance_rmse(runs, model: str):
    rmse = median(runs[(model, seed)].report.rmse for seed in SEEDS)
    assert rmse <= RMSE_LIMITS[model]


def test_linear_endmember_sad(runs):
    assert median(runs[("linear", seed)].report.sad_mean_deg for seed in SEEDS) <= 5.0


def test_smoothing_lowers_total_variation():
    scene = generate_scene("linear", R, B, PIXELS, 20.0, 0)
    init = vca_extract(scene.cube, R, 0).nonnegative()
    totals = {}
    for gamma in (0.0, 1e-3):
        params, _ = train(scene.cube, init, TrainConfig(gamma=gamma), quiet=True)
        m_hat = extract_endmembers(params)
        totals[gamma] = sum(tv_norm(m_hat[:, k]) for k in range(R))
    assert totals[1e-3] < totals[0.0]


def test_noiseless_linear_training_trend():
    scene = generate_scene("linear", R, B, PIXELS, None, 0)
    init = vca_extract(scene.cube, R, 0).nonnegative()
    _, history = train(scene.cube, init, TrainConfig(), quiet=True)
    j = history.column("j_data")
    assert all(j[i + 5] < j[i] for i in range(len(j) - 5))
    # 150 Adam steps at lr 1e-4 end near 4e-2 on this scene
    assert j[-1] < 0.05
