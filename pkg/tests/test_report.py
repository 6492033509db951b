from __future__ import annotations

import json

import numpy as np
import pytest
from pydantic import ValidationError

from specmix.datagen import generate_scene
from specmix.errors import ContractError
from specmix.eval import EvalReport, evaluate, write_report


def _perfect_permuted(perm):
    scene = generate_scene("linear", 3, 16, 40, None, 1)
    m_hat = scene.library.spectra[:, perm]
    a_hat = scene.abundances.values[perm, :]
    return scene, m_hat, a_hat


def test_evaluate_perfect_estimate_under_permutation():
    perm = [2, 0, 1]
    scene, m_hat, a_hat = _perfect_permuted(perm)
    report = evaluate(scene.abundances.values, scene.library.spectra, a_hat, 2.0 * m_hat,
                      x=scene.cube.data, x_hat=scene.cube.data)
    assert report.permutation == perm
    assert report.rmse == 0.0
    assert report.sad_mean_deg == pytest.approx(0.0, abs=1e-10)
    assert report.sid_mean == pytest.approx(0.0, abs=1e-12)
    assert report.re == 0.0


def test_evaluate_without_reconstruction_has_no_re():
    scene, m_hat, a_hat = _perfect_permuted([0, 1, 2])
    report = evaluate(scene.abundances.values, scene.library.spectra, a_hat, m_hat, symmetric_sid=True)
    assert report.re is None
    assert report.symmetric_sid


def test_evaluate_shape_errors():
    scene, m_hat, a_hat = _perfect_permuted([0, 1, 2])
    with pytest.raises(ContractError):
        evaluate(scene.abundances.values, scene.library.spectra, a_hat[:2], m_hat[:, :2])
    with pytest.raises(ContractError):
        evaluate(scene.abundances.values, scene.library.spectra, a_hat[:, :10], m_hat)


def test_report_formats(tmp_path):
    scene, m_hat, a_hat = _perfect_permuted([1, 2, 0])
    noisy = m_hat + 0.01
    report = evaluate(scene.abundances.values, scene.library.spectra, a_hat, noisy)

    write_report(report, tmp_path / "r.json")
    assert EvalReport.model_validate(json.loads((tmp_path / "r.json").read_text(encoding="utf-8"))) == report

    write_report(report, tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "endmember,estimated_index,sad_deg,sid"
    # true endmember 0 was estimated in column 2
    assert lines[1].startswith("0,2,")
    assert lines[4].startswith("mean,,")
    assert lines[5].startswith("rmse,,")
    assert len(lines) == 6

    write_report(report, tmp_path / "r.txt")
    text = (tmp_path / "r.txt").read_text(encoding="utf-8")
    assert "mean SAD (deg)" in text and "RE:" not in text


def test_report_rejects_non_bijection():
    with pytest.raises(ValidationError):
        EvalReport(rmse=0.1, sad_deg=[1.0, 2.0], sad_mean_deg=1.5, sid=[0.1, 0.1], sid_mean=0.1, permutation=[0, 0])
    with pytest.raises(ValidationError):
        EvalReport(rmse=-0.1, sad_deg=[1.0], sad_mean_deg=1.0, sid=[0.1], sid_mean=0.1, permutation=[0])
    with pytest.raises(ValidationError):
        EvalReport(rmse=0.1, sad_deg=[1.0], sad_mean_deg=1.0, sid=[0.1, 0.2], sid_mean=0.1, permutation=[0])


def test_metrics_are_nonnegative_on_random_estimates():
    rng = np.random.default_rng(0)
    scene = generate_scene("bilinear", 3, 16, 30, 30.0, 0)
    report = evaluate(scene.abundances.values, scene.library.spectra, rng.dirichlet(np.ones(3), 30).T, rng.random((16, 3)))
    assert report.rmse >= 0 and all(s >= 0 for s in report.sad_deg) and all(s >= 0 for s in report.sid)
