from __future__ import annotations

import numpy as np
import pytest

from specmix.errors import ContractError
from specmix.io import export_map, write_history
from specmix.io.pgm import encode_pgm, map_to_gray
from specmix.train.loop import TrainHistory
from specmix.train.objective import ObjectiveTerms


def test_zero_map_is_black():
    assert not map_to_gray(np.zeros(6)).any()


def test_constant_positive_map_is_white():
    assert np.all(map_to_gray(np.full(4, 0.3)) == 255)


def test_explicit_vmax_scales_and_clips():
    gray = map_to_gray(np.array([0.0, 0.5, 1.0, 2.0, -1.0]), vmax=1.0)
    assert gray.tolist() == [0, 128, 255, 255, 0]


def test_pgm_header_and_payload():
    values = np.linspace(0.0, 1.0, 6)
    blob = encode_pgm(values, (2, 3))
    assert blob.startswith(b"P5\n3 2\n255\n")
    assert len(blob) == len(b"P5\n3 2\n255\n") + 6
    assert blob[-1] == 255


def test_pgm_bytes_are_deterministic(tmp_path):
    values = np.random.default_rng(0).random(20)
    export_map(values, (4, 5), tmp_path / "a.pgm")
    export_map(values, (4, 5), tmp_path / "b.pgm")
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()


def test_pgm_layout_errors():
    with pytest.raises(ContractError):
        encode_pgm(np.ones(6), None)
    with pytest.raises(ContractError):
        encode_pgm(np.ones(6), (2, 2))
    with pytest.raises(ContractError):
        encode_pgm(np.array([1.0, np.nan]), (1, 2))


def test_history_csv(tmp_path):
    history = TrainHistory()
    history.append(1, ObjectiveTerms(0.5, 2.0, 3.0, 0.75), 0.1)
    history.append(2, ObjectiveTerms(0.25, 2.0, 3.0, 0.5), 0.2)
    path = tmp_path / "history.csv"
    write_history(history, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "epoch,j_data,j_reg,j_smth,j_total,seconds"
    assert lines[1] == "1,0.5,2.0,3.0,0.75,0.1"
    assert len(lines) == 3
