from __future__ import annotations

import numpy as np
import pytest

from specmix.datagen import HsiCube, generate_scene, mix_linear, sample_abundances, synth_endmembers
from specmix.datagen.types import AbundanceMap
from specmix.errors import ContractError, DegenerateDataError
from specmix.eval import align, sad
from specmix.vca import vca_extract

PURE_AT = (13, 47, 90, 151)


def _pure_pixel_cube(R: int = 4, B: int = 40, N: int = 200, seed: int = 0):
    lib = synth_endmembers(R, B, seed=seed)
    a = sample_abundances(N, R, seed=seed).values.copy()
    for k, idx in enumerate(PURE_AT[:R]):
        a[:, idx] = 0.0
        a[k, idx] = 1.0
    return lib, mix_linear(lib, AbundanceMap(values=a))


def test_vca_recovers_library_from_pure_pixels():
    lib, cube = _pure_pixel_cube()
    for seed in range(10):
        result = vca_extract(cube, 4, seed)
        assert sorted(result.selected_pixel_indices) == sorted(PURE_AT)
        perm = align(result.endmembers, lib.spectra)
        for k, t in enumerate(perm):
            assert sad(lib.spectra[:, t], result.endmembers[:, k]) < 1e-6


def test_vca_endmembers_are_observed_pixels_and_deterministic():
    rng = np.random.default_rng(0)
    cube = HsiCube(data=rng.random((20, 80)))
    r1 = vca_extract(cube, 3, seed=5)
    r2 = vca_extract(cube, 3, seed=5)
    assert r1.selected_pixel_indices == r2.selected_pixel_indices
    assert len(set(r1.selected_pixel_indices)) == 3
    assert r1.projection_dim == 3
    for k, idx in enumerate(r1.selected_pixel_indices):
        assert np.array_equal(r1.endmembers[:, k], cube.data[:, idx])
    assert r1.names() == [f"pixel_{i}" for i in r1.selected_pixel_indices]


def test_vca_rejects_identical_pixels():
    cube = HsiCube(data=np.tile(np.linspace(0.1, 0.9, 12)[:, None], (1, 30)))
    with pytest.raises(DegenerateDataError):
        vca_extract(cube, 3, seed=0)


def test_vca_rejects_too_few_pixels():
    cube = HsiCube(data=np.random.default_rng(1).random((12, 2)))
    with pytest.raises(ContractError):
        vca_extract(cube, 3, seed=0)


def test_nonnegative_init_clears_noise_below_zero():
    lib, cube = _pure_pixel_cube()
    shifted = cube.with_data(cube.data - 0.05)
    result = vca_extract(shifted, 4, 0)
    m0 = result.nonnegative()
    assert np.all(m0 >= 0)
    assert np.array_equal(m0, np.where(result.endmembers < 0, 0.0, result.endmembers))


def test_mean_removed_cube_is_rejected():
    cube = generate_scene("linear", 3, 16, 200, 30.0, 3).cube
    centered = cube.with_data(cube.data - cube.data.mean(axis=1, keepdims=True))
    with pytest.raises(DegenerateDataError):
        vca_extract(centered, 3, seed=0)
