from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from pydantic import ValidationError

from ..errors import ContractError
from ..utils.seeding import derive_seed
from .library import synth_endmembers
from .types import AbundanceMap, HsiCube, Layout, MixtureModel, Provenance, SpectralLibrary, default_layout


def sample_abundances(N: int, R: int, seed: int, layout: Optional[Layout] = None) -> AbundanceMap:
    """Columns drawn i.i.d. from Dirichlet(1, ..., 1), i.e. uniform on the simplex."""
    if N < 1 or R < 2:
        raise ContractError(f"sample_abundances needs N >= 1 and R >= 2, got N={N}, R={R}")
    rng = np.random.default_rng(seed)
    values = rng.dirichlet(np.ones(R), size=N).T
    values = values / values.sum(axis=0, keepdims=True)
    return AbundanceMap(values=values, layout=layout or default_layout(N))


def _check_pair(M: SpectralLibrary, A: AbundanceMap) -> None:
    if M.count != A.endmembers:
        raise ContractError(f"library has {M.count} spectra but abundances have {A.endmembers} rows")


def _cube(M: SpectralLibrary, A: AbundanceMap, data: np.ndarray) -> HsiCube:
    return HsiCube(data=data, layout=A.layout, wavelengths=M.wavelengths)


def mix_linear(M: SpectralLibrary, A: AbundanceMap) -> HsiCube:
    _check_pair(M, A)
    return _cube(M, A, M.spectra @ A.values)


def mix_bilinear(M: SpectralLibrary, A: AbundanceMap) -> HsiCube:
    """M a plus the pairwise terms a_i a_j (m_i * m_j) for i < j."""
    _check_pair(M, A)
    m, a = M.spectra, A.values
    data = m @ a
    R = M.count
    for i in range(R - 1):
        for j in range(i + 1, R):
            data += (m[:, i] * m[:, j])[:, None] * (a[i] * a[j])[None, :]
    return _cube(M, A, data)


def mix_ppnm(M: SpectralLibrary, A: AbundanceMap) -> HsiCube:
    """Post-nonlinear mixing: y + y * y with y = M a."""
    _check_pair(M, A)
    y = M.spectra @ A.values
    return _cube(M, A, y + y * y)


MIXERS: Dict[str, Callable[[SpectralLibrary, AbundanceMap], HsiCube]] = {
    "linear": mix_linear,
    "bilinear": mix_bilinear,
    "ppnm": mix_ppnm,
}


def noise_sigma(X: HsiCube, snr_db: float) -> float:
    """
    Standard deviation giving `snr_db` against the mean per-entry power of X.
    """
    power = float(np.mean(X.data * X.data))
    if power == 0.0:
        raise ContractError("SNR is undefined for an all-zero cube")
    return math.sqrt(power / 10.0 ** (snr_db / 10.0))


def add_noise(X: HsiCube, snr_db: float, seed: int) -> HsiCube:
    """
    Add i.i.d. zero-mean Gaussian noise at `snr_db`; +inf means no noise.
    """
    if math.isnan(snr_db):
        raise ContractError("snr_db must not be NaN")
    if math.isinf(snr_db) and snr_db > 0:
        return X.with_data(X.data.copy())
    sigma = noise_sigma(X, snr_db)
    rng = np.random.default_rng(seed)
    return X.with_data(X.data + sigma * rng.standard_normal(X.data.shape))


@dataclass(frozen=True, eq=False)
class Scene:
    library: SpectralLibrary
    abundances: AbundanceMap
    cube: HsiCube


def generate_scene(
    model: MixtureModel,
    R: int,
    B: int,
    pixels: int,
    snr_db: Optional[float],
    seed: int,
) -> Scene:
    """
    Library, abundances and observed cube for one synthetic scene.

    Each ingredient draws from its own named substream of `seed`.
    """
    if model not in MIXERS:
        raise ContractError(f"unknown mixture model {model!r}; expected one of {sorted(MIXERS)}")
    try:
        provenance = Provenance(
            model=model,
            snr_db=snr_db if snr_db is not None else math.inf,
            seed=seed,
            endmembers=R,
            bands=B,
            pixels=pixels,
        )
    except ValidationError as e:
        raise ContractError(f"invalid scene parameters: {e}") from e
    library = synth_endmembers(R, B, derive_seed(seed, "library"))
    abundances = sample_abundances(pixels, R, derive_seed(seed, "abundances"))
    clean = MIXERS[model](library, abundances)
    noisy = clean
    if provenance.snr_db is not None:
        noisy = add_noise(clean, provenance.snr_db, derive_seed(seed, "noise"))
    cube = HsiCube(
        data=noisy.data,
        layout=abundances.layout,
        provenance=provenance,
        wavelengths=library.wavelengths,
    )
    return Scene(library=library, abundances=abundances, cube=cube)


def regenerate(provenance: Provenance) -> Scene:
    return generate_scene(
        provenance.model,
        provenance.endmembers,
        provenance.bands,
        provenance.pixels,
        provenance.snr_db,
        provenance.seed,
    )
