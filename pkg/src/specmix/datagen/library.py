from __future__ import annotations

import numpy as np

from ..errors import ContractError, GenerationError
from ..eval.metrics import sad_matrix
from .types import SpectralLibrary

WAVELENGTH_RANGE_NM = (400.0, 2500.0)
MIN_PAIRWISE_SAD_DEG = 5.0
MAX_REDRAWS = 200


def _draw_spectrum(rng: np.random.Generator, wavelengths: np.ndarray) -> np.ndarray:
    lo, hi = WAVELENGTH_RANGE_NM
    bumps = int(rng.integers(3, 7))
    centers = rng.uniform(lo, hi, bumps)
    widths = rng.uniform(60.0, 350.0, bumps)
    heights = rng.uniform(0.2, 1.0, bumps)
    z = (wavelengths[:, None] - centers[None, :]) / widths[None, :]
    s = 0.02 + (heights[None, :] * np.exp(-0.5 * z * z)).sum(axis=1)
    return s / s.max()


def synth_endmembers(
    R: int,
    B: int,
    seed: int,
    min_sad_deg: float = MIN_PAIRWISE_SAD_DEG,
    max_redraws: int = MAX_REDRAWS,
) -> SpectralLibrary:
    """
    R smooth positive spectra over 400-2500 nm, each a sum of 3-6 Gaussian bumps
    on a small floor, scaled so the peak is 1.

    The closest pair is redrawn until every pairwise angle is at least
    `min_sad_deg`.
    """
    if R < 2 or B < 8:
        raise ContractError(f"synth_endmembers needs R >= 2 and B >= 8, got R={R}, B={B}")
    rng = np.random.default_rng(seed)
    wavelengths = np.linspace(*WAVELENGTH_RANGE_NM, B)
    spectra = np.column_stack([_draw_spectrum(rng, wavelengths) for _ in range(R)])

    for _ in range(max_redraws + 1):
        angles = sad_matrix(spectra, spectra)
        np.fill_diagonal(angles, np.inf)
        i, j = np.unravel_index(int(np.argmin(angles)), angles.shape)
        if angles[i, j] >= min_sad_deg:
            names = [f"endmember_{k + 1}" for k in range(R)]
            return SpectralLibrary(wavelengths=wavelengths, spectra=spectra, names=names)
        spectra[:, max(i, j)] = _draw_spectrum(rng, wavelengths)

    raise GenerationError(
        f"could not reach a pairwise SAD of {min_sad_deg} deg for R={R}, B={B} after {max_redraws} redraws"
    )
