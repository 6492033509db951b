from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..errors import ContractError
from ..numerics import Mat64, Vec64, as_f64

MixtureModel = Literal["linear", "bilinear", "ppnm"]
MIXTURE_MODELS: Tuple[str, ...] = ("linear", "bilinear", "ppnm")

Layout = Tuple[int, int]


def default_layout(pixels: int) -> Layout:
    """Most square (height, width) with height * width == pixels and height <= width."""
    if pixels < 1:
        raise ContractError(f"pixel count must be >= 1, got {pixels}")
    height = 1
    for h in range(int(math.isqrt(pixels)), 0, -1):
        if pixels % h == 0:
            height = h
            break
    return height, pixels // height


def _check_layout(layout: Optional[Layout], pixels: int) -> Optional[Layout]:
    if layout is None:
        return None
    height, width = int(layout[0]), int(layout[1])
    if height < 1 or width < 1 or height * width != pixels:
        raise ContractError(f"layout {layout} does not cover {pixels} pixels")
    return height, width


class Provenance(BaseModel):
    """Everything needed to regenerate a synthetic scene bit-exactly."""

    model_config = ConfigDict(extra="forbid")

    model: MixtureModel
    snr_db: Optional[float] = None  # None: noiseless
    seed: int
    endmembers: int = Field(ge=2)
    bands: int = Field(ge=8)
    pixels: int = Field(ge=1)

    @field_validator("snr_db")
    @classmethod
    def _inf_is_noiseless(cls, v: Optional[float]) -> Optional[float]:
        if v is None or math.isinf(v) and v > 0:
            return None
        if math.isnan(v) or math.isinf(v):
            raise ValueError("snr_db must be finite or +inf")
        return v


@dataclass(frozen=True, eq=False)
class SpectralLibrary:
    wavelengths: Vec64
    spectra: Mat64  # (B, R), column i is endmember i
    names: List[str]

    def __post_init__(self) -> None:
        wl = as_f64(self.wavelengths, ndim=1, name="wavelengths")
        sp = as_f64(self.spectra, ndim=2, name="spectra")
        if sp.shape[0] != wl.shape[0]:
            raise ContractError(f"spectra have {sp.shape[0]} bands but {wl.shape[0]} wavelengths")
        if len(self.names) != sp.shape[1]:
            raise ContractError(f"{len(self.names)} names for {sp.shape[1]} spectra")
        if wl.shape[0] > 1 and not np.all(np.diff(wl) > 0):
            raise ContractError("wavelengths must be strictly increasing")
        if not np.all(np.isfinite(sp)) or np.any(sp < 0):
            raise ContractError("reflectances must be finite and >= 0")
        if np.unique(sp.T, axis=0).shape[0] != sp.shape[1]:
            raise ContractError("library contains identical spectra")
        object.__setattr__(self, "wavelengths", wl)
        object.__setattr__(self, "spectra", sp)
        object.__setattr__(self, "names", [str(n) for n in self.names])

    @property
    def bands(self) -> int:
        return int(self.spectra.shape[0])

    @property
    def count(self) -> int:
        return int(self.spectra.shape[1])


@dataclass(frozen=True, eq=False)
class AbundanceMap:
    values: Mat64  # (R, N)
    layout: Optional[Layout] = None

    def __post_init__(self) -> None:
        vals = as_f64(self.values, ndim=2, name="abundances")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "layout", _check_layout(self.layout, vals.shape[1]))

    @property
    def endmembers(self) -> int:
        return int(self.values.shape[0])

    @property
    def pixels(self) -> int:
        return int(self.values.shape[1])

    def check_simplex(self, tol: float = 1e-12) -> None:
        if np.any(self.values < 0):
            raise ContractError("abundances violate nonnegativity")
        if np.any(np.abs(self.values.sum(axis=0) - 1.0) > tol):
            raise ContractError("abundances violate sum-to-one")

    def to_cube(self) -> "HsiCube":
        """Abundances are stored on disk as an R-band cube."""
        return HsiCube(data=self.values, layout=self.layout)


@dataclass(frozen=True, eq=False)
class HsiCube:
    data: Mat64  # (B, N), band-major
    layout: Optional[Layout] = None
    provenance: Optional[Provenance] = None
    wavelengths: Optional[Vec64] = None

    def __post_init__(self) -> None:
        data = as_f64(self.data, ndim=2, name="cube data")
        if not np.all(np.isfinite(data)):
            raise ContractError("cube data contains NaN or Inf")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "layout", _check_layout(self.layout, data.shape[1]))
        if self.wavelengths is not None:
            wl = as_f64(self.wavelengths, ndim=1, name="wavelengths")
            if wl.shape[0] != data.shape[0]:
                raise ContractError(f"{wl.shape[0]} wavelengths for {data.shape[0]} bands")
            object.__setattr__(self, "wavelengths", wl)

    @property
    def bands(self) -> int:
        return int(self.data.shape[0])

    @property
    def pixels(self) -> int:
        return int(self.data.shape[1])

    def with_data(self, data: np.ndarray) -> "HsiCube":
        return replace(self, data=data)
