from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..datagen.types import Layout
from ..errors import ContractError
from ..numerics import as_f64
from ..utils.json_utils import write_bytes_atomic

MAXVAL = 255


def map_to_gray(values: npt.ArrayLike, vmax: Optional[float] = None) -> np.ndarray:
    """
    Linear map [0, vmax] -> [0, 255], clipped and rounded half to even.

    vmax defaults to the map maximum; a map whose vmax is 0 renders black.
    """
    v = as_f64(values, ndim=1, name="map values")
    if not np.all(np.isfinite(v)):
        raise ContractError("map contains NaN or Inf")
    top = float(v.max()) if vmax is None else float(vmax)
    if top <= 0.0:
        return np.zeros(v.shape[0], dtype=np.uint8)
    scaled = np.rint(np.clip(v / top, 0.0, 1.0) * MAXVAL)
    return scaled.astype(np.uint8)


def encode_pgm(values: npt.ArrayLike, layout: Optional[Layout], vmax: Optional[float] = None) -> bytes:
    if layout is None:
        raise ContractError("a map needs a known (height, width) layout")
    height, width = int(layout[0]), int(layout[1])
    gray = map_to_gray(values, vmax)
    if height * width != gray.shape[0]:
        raise ContractError(f"layout {layout} does not cover {gray.shape[0]} pixels")
    return f"P5\n{width} {height}\n{MAXVAL}\n".encode("ascii") + gray.tobytes()


def export_map(values: npt.ArrayLike, layout: Optional[Layout], path: Path, vmax: Optional[float] = None) -> None:
    """Binary PGM of an abundance row or energy map; pixel n is row n // width."""
    write_bytes_atomic(Path(path), encode_pgm(values, layout, vmax))
