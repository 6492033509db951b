from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import List

import numpy as np

from ..datagen.types import SpectralLibrary
from ..errors import ContractError, LibraryParseError
from ..utils.json_utils import iter_csv_rows, write_text_atomic

WAVELENGTH_COLUMN = "wavelength_nm"


def write_library(lib: SpectralLibrary, path: Path) -> None:
    """One row per band: wavelength then one reflectance per spectrum, shortest round-trip decimals."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([WAVELENGTH_COLUMN] + list(lib.names))
    for j in range(lib.bands):
        w.writerow([repr(float(lib.wavelengths[j]))] + [repr(float(v)) for v in lib.spectra[j]])
    write_text_atomic(Path(path), buf.getvalue())


def read_library(path: Path) -> SpectralLibrary:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Library file not found: {path}")

    rows = iter_csv_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise LibraryParseError(f"{path}: empty file", line=1) from None
    header = [h.strip() for h in header]
    if len(header) < 2 or header[0] != WAVELENGTH_COLUMN:
        raise LibraryParseError(f"header must start with '{WAVELENGTH_COLUMN}' followed by spectrum names", line=1)
    width = len(header)

    wavelengths: List[float] = []
    values: List[List[float]] = []
    prev_line = 1
    for line, row in rows:
        if len(row) != width:
            raise LibraryParseError(f"expected {width} fields, got {len(row)}", line=line)
        try:
            nums = [float(cell) for cell in row]
        except ValueError:
            raise LibraryParseError(f"non-numeric field in {row!r}", line=line) from None
        if wavelengths and not nums[0] > wavelengths[-1]:
            raise LibraryParseError(
                f"wavelength {nums[0]} does not increase after {wavelengths[-1]} (line {prev_line})", line=line
            )
        wavelengths.append(nums[0])
        values.append(nums[1:])
        prev_line = line

    if not values:
        raise LibraryParseError("library has no data rows", line=prev_line)
    try:
        return SpectralLibrary(
            wavelengths=np.asarray(wavelengths),
            spectra=np.asarray(values),
            names=header[1:],
        )
    except ContractError as e:
        raise LibraryParseError(f"{path}: {e}") from e
