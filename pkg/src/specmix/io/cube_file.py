"""
Self-describing hyperspectral cube file (.smxc).

    "SMXC" | u32 version | u32 B | u32 height | u32 width | u32 layout tag
    | B*height*width little-endian f64, band-major (band 0 raster first)
    | u32 metadata length | metadata (UTF-8 JSON: provenance, wavelengths)

A metadata length of 0 means no metadata.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from ..datagen.types import HsiCube, Provenance
from ..errors import FormatError, MetadataError
from ..utils.json_utils import write_bytes_atomic
from .binary import BinaryReader, BinaryWriter, read_file

CUBE_MAGIC = b"SMXC"
CUBE_VERSION = 1
LAYOUT_BSQ = 0


def encode_cube(cube: HsiCube) -> bytes:
    height, width = cube.layout or (1, cube.pixels)
    w = BinaryWriter(CUBE_MAGIC, CUBE_VERSION)
    w.u32(cube.bands, height, width, LAYOUT_BSQ)
    w.f64(cube.data)
    meta = {}
    if cube.provenance is not None:
        meta["provenance"] = cube.provenance.model_dump()
    if cube.wavelengths is not None:
        meta["wavelengths"] = [float(x) for x in cube.wavelengths]
    blob = json.dumps(meta, sort_keys=True).encode("utf-8") if meta else b""
    w.u32(len(blob))
    w.raw(blob)
    return w.getvalue()


def _decode_metadata(blob: bytes, path: Path) -> Tuple[Optional[Provenance], Optional[np.ndarray]]:
    try:
        meta = json.loads(blob.decode("utf-8")) if blob else {}
        if not isinstance(meta, dict):
            raise ValueError(f"expected a JSON object, got {type(meta).__name__}")
        prov = meta.get("provenance")
        wl = meta.get("wavelengths")
        return (
            Provenance.model_validate(prov) if prov is not None else None,
            np.asarray(wl, dtype=np.float64) if wl is not None else None,
        )
    except (UnicodeDecodeError, ValueError, TypeError) as e:
        raise MetadataError(f"{path}: unreadable metadata block: {e}") from e


def decode_cube(data: bytes, path: Path = Path("<memory>")) -> HsiCube:
    r = BinaryReader(data, path, CUBE_MAGIC, CUBE_VERSION)
    B, height, width, tag = (int(v) for v in r.u32(4))
    if tag != LAYOUT_BSQ:
        raise FormatError(f"{path}: unsupported layout tag {tag}")
    values = r.f64(B * height * width).reshape(B, height * width)
    length = int(r.u32(1, "metadata length")[0])
    blob = r.take(length, "metadata")
    r.finish()
    provenance, wavelengths = _decode_metadata(blob, path)
    return HsiCube(
        data=values,
        layout=(height, width),
        provenance=provenance,
        wavelengths=wavelengths,
    )


def write_cube(cube: HsiCube, path: Path) -> None:
    write_bytes_atomic(Path(path), encode_cube(cube))


def read_cube(path: Path) -> HsiCube:
    path = Path(path)
    return decode_cube(read_file(path), path)
