"""
Little-endian reader/writer shared by the cube and model formats.

Both formats start with a 4-byte magic followed by a u32 format version.
"""
from __future__ import annotations

from pathlib import Path
from typing import List

import numpy as np

from ..errors import BadMagicError, FormatError, TruncatedPayloadError, VersionMismatchError

U32 = np.dtype("<u4")
F64 = np.dtype("<f8")


class BinaryWriter:
    def __init__(self, magic: bytes, version: int) -> None:
        self._parts: List[bytes] = [magic]
        self.u32(version)

    def u32(self, *values: int) -> None:
        self._parts.append(np.asarray(values, dtype=U32).tobytes())

    def f64(self, values) -> None:
        self._parts.append(np.ascontiguousarray(values, dtype=F64).tobytes())

    def raw(self, payload: bytes) -> None:
        self._parts.append(payload)

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class BinaryReader:
    def __init__(self, data: bytes, path: Path, magic: bytes, version: int) -> None:
        self._data = data
        self._pos = 0
        self.path = path
        head = self.take(len(magic), "magic")
        if head != magic:
            raise BadMagicError(f"{path}: expected magic {magic!r}, found {head!r}")
        found = int(self.u32(1)[0])
        if found != version:
            raise VersionMismatchError(f"{path}: format version {found}, this build reads {version}")

    def take(self, n: int, what: str) -> bytes:
        end = self._pos + n
        if end > len(self._data):
            raise TruncatedPayloadError(
                f"{self.path}: {what} needs {n} bytes at offset {self._pos}, file has {len(self._data) - self._pos}"
            )
        chunk = self._data[self._pos : end]
        self._pos = end
        return chunk

    def u32(self, count: int, what: str = "header") -> np.ndarray:
        return np.frombuffer(self.take(count * U32.itemsize, what), dtype=U32)

    def f64(self, count: int, what: str = "payload") -> np.ndarray:
        return np.frombuffer(self.take(count * F64.itemsize, what), dtype=F64).astype(np.float64)

    def finish(self) -> None:
        extra = len(self._data) - self._pos
        if extra:
            raise FormatError(f"{self.path}: {extra} unexpected trailing bytes")


def read_file(path: Path) -> bytes:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return path.read_bytes()
