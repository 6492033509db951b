"""
Model parameter file (.smxm).

    "SMXM" | u32 version | u32 B | u32 R | u32 activation tag | f64 lrelu slope
    | every tensor of ModelParams.named_tensors() as little-endian f64, in order
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import List, Tuple

from ..model.params import ModelParams, encoder_units, nonlinear_units
from ..numerics import Activation
from ..utils.json_utils import write_bytes_atomic
from .binary import BinaryReader, BinaryWriter, read_file

MODEL_MAGIC = b"SMXM"
MODEL_VERSION = 1


def tensor_shapes(B: int, R: int) -> List[Tuple[int, ...]]:
    shapes: List[Tuple[int, ...]] = []
    enc = encoder_units(B, R)
    for k in range(4):
        shapes += [(enc[k + 1], enc[k]), (enc[k + 1],)]
    shapes.append((B, R))
    nl = nonlinear_units(B, R)
    for k in range(3):
        shapes += [(nl[k + 1], nl[k]), (nl[k + 1],)]
    return shapes


def encode_model(p: ModelParams) -> bytes:
    B, R = p.dims
    w = BinaryWriter(MODEL_MAGIC, MODEL_VERSION)
    w.u32(B, R, p.activation.tag)
    w.f64([p.activation.slope])
    for t in p.tensors():
        w.f64(t)
    return w.getvalue()


def decode_model(data: bytes, path: Path = Path("<memory>")) -> ModelParams:
    r = BinaryReader(data, path, MODEL_MAGIC, MODEL_VERSION)
    B, R, tag = (int(v) for v in r.u32(3))
    slope = float(r.f64(1, "activation slope")[0])
    tensors = []
    for shape in tensor_shapes(B, R):
        tensors.append(r.f64(math.prod(shape)).reshape(shape))
    r.finish()
    return ModelParams.from_tensors(tensors, Activation.from_tag(tag, slope))


def write_model(p: ModelParams, path: Path) -> None:
    write_bytes_atomic(Path(path), encode_model(p))


def read_model(path: Path) -> ModelParams:
    path = Path(path)
    return decode_model(read_file(path), path)
