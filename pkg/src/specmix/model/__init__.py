from .forward import (
    ForwardTrace,
    UnmixResult,
    abs_normalize,
    decoder_forward,
    encoder_forward,
    extract_endmembers,
    forward,
    unmix,
)
from .params import DenseLayer, ModelParams, init_params

__all__ = [
    "DenseLayer",
    "ForwardTrace",
    "ModelParams",
    "UnmixResult",
    "abs_normalize",
    "decoder_forward",
    "encoder_forward",
    "extract_endmembers",
    "forward",
    "init_params",
    "unmix",
]
