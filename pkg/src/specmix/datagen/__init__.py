from .library import synth_endmembers
from .mixing import (
    MIXERS,
    Scene,
    add_noise,
    generate_scene,
    mix_bilinear,
    mix_linear,
    mix_ppnm,
    regenerate,
    sample_abundances,
)
from .types import MIXTURE_MODELS, AbundanceMap, HsiCube, Provenance, SpectralLibrary, default_layout

__all__ = [
    "MIXERS",
    "MIXTURE_MODELS",
    "AbundanceMap",
    "HsiCube",
    "Provenance",
    "Scene",
    "SpectralLibrary",
    "add_noise",
    "default_layout",
    "generate_scene",
    "mix_bilinear",
    "mix_linear",
    "mix_ppnm",
    "regenerate",
    "sample_abundances",
    "synth_endmembers",
]
