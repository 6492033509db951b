from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(seed: int, stream: str) -> int:
    """
    Stable 63-bit seed for a named substream of `seed`.
    """
    digest = hashlib.sha256(f"{int(seed)}:{stream}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def substream(seed: int, stream: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, stream))
