"""
Vertex Component Analysis, used to seed the decoder's endmember columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .datagen.types import HsiCube
from .errors import ContractError, DegenerateDataError
from .numerics import Mat64

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class VcaResult:
    endmembers: Mat64  # (B, R), columns copied from the cube
    selected_pixel_indices: List[int]
    projection_dim: int

    @property
    def count(self) -> int:
        return len(self.selected_pixel_indices)

    def names(self) -> List[str]:
        return [f"pixel_{i}" for i in self.selected_pixel_indices]

    def nonnegative(self) -> Mat64:
        """Endmembers with noise-driven negative reflectances set to 0, usable as a training init."""
        return np.maximum(self.endmembers, 0.0)


def _signal_subspace(Y: np.ndarray, R: int) -> np.ndarray:
    """Orthonormal (B, R) basis spanning the data mean and the top R-1 principal directions."""
    mean = Y.mean(axis=1)
    centered = Y - mean[:, None]
    U_c, _, _ = np.linalg.svd(centered, full_matrices=False)
    basis, _ = np.linalg.qr(np.column_stack([mean, U_c[:, : R - 1]]))
    return basis


def vca_extract(X: HsiCube, R: int, seed: int) -> VcaResult:
    """
    Pick R pixels of X as endmembers. Every pixel must project positively onto
    the data mean, which holds for nonnegative reflectance but not for
    mean-removed or signed cubes.
    """
    Y = X.data
    B, N = Y.shape
    if R < 2:
        raise ContractError(f"vca needs R >= 2, got {R}")
    if N < R:
        raise ContractError(f"vca needs at least R={R} pixels, got {N}")
    if R > B:
        raise DegenerateDataError(f"cannot extract {R} endmembers from {B} bands")

    s = np.linalg.svd(Y, compute_uv=False)
    if s[0] == 0.0 or s[R - 1] <= RANK_RTOL * s[0]:
        raise DegenerateDataError(f"data rank is below R={R}")

    Xp = _signal_subspace(Y, R).T @ Y
    u = Xp.mean(axis=1)
    denom = u @ Xp
    if np.any(denom <= 0):
        raise DegenerateDataError(
            f"{int(np.sum(denom <= 0))} pixels fall on the wrong side of the projective plane; "
            "shift the cube to nonnegative values"
        )
    Yp = Xp / denom[None, :]

    rng = np.random.default_rng(seed)
    A = np.zeros((R, R))
    A[R - 1, 0] = 1.0
    selected: List[int] = []
    for i in range(R):
        w = rng.standard_normal(R)
        f = w - A @ (np.linalg.pinv(A) @ w)
        f /= np.linalg.norm(f)
        score = np.abs(f @ Yp)
        idx = int(np.argmax(score))
        if idx in selected:
            for cand in np.argsort(-score, kind="stable"):
                if int(cand) not in selected:
                    idx = int(cand)
                    break
        selected.append(idx)
        A[:, i] = Yp[:, idx]

    return VcaResult(endmembers=Y[:, selected].copy(), selected_pixel_indices=selected, projection_dim=R)
