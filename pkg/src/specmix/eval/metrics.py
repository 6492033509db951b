"""
Endmember and abundance quality metrics.

SAD is reported in degrees and SID in nats. Endmember sets are (B, R) matrices
with one spectrum per column; abundance sets are (R, N).
"""
from __future__ import annotations

from typing import List

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from ..errors import ContractError
from ..numerics import as_f64

SID_FLOOR = 1e-12


def _same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ContractError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def sad(m: npt.ArrayLike, m_hat: npt.ArrayLike) -> float:
    m = as_f64(m, ndim=1, name="m")
    m_hat = as_f64(m_hat, ndim=1, name="m_hat")
    _same_shape(m, m_hat, "sad")
    return float(sad_matrix(m[:, None], m_hat[:, None])[0, 0])


def sad_matrix(m1: npt.ArrayLike, m2: npt.ArrayLike) -> np.ndarray:
    """
    (R1, R2) angles in degrees between the columns of m1 (B, R1) and m2 (B, R2).

    Computed as 2 atan2(|u - v|, |u + v|) on unit vectors; parallel spectra
    give exactly 0.
    """
    m1 = as_f64(m1, ndim=2, name="m1")
    m2 = as_f64(m2, ndim=2, name="m2")
    if m1.shape[0] != m2.shape[0]:
        raise ContractError(f"sad_matrix: {m1.shape[0]} bands vs {m2.shape[0]} bands")
    n1 = np.linalg.norm(m1, axis=0)
    n2 = np.linalg.norm(m2, axis=0)
    if np.any(n1 == 0.0) or np.any(n2 == 0.0):
        raise ContractError("sad is undefined for a zero-norm spectrum")
    u = (m1 / n1)[:, :, None]
    v = (m2 / n2)[:, None, :]
    return np.degrees(2.0 * np.arctan2(np.linalg.norm(u - v, axis=0), np.linalg.norm(u + v, axis=0)))


def _band_profile(m: np.ndarray, name: str) -> np.ndarray:
    if np.any(m < 0):
        raise ContractError(f"sid: {name} has negative entries")
    total = float(m.sum())
    if total <= 0.0:
        raise ContractError(f"sid: {name} must have a positive sum")
    p = np.maximum(m / total, SID_FLOOR)
    return p / p.sum()


def sid(m: npt.ArrayLike, m_hat: npt.ArrayLike, symmetric: bool = False) -> float:
    """
    Spectral information divergence sum_j p_j log(p_j / q_j).

    With `symmetric=True` the reverse divergence is added.
    """
    m = as_f64(m, ndim=1, name="m")
    m_hat = as_f64(m_hat, ndim=1, name="m_hat")
    _same_shape(m, m_hat, "sid")
    p = _band_profile(m, "m")
    q = _band_profile(m_hat, "m_hat")
    d = float(np.sum(p * np.log(p / q)))
    if symmetric:
        d += float(np.sum(q * np.log(q / p)))
    # rounding noise on identical profiles
    return max(d, 0.0)


def rmse(a_true: npt.ArrayLike, a_hat: npt.ArrayLike) -> float:
    a_true = as_f64(a_true, ndim=2, name="a_true")
    a_hat = as_f64(a_hat, ndim=2, name="a_hat")
    _same_shape(a_true, a_hat, "rmse")
    diff = a_true - a_hat
    return float(np.sqrt(np.sum(diff * diff) / diff.size))


def re(x: npt.ArrayLike, x_hat: npt.ArrayLike, R: int) -> float:
    """sqrt((1 / (N R)) * sum_i ||x_i - x_hat_i||_2), norms unsquared."""
    x = as_f64(x, ndim=2, name="x")
    x_hat = as_f64(x_hat, ndim=2, name="x_hat")
    _same_shape(x, x_hat, "re")
    if R < 1:
        raise ContractError(f"re needs R >= 1, got {R}")
    norms = np.linalg.norm(x - x_hat, axis=0)
    return float(np.sqrt(norms.sum() / (x.shape[1] * R)))


def nonlinear_energy_map(x_nlin: npt.ArrayLike) -> np.ndarray:
    """Per-pixel squared norm of a (B, N) nonlinear-branch output."""
    data = as_f64(getattr(x_nlin, "data", x_nlin), ndim=2, name="x_nlin")
    if not np.all(np.isfinite(data)):
        raise ContractError("x_nlin contains NaN or Inf")
    return np.einsum("bn,bn->n", data, data)


def align(m_hat: npt.ArrayLike, m_true: npt.ArrayLike) -> List[int]:
    """
    Permutation minimising total SAD; perm[k] is the true index matched to
    estimated endmember k.
    """
    m_hat = as_f64(m_hat, ndim=2, name="m_hat")
    m_true = as_f64(m_true, ndim=2, name="m_true")
    _same_shape(m_hat, m_true, "align")
    cost = sad_matrix(m_hat, m_true)
    rows, cols = linear_sum_assignment(cost)
    perm = [0] * m_hat.shape[1]
    for r, c in zip(rows, cols):
        perm[int(r)] = int(c)
    return perm


def apply_alignment(perm: List[int], m_hat: np.ndarray, a_hat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder estimates so column/row k corresponds to true endmember k."""
    R = len(perm)
    order = np.empty(R, dtype=int)
    for k, t in enumerate(perm):
        order[t] = k
    return m_hat[:, order], a_hat[order, :]
