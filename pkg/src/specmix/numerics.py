"""
Dense primitives shared by the generator, the network and the metrics.

All arrays are float64. Batches are trailing: a (B,) vector is one pixel, a
(B, n) matrix is n pixels stored column-wise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Literal, Union

import numpy as np
import numpy.typing as npt
from scipy.special import expit

from .errors import ContractError

Vec64 = npt.NDArray[np.float64]
Mat64 = npt.NDArray[np.float64]
ArrayLike = Union[float, npt.ArrayLike]

ActivationName = Literal["lrelu", "relu", "sigmoid"]
ACTIVATION_TAGS: Dict[str, int] = {"lrelu": 0, "relu": 1, "sigmoid": 2}
DEFAULT_LRELU_SLOPE = 0.01


def as_f64(values: npt.ArrayLike, ndim: int | None = None, name: str = "array") -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ContractError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    return arr


def require_finite(arr: np.ndarray, name: str = "array") -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains NaN or Inf")
    return arr


def _out(result: np.ndarray) -> Union[float, np.ndarray]:
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class BlockDiagWeights:
    """
    The R endmember columns v_1..v_R of the decoder's first layer.

    Stored as a (B, R) matrix whose column i is v_i. The (BR, R) block-diagonal
    matrix they define is never materialised except by `dense()`.
    """

    columns: Mat64

    def __post_init__(self) -> None:
        cols = as_f64(self.columns, ndim=2, name="block columns")
        if cols.shape[0] < 1 or cols.shape[1] < 1:
            raise ContractError(f"block columns must be non-empty, got shape {cols.shape}")
        object.__setattr__(self, "columns", cols)

    @property
    def bands(self) -> int:
        return int(self.columns.shape[0])

    @property
    def count(self) -> int:
        return int(self.columns.shape[1])

    def dense(self) -> Mat64:
        B, R = self.columns.shape
        out = np.zeros((B * R, R), dtype=np.float64)
        for i in range(R):
            out[i * B : (i + 1) * B, i] = self.columns[:, i]
        return out


def blkdiag_apply(w: BlockDiagWeights, h: npt.ArrayLike) -> np.ndarray:
    """col{h_1 v_1, ..., h_R v_R}; h is (R,) or (R, n)."""
    h = as_f64(h, name="h")
    B, R = w.columns.shape
    if h.ndim not in (1, 2) or h.shape[0] != R:
        raise ContractError(f"h must have {R} rows, got shape {h.shape}")
    if h.ndim == 1:
        return (w.columns * h[None, :]).T.reshape(B * R)
    n = h.shape[1]
    return (w.columns.T[:, :, None] * h[:, None, :]).reshape(B * R, n)


def stepwise_sum(y: npt.ArrayLike, B: int, R: int) -> np.ndarray:
    """
    Collapse a (BR,) or (BR, n) stack of R band-blocks to B bands.

    Blocks are accumulated in ascending order 1..R.
    """
    y = as_f64(y, name="y")
    if B < 1 or R < 1 or y.ndim not in (1, 2) or y.shape[0] != B * R:
        raise ContractError(f"y has {y.shape[0] if y.ndim else 0} rows, expected B*R = {B}*{R}")
    blocks = y.reshape((R, B) + y.shape[1:])
    out = blocks[0].copy()
    for i in range(1, R):
        out += blocks[i]
    return out


def stepwise_sum_adjoint(g: np.ndarray, R: int) -> np.ndarray:
    """Transpose of stepwise_sum: repeat a (B, ...) gradient once per block."""
    return np.concatenate([g] * R, axis=0)


def lrelu(x: ArrayLike, slope: float = DEFAULT_LRELU_SLOPE) -> Union[float, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    return _out(np.where(x >= 0, x, slope * x))


def relu(x: ArrayLike) -> Union[float, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    return _out(np.maximum(x, 0.0))


def sigmoid(x: ArrayLike) -> Union[float, np.ndarray]:
    return _out(np.asarray(expit(np.asarray(x, dtype=np.float64))))


# Derivatives at the kink take the positive-side value.
def lrelu_grad(x: np.ndarray, slope: float = DEFAULT_LRELU_SLOPE) -> np.ndarray:
    return np.where(x >= 0, 1.0, slope)


def relu_grad(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, 1.0, 0.0)


def sigmoid_grad(x: np.ndarray) -> np.ndarray:
    s = expit(x)
    return s * (1.0 - s)


@dataclass(frozen=True)
class Activation:
    name: ActivationName = "lrelu"
    slope: float = DEFAULT_LRELU_SLOPE

    def __post_init__(self) -> None:
        if self.name not in ACTIVATION_TAGS:
            raise ContractError(f"unknown activation {self.name!r}; expected one of {sorted(ACTIVATION_TAGS)}")
        if not (0.0 < self.slope < 1.0):
            raise ContractError(f"lrelu slope must lie in (0, 1), got {self.slope}")

    @property
    def tag(self) -> int:
        return ACTIVATION_TAGS[self.name]

    @classmethod
    def from_tag(cls, tag: int, slope: float) -> "Activation":
        for name, value in ACTIVATION_TAGS.items():
            if value == tag:
                return cls(name=name, slope=slope)  # type: ignore[arg-type]
        raise ContractError(f"unknown activation tag {tag}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.name == "lrelu":
            return np.where(x >= 0, x, self.slope * x)
        if self.name == "relu":
            return np.maximum(x, 0.0)
        return expit(x)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        if self.name == "lrelu":
            return lrelu_grad(x, self.slope)
        if self.name == "relu":
            return relu_grad(x)
        return sigmoid_grad(x)


def tv_norm(v: npt.ArrayLike) -> float:
    """First-order total variation sum_j |v[j+1] - v[j]| of one spectrum."""
    v = as_f64(v, ndim=1, name="v")
    if v.shape[0] < 2:
        raise ContractError(f"tv_norm needs at least 2 entries, got {v.shape[0]}")
    return float(np.abs(np.diff(v)).sum())


def tv_subgradient(v: np.ndarray) -> np.ndarray:
    """Subgradient of tv_norm with sign(0) = 0; works column-wise on (B, R)."""
    s = np.sign(np.diff(v, axis=0))
    g = np.zeros_like(v)
    g[1:] += s
    g[:-1] -= s
    return g
