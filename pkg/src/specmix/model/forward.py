from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import numpy.typing as npt

from ..datagen.types import AbundanceMap, HsiCube
from ..errors import ContractError
from ..numerics import as_f64, blkdiag_apply, relu, stepwise_sum
from .params import ModelParams

ABS_SUM_FLOOR = 1e-12
UNMIX_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class ForwardTrace:
    x: np.ndarray
    enc_pre: List[np.ndarray]  # z1..z3
    enc_act: List[np.ndarray]  # h1..h3
    h_raw: np.ndarray
    abs_sum: np.ndarray  # (n,) column sums of |h_raw|
    a_hat: np.ndarray
    y: np.ndarray  # V applied to a_hat, before the relu
    o1: np.ndarray
    x_lin: np.ndarray
    nl_pre: List[np.ndarray]  # g1..g3
    nl_act: List[np.ndarray]  # q1, q2
    x_nlin: np.ndarray
    x_hat: np.ndarray


def _check_batch(p: ModelParams, x: npt.ArrayLike) -> np.ndarray:
    x = as_f64(x, name="x_batch")
    if x.ndim == 1:
        x = x[:, None]
    B, _ = p.dims
    if x.ndim != 2 or x.shape[0] != B:
        raise ContractError(f"batch must be ({B}, n), got shape {x.shape}")
    return x


def _encode(p: ModelParams, x: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:
    pre: List[np.ndarray] = []
    act: List[np.ndarray] = []
    h = x
    for layer in p.encoder[:-1]:
        z = layer.apply(h)
        h = p.activation(z)
        pre.append(z)
        act.append(h)
    return pre, act, p.encoder[-1].apply(h)


def encoder_forward(p: ModelParams, x_batch: npt.ArrayLike) -> np.ndarray:
    """Three activated layers then an affine output layer; returns (R, n)."""
    x = _check_batch(p, x_batch)
    if not np.all(np.isfinite(x)):
        raise ContractError("batch contains NaN or Inf")
    return _encode(p, x)[2]


def _abs_normalize(h_raw: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mag = np.abs(h_raw)
    total = mag.sum(axis=0)
    R = h_raw.shape[0]
    degenerate = total < ABS_SUM_FLOOR
    safe = np.where(degenerate, 1.0, total)
    a = mag / safe[None, :]
    a[:, degenerate] = 1.0 / R
    return a, total


def abs_normalize(h_raw: npt.ArrayLike) -> np.ndarray:
    """
    |h| divided by its column sum. A column whose absolute sum is below 1e-12
    maps to the uniform vector 1/R.
    """
    h = as_f64(h_raw, name="h_raw")
    single = h.ndim == 1
    if single:
        h = h[:, None]
    if h.ndim != 2 or h.shape[0] < 1:
        raise ContractError(f"h_raw must be (R,) or (R, n), got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ContractError("h_raw contains NaN or Inf")
    a, _ = _abs_normalize(h)
    return a[:, 0] if single else a


def _decode(p: ModelParams, a: np.ndarray):
    B, R = p.dims
    y = blkdiag_apply(p.decoder_linear, a)
    o1 = np.maximum(y, 0.0)
    x_lin = stepwise_sum(o1, B, R)
    W1, W2, W3 = p.decoder_nonlinear
    g1 = W1.apply(o1)
    q1 = p.activation(g1)
    g2 = W2.apply(q1)
    q2 = p.activation(g2)
    g3 = W3.apply(q2)
    x_nlin = np.maximum(g3, 0.0)
    return y, o1, x_lin, [g1, g2, g3], [q1, q2], x_nlin, x_lin + x_nlin


def decoder_forward(p: ModelParams, a_hat: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x_lin, x_nlin, x_hat), each (B, n)."""
    a = as_f64(a_hat, name="a_hat")
    if a.ndim == 1:
        a = a[:, None]
    _, R = p.dims
    if a.ndim != 2 or a.shape[0] != R:
        raise ContractError(f"a_hat must be ({R}, n), got shape {a.shape}")
    _, _, x_lin, _, _, x_nlin, x_hat = _decode(p, a)
    return x_lin, x_nlin, x_hat


def forward(p: ModelParams, x_batch: npt.ArrayLike) -> ForwardTrace:
    """Full pass keeping every intermediate the backward pass needs."""
    x = _check_batch(p, x_batch)
    enc_pre, enc_act, h_raw = _encode(p, x)
    a_hat, abs_sum = _abs_normalize(h_raw)
    y, o1, x_lin, nl_pre, nl_act, x_nlin, x_hat = _decode(p, a_hat)
    return ForwardTrace(
        x=x,
        enc_pre=enc_pre,
        enc_act=enc_act,
        h_raw=h_raw,
        abs_sum=abs_sum,
        a_hat=a_hat,
        y=y,
        o1=o1,
        x_lin=x_lin,
        nl_pre=nl_pre,
        nl_act=nl_act,
        x_nlin=x_nlin,
        x_hat=x_hat,
    )


def extract_endmembers(p: ModelParams) -> np.ndarray:
    """The clamped decoder blocks, i.e. the endmembers the forward pass uses."""
    return np.asarray(relu(p.decoder_linear.columns))


@dataclass(frozen=True, eq=False)
class UnmixResult:
    abundances: AbundanceMap
    x_lin: HsiCube
    x_nlin: HsiCube
    x_hat: HsiCube


def unmix(p: ModelParams, X: HsiCube, chunk: int = UNMIX_CHUNK) -> UnmixResult:
    B, R = p.dims
    if X.bands != B:
        raise ContractError(f"cube has {X.bands} bands but the model expects {B}")
    N = X.pixels
    a = np.empty((R, N))
    parts = {"x_lin": np.empty((B, N)), "x_nlin": np.empty((B, N)), "x_hat": np.empty((B, N))}
    for start in range(0, N, chunk):
        sl = slice(start, min(start + chunk, N))
        trace = forward(p, X.data[:, sl])
        a[:, sl] = trace.a_hat
        parts["x_lin"][:, sl] = trace.x_lin
        parts["x_nlin"][:, sl] = trace.x_nlin
        parts["x_hat"][:, sl] = trace.x_hat

    def cube(data: np.ndarray) -> HsiCube:
        return HsiCube(data=data, layout=X.layout, wavelengths=X.wavelengths)

    return UnmixResult(
        abundances=AbundanceMap(values=a, layout=X.layout),
        x_lin=cube(parts["x_lin"]),
        x_nlin=cube(parts["x_nlin"]),
        x_hat=cube(parts["x_hat"]),
    )
