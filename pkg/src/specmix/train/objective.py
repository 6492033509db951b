"""
Training objective and its reverse-mode gradient.

    J = (1/n) sum_c ||x_hat_c - x_c||^2
        + lambda * sum_k ||W_k||_F^2          (nonlinear-branch weights only)
        + gamma  * sum_i tv(v_i)              (decoder endmember blocks)

Kink conventions: relu' and lrelu' take the positive-side value at 0, and
sign(0) = 0 for both the abs in the utility layer and the TV term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import numpy.typing as npt

from ..errors import ContractError
from ..model.forward import ABS_SUM_FLOOR, UNMIX_CHUNK, ForwardTrace, forward
from ..model.params import ModelParams
from ..numerics import as_f64, relu_grad, stepwise_sum_adjoint, tv_subgradient


@dataclass(frozen=True)
class ObjectiveTerms:
    j_data: float
    j_reg: float
    j_smth: float
    j_total: float

    def as_dict(self) -> Dict[str, float]:
        return {"j_data": self.j_data, "j_reg": self.j_reg, "j_smth": self.j_smth, "j_total": self.j_total}

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite([self.j_data, self.j_reg, self.j_smth, self.j_total])))


def _combine(p: ModelParams, j_data: float, lam: float, gamma: float) -> ObjectiveTerms:
    j_reg = float(sum(np.sum(layer.weight * layer.weight) for layer in p.decoder_nonlinear))
    j_smth = float(np.abs(np.diff(p.decoder_linear.columns, axis=0)).sum())
    return ObjectiveTerms(j_data, j_reg, j_smth, j_data + lam * j_reg + gamma * j_smth)


def _squared_residual(trace: ForwardTrace) -> float:
    r = trace.x_hat - trace.x
    return float(np.sum(r * r))


def _terms(p: ModelParams, trace: ForwardTrace, lam: float, gamma: float) -> ObjectiveTerms:
    return _combine(p, _squared_residual(trace) / trace.x.shape[1], lam, gamma)


def objective(
    p: ModelParams, x_batch: npt.ArrayLike, lam: float, gamma: float, chunk: int = UNMIX_CHUNK
) -> ObjectiveTerms:
    """
    Loss terms over all columns of `x_batch`. The data term is accumulated
    chunk by chunk, left to right, so memory stays bounded by `chunk` pixels.
    """
    x = as_f64(x_batch, name="x_batch")
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[1] if x.ndim == 2 else 0
    if n == 0:
        raise ContractError(f"batch must hold at least one pixel, got shape {x.shape}")
    total = 0.0
    for start in range(0, n, chunk):
        total += _squared_residual(forward(p, x[:, start : start + chunk]))
    return _combine(p, total / n, lam, gamma)


def _backward(p: ModelParams, t: ForwardTrace, lam: float, gamma: float) -> ModelParams:
    B, R = p.dims
    n = t.x.shape[1]
    act = p.activation
    W1, W2, W3 = p.decoder_nonlinear
    V = p.decoder_linear.columns

    dxh = (2.0 / n) * (t.x_hat - t.x)

    # nonlinear branch
    g1, g2, g3 = t.nl_pre
    q1, q2 = t.nl_act
    dg3 = dxh * relu_grad(g3)
    dW3 = dg3 @ q2.T + 2.0 * lam * W3.weight
    dc3 = dg3.sum(axis=1)
    dg2 = (W3.weight.T @ dg3) * act.derivative(g2)
    dW2 = dg2 @ q1.T + 2.0 * lam * W2.weight
    dc2 = dg2.sum(axis=1)
    dg1 = (W2.weight.T @ dg2) * act.derivative(g1)
    dW1 = dg1 @ t.o1.T + 2.0 * lam * W1.weight
    dc1 = dg1.sum(axis=1)

    # both branches meet at o1
    do1 = W1.weight.T @ dg1 + stepwise_sum_adjoint(dxh, R)
    dy = (do1 * relu_grad(t.y)).reshape(R, B, n)
    dV = np.einsum("ibn,in->bi", dy, t.a_hat) + gamma * tv_subgradient(V)
    da = np.einsum("ibn,bi->in", dy, V)

    # a = |h| / sum|h|
    degenerate = t.abs_sum < ABS_SUM_FLOOR
    safe = np.where(degenerate, 1.0, t.abs_sum)
    ds = (da - np.sum(da * t.a_hat, axis=0, keepdims=True)) / safe[None, :]
    dh = ds * np.sign(t.h_raw)
    dh[:, degenerate] = 0.0

    # encoder, output layer first
    grads_enc = []
    inputs = [t.x] + t.enc_act
    delta = dh
    for k in range(3, -1, -1):
        layer = p.encoder[k]
        grads_enc.append((delta @ inputs[k].T, delta.sum(axis=1)))
        if k > 0:
            delta = (layer.weight.T @ delta) * act.derivative(t.enc_pre[k - 1])
    grads_enc.reverse()

    tensors = []
    for dU, db in grads_enc:
        tensors.extend([dU, db])
    tensors.append(dV)
    tensors.extend([dW1, dc1, dW2, dc2, dW3, dc3])
    return p.with_tensors(tensors)


def value_and_gradient(
    p: ModelParams, x_batch: npt.ArrayLike, lam: float, gamma: float
) -> Tuple[ObjectiveTerms, ModelParams]:
    trace = forward(p, x_batch)
    return _terms(p, trace, lam, gamma), _backward(p, trace, lam, gamma)


def gradient(p: ModelParams, x_batch: npt.ArrayLike, lam: float, gamma: float) -> ModelParams:
    """dJ/dtheta for every parameter, shaped like `p`."""
    return value_and_gradient(p, x_batch, lam, gamma)[1]
