from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import ContractError
from ..model.params import ModelParams


@dataclass(frozen=True, eq=False)
class AdamState:
    m: List[np.ndarray]
    v: List[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, p: ModelParams, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        zeros = [np.zeros_like(x) for x in p.tensors()]
        return cls(m=zeros, v=[z.copy() for z in zeros], t=0, beta1=beta1, beta2=beta2, eps=eps)


def adam_step(state: AdamState, p: ModelParams, g: ModelParams, lr: float) -> Tuple[AdamState, ModelParams]:
    """One bias-corrected Adam update. Inputs are left untouched."""
    params, grads = p.tensors(), g.tensors()
    if len(state.m) != len(params) or any(a.shape != b.shape for a, b in zip(params, grads)):
        raise ContractError("gradient and state must mirror the parameter layout")
    b1, b2 = state.beta1, state.beta2
    t = state.t + 1
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    new_m, new_v, new_p = [], [], []
    for x, gx, m, v in zip(params, grads, state.m, state.v):
        m = b1 * m + (1.0 - b1) * gx
        v = b2 * v + (1.0 - b2) * (gx * gx)
        new_p.append(x - lr * (m / c1) / (np.sqrt(v / c2) + state.eps))
        new_m.append(m)
        new_v.append(v)
    return (
        AdamState(m=new_m, v=new_v, t=t, beta1=b1, beta2=b2, eps=state.eps),
        p.with_tensors(new_p),
    )
