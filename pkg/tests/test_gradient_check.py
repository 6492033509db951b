from __future__ import annotations

from typing import List, Tuple

import numpy as np
import pytest

from specmix.model import forward, init_params
from specmix.model.params import ModelParams
from specmix.numerics import Activation
from specmix.train import gradient, objective

STEP = 1e-6
LAM = 1e-3
GAMMA = 1e-3


def _tiny_net(seed: int, activation: Activation = Activation()) -> Tuple[ModelParams, np.ndarray]:
    """B=6, R=2, batch of 3, random biases and a few negative endmember entries."""
    rng = np.random.default_rng(seed)
    p = init_params(rng.random((6, 2)) + 0.1, seed, activation)
    tensors = p.tensors()
    for i, (name, t) in enumerate(p.named_tensors()):
        if name.startswith(("b", "c")):
            tensors[i] = 0.2 * rng.standard_normal(t.shape)
        elif name == "V":
            tensors[i] = rng.random(t.shape) - 0.2
    return p.with_tensors(tensors), rng.random((6, 3))


def _probe(p: ModelParams, x: np.ndarray, lam: float, gamma: float) -> Tuple[List[np.ndarray], float]:
    """Objective value plus the sign pattern of every non-smooth point in it."""
    t = forward(p, x)
    r = t.x_hat - x
    j = float(np.sum(r * r)) / x.shape[1]
    j += lam * sum(float(np.sum(layer.weight**2)) for layer in p.decoder_nonlinear)
    j += gamma * float(np.abs(np.diff(p.decoder_linear.columns, axis=0)).sum())
    pattern = [np.sign(t.h_raw), t.y >= 0, t.nl_pre[2] >= 0, np.sign(np.diff(p.decoder_linear.columns, axis=0))]
    if p.activation.name != "sigmoid":
        pattern += [z >= 0 for z in t.enc_pre] + [g >= 0 for g in t.nl_pre[:2]]
    return pattern, j


def _same(a: List[np.ndarray], b: List[np.ndarray]) -> bool:
    return all(np.array_equal(u, v) for u, v in zip(a, b))


def _check(p: ModelParams, x: np.ndarray, lam: float = LAM, gamma: float = GAMMA) -> int:
    analytic = gradient(p, x, lam, gamma).tensors()
    base, _ = _probe(p, x, lam, gamma)
    checked = 0
    for ti, tensor in enumerate(p.tensors()):
        for idx in np.ndindex(tensor.shape):
            plus, minus = p.tensors(), p.tensors()
            plus[ti], minus[ti] = tensor.copy(), tensor.copy()
            plus[ti][idx] += STEP
            minus[ti][idx] -= STEP
            kinks_plus, j_plus = _probe(p.with_tensors(plus), x, lam, gamma)
            kinks_minus, j_minus = _probe(p.with_tensors(minus), x, lam, gamma)
            if not (_same(base, kinks_plus) and _same(base, kinks_minus)):
                continue
            fd = (j_plus - j_minus) / (2 * STEP)
            ga = analytic[ti][idx]
            assert abs(ga - fd) <= 1e-5 * abs(fd) + 1e-8, f"tensor {ti} index {idx}: {ga} vs {fd}"
            checked += 1
    return checked


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_gradient_matches_central_differences(seed: int):
    p, x = _tiny_net(seed)
    total = sum(t.size for t in p.tensors())
    checked = _check(p, x)
    assert checked >= 0.9 * total


def test_gradient_matches_central_differences_sigmoid():
    p, x = _tiny_net(7, Activation("sigmoid"))
    assert _check(p, x) > 0


def test_weight_decay_gradient_is_two_lambda_w():
    p, x = _tiny_net(0)
    lam = 0.5
    with_decay = gradient(p, x, lam, 0.0)
    without = gradient(p, x, 0.0, 0.0)
    for layer_a, layer_b, layer in zip(with_decay.decoder_nonlinear, without.decoder_nonlinear, p.decoder_nonlinear):
        np.testing.assert_allclose(layer_a.weight - layer_b.weight, 2 * lam * layer.weight, rtol=1e-10, atol=1e-14)
        np.testing.assert_array_equal(layer_a.bias, layer_b.bias)


def test_smoothness_gradient_matches_finite_differences():
    p, x = _tiny_net(1)
    tensors = p.tensors()
    tensors[8] = np.array([[1.0, 0.3], [2.0, 0.9], [4.0, 0.1], [3.0, 0.5], [3.5, 0.2], [1.0, 0.8]])
    p = p.with_tensors(tensors)
    gamma = 0.7
    diff = gradient(p, x, 0.0, gamma).decoder_linear.columns - gradient(p, x, 0.0, 0.0).decoder_linear.columns
    v = p.decoder_linear.columns
    fd = np.zeros_like(v)
    for idx in np.ndindex(v.shape):
        up, dn = v.copy(), v.copy()
        up[idx] += STEP
        dn[idx] -= STEP
        fd[idx] = gamma * (np.abs(np.diff(up, axis=0)).sum() - np.abs(np.diff(dn, axis=0)).sum()) / (2 * STEP)
    np.testing.assert_allclose(diff, fd, rtol=1e-6, atol=1e-8)


def test_objective_terms():
    p, x = _tiny_net(2)
    t = objective(p, x, 0.0, 0.0)
    assert t.j_total == t.j_data
    ones = p.tensors()
    for i in (9, 11, 13):
        ones[i] = np.ones_like(ones[i])
    q = p.with_tensors(ones)
    k = sum(q.tensors()[i].size for i in (9, 11, 13))
    a = objective(q, x, 2.0, 0.0)
    assert a.j_reg == k
    assert a.j_total - a.j_data == pytest.approx(2.0 * k, rel=1e-12)


def test_perfect_reconstruction_has_zero_data_term():
    # with a zero encoder the reconstruction does not depend on the input
    p, _ = _tiny_net(3)
    tensors = [np.zeros_like(t) for t in p.tensors()]
    tensors[8] = np.abs(p.decoder_linear.columns)
    q = p.with_tensors(tensors)
    x = forward(q, np.zeros((6, 4))).x_hat
    assert objective(q, x, 0.0, 0.0).j_data == 0.0
