from __future__ import annotations

import numpy as np
import pytest

from specmix.errors import BadMagicError, TruncatedPayloadError
from specmix.io import read_model, write_model
from specmix.io.model_file import decode_model, encode_model, tensor_shapes
from specmix.model import forward, init_params
from specmix.numerics import Activation

ACTIVATIONS = (Activation(), Activation("lrelu", 0.2), Activation("relu"), Activation("sigmoid"))


def test_model_round_trip_is_bitwise():
    rng = np.random.default_rng(0)
    for i in range(100):
        B, R = int(rng.integers(2, 9)), int(rng.integers(1, 4))
        p = init_params(rng.random((B, R)), seed=i, activation=ACTIVATIONS[i % len(ACTIVATIONS)])
        p = p.with_tensors([rng.standard_normal(t.shape) for t in p.tensors()])
        back = decode_model(encode_model(p))
        assert back.activation == p.activation
        assert back.dims == (B, R)
        for a, b in zip(p.tensors(), back.tensors()):
            assert a.tobytes() == b.tobytes()


def test_tensor_shapes_follow_parameter_order():
    p = init_params(np.ones((5, 3)), seed=0)
    assert tensor_shapes(5, 3) == [t.shape for t in p.tensors()]


def test_model_file_on_disk(tmp_path):
    p = init_params(np.random.default_rng(1).random((8, 2)), seed=3)
    path = tmp_path / "model.smxm"
    write_model(p, path)
    back = read_model(path)
    x = np.random.default_rng(2).random((8, 5))
    assert np.array_equal(forward(back, x).x_hat, forward(p, x).x_hat)


def test_bad_magic_and_truncation():
    blob = encode_model(init_params(np.ones((4, 2)), seed=0))
    with pytest.raises(BadMagicError):
        decode_model(b"SMXC" + blob[4:])
    with pytest.raises(TruncatedPayloadError):
        decode_model(blob[:-1])
