from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from ..errors import ContractError
from ..numerics import Activation, BlockDiagWeights, Mat64, Vec64, as_f64
from ..utils.seeding import substream

ENCODER_WIDTHS = (32, 16, 4, 1)  # multiples of R


@dataclass(frozen=True, eq=False)
class DenseLayer:
    weight: Mat64  # (out, in)
    bias: Vec64  # (out,)

    def __post_init__(self) -> None:
        w = as_f64(self.weight, ndim=2, name="weight")
        b = as_f64(self.bias, ndim=1, name="bias")
        if b.shape[0] != w.shape[0]:
            raise ContractError(f"bias has {b.shape[0]} entries for {w.shape[0]} units")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.weight.shape[0]), int(self.weight.shape[1])

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.weight @ x + self.bias[:, None]


def encoder_units(B: int, R: int) -> List[int]:
    return [B] + [k * R for k in ENCODER_WIDTHS]


def nonlinear_units(B: int, R: int) -> List[int]:
    return [B * R, B, B, B]


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    Autoencoder parameters.

    Tensor order, used by serialization and by the optimizer:
    U1 b1 U2 b2 U3 b3 U4 b4, V, W1 c1 W2 c2 W3 c3.
    """

    encoder: Tuple[DenseLayer, ...]
    decoder_linear: BlockDiagWeights
    decoder_nonlinear: Tuple[DenseLayer, ...]
    activation: Activation = field(default_factory=Activation)

    def __post_init__(self) -> None:
        object.__setattr__(self, "encoder", tuple(self.encoder))
        object.__setattr__(self, "decoder_nonlinear", tuple(self.decoder_nonlinear))
        B, R = self.dims
        if len(self.encoder) != 4 or len(self.decoder_nonlinear) != 3:
            raise ContractError("expected 4 encoder layers and 3 nonlinear decoder layers")
        enc = encoder_units(B, R)
        for k, layer in enumerate(self.encoder):
            if layer.shape != (enc[k + 1], enc[k]):
                raise ContractError(f"encoder layer {k + 1} has shape {layer.shape}, expected {(enc[k + 1], enc[k])}")
        nl = nonlinear_units(B, R)
        for k, layer in enumerate(self.decoder_nonlinear):
            if layer.shape != (nl[k + 1], nl[k]):
                raise ContractError(f"nonlinear layer {k + 1} has shape {layer.shape}, expected {(nl[k + 1], nl[k])}")

    @property
    def dims(self) -> Tuple[int, int]:
        return self.decoder_linear.bands, self.decoder_linear.count

    def named_tensors(self) -> Iterator[Tuple[str, np.ndarray]]:
        for k, layer in enumerate(self.encoder, start=1):
            yield f"U{k}", layer.weight
            yield f"b{k}", layer.bias
        yield "V", self.decoder_linear.columns
        for k, layer in enumerate(self.decoder_nonlinear, start=1):
            yield f"W{k}", layer.weight
            yield f"c{k}", layer.bias

    def tensors(self) -> List[np.ndarray]:
        return [t for _, t in self.named_tensors()]

    @classmethod
    def from_tensors(cls, tensors: Sequence[npt.ArrayLike], activation: Activation) -> "ModelParams":
        """Build from values in `named_tensors` order."""
        t = list(tensors)
        if len(t) != 15:
            raise ContractError(f"expected 15 tensors, got {len(t)}")
        return cls(
            encoder=tuple(DenseLayer(t[2 * k], t[2 * k + 1]) for k in range(4)),
            decoder_linear=BlockDiagWeights(t[8]),
            decoder_nonlinear=tuple(DenseLayer(t[9 + 2 * k], t[10 + 2 * k]) for k in range(3)),
            activation=activation,
        )

    def with_tensors(self, tensors: Sequence[npt.ArrayLike]) -> "ModelParams":
        return ModelParams.from_tensors(tensors, self.activation)

    def zeros_like(self) -> "ModelParams":
        return self.with_tensors([np.zeros_like(t) for t in self.tensors()])

    def permuted(self, perm: Sequence[int]) -> "ModelParams":
        """
        Relabel endmembers: new endmember k is old endmember perm[k].

        Reorders the encoder output units, the decoder blocks and the matching
        input column blocks of the first nonlinear layer, leaving x_hat unchanged.
        """
        B, R = self.dims
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(R)):
            raise ContractError(f"{perm} is not a permutation of 0..{R - 1}")
        last = self.encoder[-1]
        encoder = self.encoder[:-1] + (DenseLayer(last.weight[perm, :], last.bias[perm]),)
        cols = np.concatenate([np.arange(p * B, (p + 1) * B) for p in perm])
        first = self.decoder_nonlinear[0]
        nonlinear = (DenseLayer(first.weight[:, cols], first.bias.copy()),) + self.decoder_nonlinear[1:]
        return ModelParams(
            encoder=encoder,
            decoder_linear=BlockDiagWeights(self.decoder_linear.columns[:, perm]),
            decoder_nonlinear=nonlinear,
            activation=self.activation,
        )


def _glorot(rng: np.random.Generator, fan_out: int, fan_in: int) -> np.ndarray:
    s = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-s, s, size=(fan_out, fan_in))


def init_params(m_init: npt.ArrayLike, seed: int, activation: Activation | None = None) -> ModelParams:
    """
    Glorot-uniform weights, zero biases and the decoder blocks set to `m_init`.
    """
    m = as_f64(m_init, ndim=2, name="m_init")
    if not np.all(np.isfinite(m)):
        raise ContractError("m_init contains NaN or Inf")
    if np.any(m < 0):
        raise ContractError("m_init must be nonnegative")
    B, R = m.shape
    if B < 2 or R < 1:
        raise ContractError(f"m_init must be (B >= 2, R >= 1), got {m.shape}")
    rng = substream(seed, "init")

    enc = encoder_units(B, R)
    encoder = tuple(DenseLayer(_glorot(rng, enc[k + 1], enc[k]), np.zeros(enc[k + 1])) for k in range(4))
    nl = nonlinear_units(B, R)
    nonlinear = tuple(DenseLayer(_glorot(rng, nl[k + 1], nl[k]), np.zeros(nl[k + 1])) for k in range(3))
    return ModelParams(
        encoder=encoder,
        decoder_linear=BlockDiagWeights(m.copy()),
        decoder_nonlinear=nonlinear,
        activation=activation or Activation(),
    )
