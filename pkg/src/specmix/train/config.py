from __future__ import annotations

from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field

from ..numerics import DEFAULT_LRELU_SLOPE, Activation

PresetName = Literal["synthetic", "laboratory", "airborne"]

# Overrides on top of the defaults, one per experiment family.
PRESETS: Dict[str, Dict[str, Any]] = {
    "synthetic": {},
    "laboratory": {"batch_size": 100, "epochs": 50, "lambda": 1e-4, "gamma": 1e-6},
    "airborne": {"batch_size": 512, "epochs": 50, "lambda": 1e-3, "gamma": 1e-8},
}


class TrainConfig(BaseModel):
    """
    Training hyperparameters. The JSON form is flat and uses the key `lambda`
    for the weight-decay strength.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    lr: float = Field(default=1e-4, ge=0)
    batch_size: int = Field(default=1024, ge=1)
    epochs: int = Field(default=30, ge=1)
    lam: float = Field(default=1e-3, ge=0, alias="lambda")
    gamma: float = Field(default=1e-3, ge=0)
    seed: int = 0
    activation: Literal["lrelu", "relu", "sigmoid"] = "lrelu"
    lrelu_slope: float = Field(default=DEFAULT_LRELU_SLOPE, gt=0, lt=1)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)

    @classmethod
    def preset(cls, name: str, **overrides: Any) -> "TrainConfig":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
        if "lam" in overrides:
            overrides["lambda"] = overrides.pop("lam")
        return cls.model_validate({**PRESETS[name], **overrides})

    def make_activation(self) -> Activation:
        return Activation(name=self.activation, slope=self.lrelu_slope)

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)
