from .adam import AdamState, adam_step
from .config import PRESETS, TrainConfig
from .loop import EpochRecord, TrainHistory, train
from .objective import ObjectiveTerms, gradient, objective, value_and_gradient

__all__ = [
    "PRESETS",
    "AdamState",
    "EpochRecord",
    "ObjectiveTerms",
    "TrainConfig",
    "TrainHistory",
    "adam_step",
    "gradient",
    "objective",
    "train",
    "value_and_gradient",
]
