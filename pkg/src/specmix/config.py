from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import yaml
from pydantic import ValidationError

from .datagen.types import MIXTURE_MODELS
from .errors import SpecmixError
from .train.config import PRESETS, TrainConfig


class ConfigError(SpecmixError):
    """Raised when configuration is missing or invalid."""


def load_config(path: str | Path) -> Dict[str, Any]:
    """
    Load the experiment YAML config and validate its minimal contract.

    Required:
      - io.runs_dir
      - experiment.models (subset of linear, bilinear, ppnm)
    """
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found at: {config_path}")
    try:
        with config_path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in config file: {config_path}") from e

    io_section = data.get("io")
    if not isinstance(io_section, dict):
        raise ConfigError("Missing required section: io")
    runs_dir = io_section.get("runs_dir")
    if not runs_dir or not isinstance(runs_dir, (str, Path)):
        raise ConfigError("Missing required key: io.runs_dir")

    exp = data.get("experiment")
    if not isinstance(exp, dict):
        raise ConfigError("Missing required section: experiment")
    models = exp.get("models")
    if not isinstance(models, list) or not models:
        raise ConfigError("Missing required key: experiment.models")
    unknown = [m for m in models if m not in MIXTURE_MODELS]
    if unknown:
        raise ConfigError(f"Unknown mixture models in experiment.models: {unknown}")
    preset = exp.get("preset", "synthetic")
    if preset not in PRESETS:
        raise ConfigError(f"Unknown preset in experiment.preset: {preset!r}")
    try:
        TrainConfig.preset(preset, **dict(exp.get("train") or {}))
    except (ValidationError, TypeError) as e:
        raise ConfigError(f"Invalid experiment.train overrides: {e}") from e

    return data


def load_train_config(path: str | Path) -> TrainConfig:
    """Flat JSON mirroring TrainConfig; unknown keys are rejected."""
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found at: {config_path}")
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in config file: {config_path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Train config must be a flat JSON object: {config_path}")
    try:
        return TrainConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid train config {config_path}: {e}") from e
