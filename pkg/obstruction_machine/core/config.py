"""
Obstruction Machine Configuration

Defaults live in config.yaml at the repository root. Every section is
validated with pydantic; a missing file falls back to the built-in defaults.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError

from .errors import InvalidInput

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config.yaml"


class EnumerationConfig(BaseModel):
    slabs: int = Field(default=1, ge=1)
    max_box: int = Field(default=64, ge=1)


class IndependenceConfig(BaseModel):
    max_classes: int = Field(default=5, ge=1)
    max_total: int = Field(default=5, ge=1)


class ArrangementConfig(BaseModel):
    ambient_dim: int = Field(default=57, ge=1)
    max_degree: int = Field(default=8, ge=0)


class AcceptanceConfig(BaseModel):
    seed: int = 20240229
    reflection_words: int = Field(default=200, ge=1)
    max_word_length: int = Field(default=6, ge=1)
    monomial_samples: int = Field(default=100, ge=1)
    max_slots: int = Field(default=4, ge=1)
    max_arrangement_size: int = Field(default=6, ge=1)


class MachineConfig(BaseModel):
    """Top-level configuration document."""
    enumeration: EnumerationConfig = Field(default_factory=EnumerationConfig)
    independence: IndependenceConfig = Field(default_factory=IndependenceConfig)
    arrangement: ArrangementConfig = Field(default_factory=ArrangementConfig)
    acceptance: AcceptanceConfig = Field(default_factory=AcceptanceConfig)


def load_config(path: Optional[Union[str, Path]] = None) -> MachineConfig:
    """Load and validate a configuration file."""
    config_path = Path(path) if path else DEFAULT_CONFIG_PATH
    if not config_path.exists():
        if path:
            raise InvalidInput(f"config file not found: {config_path}")
        logger.debug("No config file at %s, using defaults", config_path)
        return MachineConfig()

    try:
        with open(config_path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
    except yaml.YAMLError as e:
        raise InvalidInput(f"malformed config {config_path}: {e}") from e

    try:
        return MachineConfig.model_validate(raw)
    except ValidationError as e:
        raise InvalidInput(f"invalid config {config_path}: {e}") from e


_config: Optional[MachineConfig] = None


def get_config() -> MachineConfig:
    """Process-wide configuration, loaded from config.yaml on first use."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config: Optional[MachineConfig]) -> None:
    """Install a configuration (None restores lazy loading of the default file)."""
    global _config
    _config = config
