"""
Configuration module.
Loads config.yaml and validates it against the settings schema.
"""

import logging
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

from errors import InputError

logger = logging.getLogger(__name__)


class EnumerationSettings(BaseModel):
    """Bounds for exhaustive and truncated searches."""
    truncation_level: int = Field(6, ge=1)
    probe_bound: int = Field(2, ge=0)
    probe_level: int = Field(3, ge=1)
    max_ideal_enumeration: int = Field(8, ge=1)
    max_extensional_members: int = Field(4096, ge=1)
    max_factor_ground: int = Field(4, ge=1)
    icd_max_family: int = Field(3, ge=1)
    icd_function_max_family: int = Field(2, ge=1)


class LawSettings(BaseModel):
    """Scale of the `laws` property suite."""
    concurrency: int = Field(4, ge=1)
    progress: bool = True
    max_ground_size: int = Field(3, ge=0)
    max_basis_size: int = Field(5, ge=1)
    classical_max_ground: int = Field(3, ge=0)


class LoggingSettings(BaseModel):
    level: str = "INFO"


class Settings(BaseModel):
    enumeration: EnumerationSettings = EnumerationSettings()
    laws: LawSettings = LawSettings()
    logging: LoggingSettings = LoggingSettings()


def load_settings(config_path: Optional[str] = "config.yaml") -> Settings:
    """
    Load settings from a YAML file.

    Args:
        config_path: Path to the YAML file; a missing file yields the defaults

    Returns:
        Validated Settings
    """
    if config_path is None or not Path(config_path).exists():
        logger.debug(f"No config file at {config_path}, using defaults")
        return Settings()

    with open(config_path, 'r') as f:
        raw = yaml.safe_load(f) or {}

    try:
        return Settings.model_validate(raw)
    except ValidationError as e:
        raise InputError(f"Invalid configuration in {config_path}: {e}") from e
