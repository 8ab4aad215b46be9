import os
from collections.abc import Callable
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv

from src.config.schema import (
    AppConfig,
    LoggingConfig,
    OutputConfig,
    ParallelConfig,
    SamplingConfig,
)

_SECTION_CLASSES = {
    "parallel": ParallelConfig,
    "sampling": SamplingConfig,
    "output": OutputConfig,
    "logging": LoggingConfig,
}

_ENV_OVERRIDES: dict[str, tuple[str, str, Callable[[str], Any]]] = {
    "CANONFORGE_WORKERS": ("parallel", "workers", int),
    "CANONFORGE_SEED": ("sampling", "seed", int),
    "CANONFORGE_TARGET_JOB_MS": ("parallel", "target_job_ms", float),
    "CANONFORGE_DEADLINE": ("parallel", "deadline_seconds", float),
    "CANONFORGE_LOG_LEVEL": ("logging", "level", str),
}


def _apply_env_overrides(data: dict[str, Any]) -> None:
    """Override YAML values with environment variables where mapped."""
    for env_var, (section, key, convert) in _ENV_OVERRIDES.items():
        value = os.environ.get(env_var)
        if value is not None:
            try:
                data.setdefault(section, {})[key] = convert(value)
            except ValueError as e:
                raise ValueError(f"Invalid value for {env_var}: {value!r}") from e


def load_config(
    config_path: Path = Path("config.yaml"),
    env_path: Path = Path(".env"),
) -> AppConfig:
    """Load YAML config, then apply .env and environment overrides."""
    load_dotenv(env_path)

    data: dict[str, Any] = {}
    if config_path.exists():
        with open(config_path) as f:
            data = yaml.safe_load(f) or {}

    _apply_env_overrides(data)

    sections: dict[str, Any] = {}
    for name, cls in _SECTION_CLASSES.items():
        section_data = data.get(name, {})
        if section_data:
            sections[name] = cls(**section_data)
        else:
            sections[name] = cls()

    return AppConfig(**sections)
