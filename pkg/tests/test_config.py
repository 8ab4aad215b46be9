import io
import logging
import os
import tempfile
from pathlib import Path

import pytest
import yaml

from src.config.loader import load_config
from src.config.schema import AppConfig, LoggingConfig
from src.util.logging import setup_logging

NO_ENV = Path("/nonexistent/.env")
ENV_VARS = (
    "CANONFORGE_WORKERS",
    "CANONFORGE_SEED",
    "CANONFORGE_TARGET_JOB_MS",
    "CANONFORGE_DEADLINE",
    "CANONFORGE_LOG_LEVEL",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ENV_VARS:
        monkeypatch.delenv(var, raising=False)


def test_load_default_config():
    """Loading with no files produces valid defaults."""
    config = load_config(config_path=Path("/nonexistent/config.yaml"), env_path=NO_ENV)
    assert isinstance(config, AppConfig)
    assert config.parallel.workers == 1
    assert config.parallel.target_job_ms == 500.0
    assert config.parallel.initial_span == 1024
    assert config.sampling.seed is None
    assert config.output.format == "json"


def test_load_yaml_config():
    """YAML values override defaults."""
    data = {
        "parallel": {"workers": 4, "deadline_seconds": 2.5},
        "sampling": {"seed": 7},
    }
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
        yaml.dump(data, f)
        tmp_path = Path(f.name)

    try:
        config = load_config(config_path=tmp_path, env_path=NO_ENV)
        assert config.parallel.workers == 4
        assert config.parallel.deadline_seconds == 2.5
        assert config.sampling.seed == 7
        # Non-overridden values keep defaults
        assert config.parallel.max_span == 1_048_576
        assert config.logging.level == "INFO"
    finally:
        tmp_path.unlink()


def test_repository_config_matches_defaults():
    config = load_config(config_path=Path(__file__).parents[1] / "config.yaml", env_path=NO_ENV)
    assert config.parallel == AppConfig().parallel


def test_env_override(monkeypatch):
    """Environment variables override YAML values."""
    monkeypatch.setenv("CANONFORGE_WORKERS", "8")
    monkeypatch.setenv("CANONFORGE_TARGET_JOB_MS", "125.5")
    monkeypatch.setenv("CANONFORGE_DEADLINE", "30")
    config = load_config(config_path=Path("/nonexistent/config.yaml"), env_path=NO_ENV)
    assert config.parallel.workers == 8
    assert config.parallel.target_job_ms == 125.5
    assert config.parallel.deadline_seconds == 30.0


def test_invalid_env_value(monkeypatch):
    monkeypatch.setenv("CANONFORGE_SEED", "lucky")
    with pytest.raises(ValueError, match="CANONFORGE_SEED"):
        load_config(config_path=Path("/nonexistent/config.yaml"), env_path=NO_ENV)


def test_load_env_file():
    """Values from .env file are loaded."""
    with tempfile.NamedTemporaryFile(mode="w", suffix=".env", delete=False) as f:
        f.write("CANONFORGE_SEED=42\n")
        env_path = Path(f.name)

    try:
        config = load_config(config_path=Path("/nonexistent/config.yaml"), env_path=env_path)
        assert config.sampling.seed == 42
    finally:
        env_path.unlink()
        os.environ.pop("CANONFORGE_SEED", None)


def test_frozen_config():
    """Config dataclasses are immutable."""
    config = load_config(config_path=Path("/nonexistent/config.yaml"), env_path=NO_ENV)
    with pytest.raises(AttributeError):
        config.parallel = None  # type: ignore[misc]


def test_setup_logging_without_file(tmp_path):
    stream = io.StringIO()
    level = setup_logging(LoggingConfig(level="debug", file=""), stream=stream)
    assert level == logging.DEBUG
    logging.getLogger("src.test").debug("planned 3 jobs")
    assert "planned 3 jobs" in stream.getvalue()
    assert logging.getLogger("asyncio").level == logging.WARNING
    assert not list(tmp_path.iterdir())


def test_setup_logging_with_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging(LoggingConfig(level="INFO", file=str(log_file)))
    logging.getLogger("src.test").info("written")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "written" in log_file.read_text()
    logging.getLogger().handlers.clear()
