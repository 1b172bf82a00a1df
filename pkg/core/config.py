"""
Runtime settings and run-configuration loading.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field

from .errors import InputValidationError
from .state import RunConfig

# Load environment variables
load_dotenv()

CONFIG_KEYS = set(RunConfig.model_fields)


class RuntimeSettings(BaseModel):
    """Process-wide knobs read from MEMCHANNEL_* environment variables."""

    log_file: str = Field(default="logs/memchannel.log", description="JSON event log path")
    log_level: str = Field(default="WARNING", description="Console log level")
    max_workers: int = Field(default=4, ge=1, description="Concurrent sweep points")
    fock_cutoff_single: int = Field(default=30, ge=2, description="Fock cutoff per mode for one channel use")
    fock_cutoff_pair: int = Field(default=16, ge=2, description="Fock cutoff per mode for two channel uses")
    tail_tolerance: float = Field(default=1e-6, gt=0.0, description="Accepted Fock truncation deficit")


@lru_cache(maxsize=1)
def get_settings() -> RuntimeSettings:
    """Process-wide runtime settings read from MEMCHANNEL_* variables."""
    values = {
        "log_file": os.getenv("MEMCHANNEL_LOG_FILE"),
        "log_level": os.getenv("MEMCHANNEL_LOG_LEVEL"),
        "max_workers": os.getenv("MEMCHANNEL_MAX_WORKERS"),
        "fock_cutoff_single": os.getenv("MEMCHANNEL_FOCK_CUTOFF_SINGLE"),
        "fock_cutoff_pair": os.getenv("MEMCHANNEL_FOCK_CUTOFF_PAIR"),
        "tail_tolerance": os.getenv("MEMCHANNEL_TAIL_TOLERANCE"),
    }
    return RuntimeSettings(**{key: value for key, value in values.items() if value is not None})


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a flat key=value run configuration."""
    config_path = Path(path)
    if not config_path.exists():
        raise InputValidationError(f"Config file {path} not found")
    values = {}
    for key, value in dotenv_values(config_path).items():
        normalized = key.strip().lower().replace("-", "_")
        if normalized not in CONFIG_KEYS:
            raise InputValidationError(f"Unknown config key {key!r}", f"{path}")
        if value is None or value == "":
            continue
        values[normalized] = value
    return values


def load_run_config(path: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    """Merge config-file values with flags; flags win."""
    merged: Dict[str, Any] = read_config_file(path) if path else {}
    merged.update({key: value for key, value in flags.items() if value is not None})
    return RunConfig(**merged)
