# os lets us read environment variables and build paths
import os
# standard library logger, configured once for the CLI
import logging
from pathlib import Path
from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator

from tools.errors import ConfigError

"""
Settings
--------
All knobs live in the environment (or a local .env file) so nothing has to be
hard-coded in the tools. Only the CLI calls setup_logging(); library modules
just ask for a logger.

Example .env:
    GRAPHLARC_LOG_DIR=logs
    GRAPHLARC_LOG_LEVEL=INFO
    GRAPHLARC_WORKERS=4
"""

# --- Setup: environment ---
load_dotenv()

# Repository root: relative paths in settings resolve against it
REPO_ROOT = Path(__file__).resolve().parent.parent

ENV_PREFIX = "GRAPHLARC_"


class Settings(BaseModel):
    log_dir: Path = Path("logs")
    log_level: str = "WARNING"
    systems_dir: Path = Path("data/systems")
    golden_path: Path = Path("data/golden_examples.json")
    workers: int = 1
    max_controls: int = 0  # 0 means "n + 2" in randcheck

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        # getLevelName maps known names to their int level, anything else to a string
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @field_validator("workers")
    @classmethod
    def _positive_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be >= 1")
        return value

    @field_validator("max_controls")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("max_controls must be >= 0")
        return value

    def resolve(self, path: Path) -> Path:
        """Anchor a relative setting path at the repository root."""
        return path if path.is_absolute() else REPO_ROOT / path


def load_settings() -> Settings:
    """
    Build Settings from GRAPHLARC_* environment variables.
    Unset variables keep their defaults; bad values raise ConfigError.
    """
    raw = {}
    for name in Settings.model_fields:
        value = os.getenv(ENV_PREFIX + name.upper())
        if value is not None and value.strip():
            raw[name] = value.strip()
    try:
        return Settings(**raw)
    except ValidationError as e:
        raise ConfigError(f"invalid {ENV_PREFIX}* setting: {e}") from e


def setup_logging(settings: Settings) -> Path:
    """Send log records to <log_dir>/graphlarc.log. Returns the log file path."""
    log_dir = settings.resolve(settings.log_dir)
    # Checks if log directory exists, creates one if not
    os.makedirs(log_dir, exist_ok=True)
    log_path = log_dir / "graphlarc.log"
    logging.basicConfig(
        filename=log_path,
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return log_path
