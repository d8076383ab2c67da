"""Run configuration assembled from defaults, environment, a TOML file and CLI flags."""

import logging
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .errors import DomainError
from .models import RunConfig


logger = logging.getLogger(__name__)

ENV_CACHE = "RIEMANN_ZEROS_CACHE"
ENV_DIGITS = "RIEMANN_ZEROS_DIGITS"


def _from_environment() -> Dict[str, Any]:
    settings: Dict[str, Any] = {}
    if os.getenv(ENV_CACHE):
        settings["cache_path"] = Path(os.environ[ENV_CACHE]).expanduser()
    if os.getenv(ENV_DIGITS):
        settings["digits"] = os.environ[ENV_DIGITS]
    return settings


def _from_file(path: Path) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    with open(path, "rb") as f:
        try:
            data = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise DomainError(f"{path}: invalid TOML: {exc}")

    unknown = set(data) - set(RunConfig.model_fields)
    if unknown:
        raise DomainError(f"{path}: unknown settings {sorted(unknown)}")
    if "cache_path" in data:
        data["cache_path"] = Path(data["cache_path"]).expanduser()
    logger.debug(f"Read {len(data)} settings from {path}")
    return data


def load_run_config(config_file: Optional[Path] = None,
                    overrides: Optional[Dict[str, Any]] = None,
                    env_file: Optional[Path] = None) -> RunConfig:
    """Build the RunConfig for one invocation.

    Later sources win: defaults, then the environment (a .env file is
    loaded first without overriding variables already set), then the
    TOML file, then explicit overrides from the command line.

    Args:
        config_file: Optional TOML file with RunConfig field names
        overrides: Settings given on the command line; None values are ignored
        env_file: .env file to load (defaults to ./.env when present)

    Returns:
        Validated RunConfig

    Raises:
        DomainError: If a source holds an invalid or unknown setting
        FileNotFoundError: If config_file does not exist
    """
    load_dotenv(dotenv_path=env_file, override=False)

    settings: Dict[str, Any] = {}
    settings.update(_from_environment())
    if config_file is not None:
        settings.update(_from_file(config_file))
    settings.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        config = RunConfig(**settings)
    except ValidationError as exc:
        raise DomainError(f"invalid run configuration: {exc}")
    logger.debug(f"Run configuration: {config.model_dump(mode='json')}")
    return config
