from __future__ import annotations

import os
from typing import Optional


CONSTANTS_ENV_VAR = "GRAVDEPHASE_CONSTANTS"
GRID_COUNT_ENV_VAR = "GRAVDEPHASE_GRID_COUNT"


def load_env() -> None:
    """
    Load env vars from dotenv file if present.

    - If ENV_FILE is set, we load that path explicitly.
    - Otherwise we call load_dotenv() which searches for a .env file.
    """
    try:
        from dotenv import load_dotenv  # type: ignore
    except Exception:
        return

    env_file = os.getenv("ENV_FILE")
    if env_file:
        load_dotenv(dotenv_path=env_file, override=False)
        return

    load_dotenv(override=False)


def getenv_str(name: str, default: Optional[str] = None) -> Optional[str]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return raw.strip()


def getenv_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def constants_mode_override() -> Optional[str]:
    """Constants mode forced through the environment (`codata` | `paper`), if any."""
    raw = getenv_str(CONSTANTS_ENV_VAR)
    return raw.lower() if raw else None


def default_grid_count() -> int:
    count = getenv_int(GRID_COUNT_ENV_VAR, default=200)
    return count if count >= 1 else 200
