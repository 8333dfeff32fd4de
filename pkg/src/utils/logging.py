from __future__ import annotations

import logging
import sys

from src.utils.env import getenv_str


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s - %(message)s"


def configure_logging() -> None:
    """
    Route all records to stderr; stdout is reserved for CSV / JSON emission.

    LOG_LEVEL picks the level (default INFO); an unknown name falls back to INFO.
    Reconfigures on every call so repeated in-process `main()` runs log to the
    current stderr.
    """
    name = (getenv_str("LOG_LEVEL") or "INFO").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format=LOG_FORMAT, force=True)
