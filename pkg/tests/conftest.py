from __future__ import annotations

import os
import sys
from pathlib import Path

from hypothesis import settings


settings.register_profile("ci", max_examples=50, deadline=None, derandomize=True)
settings.register_profile("full", deadline=None)


def pytest_configure() -> None:
    """
    Make `import src.*` and `import main` work without PYTHONPATH, and pick the
    hypothesis profile from HYPOTHESIS_PROFILE (unset: hypothesis defaults plus
    the per-test settings).
    """
    root = Path(__file__).resolve().parents[1]
    root_str = str(root)
    if root_str not in sys.path:
        sys.path.insert(0, root_str)

    profile = os.getenv("HYPOTHESIS_PROFILE")
    if profile:
        settings.load_profile(profile)
