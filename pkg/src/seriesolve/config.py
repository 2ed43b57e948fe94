"""Runtime knobs read from the environment."""

from __future__ import annotations

import os


def max_threads() -> int:
    """``SERIESOLVE_THREADS`` caps internal parallelism (default 1)."""
    raw = os.environ.get("SERIESOLVE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
