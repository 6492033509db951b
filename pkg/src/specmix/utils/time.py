from __future__ import annotations

import time as _time
from datetime import datetime, timezone


def utc_now_iso() -> str:
    """
    Return current UTC time in ISO 8601 format with seconds precision.
    Example: 2024-01-01T00:00:00+00:00
    """
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


class Stopwatch:
    """Wall-clock seconds since construction or the last `lap()`."""

    def __init__(self) -> None:
        self._t0 = _time.perf_counter()

    def lap(self) -> float:
        now = _time.perf_counter()
        elapsed = now - self._t0
        self._t0 = now
        return elapsed
