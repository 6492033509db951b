from __future__ import annotations

from datetime import datetime, timezone


def new_run_id(prefix: str = "exp") -> str:
    """
    Generate a new run id: <prefix>_YYYYMMDD_HHMMSS (UTC), filesystem-safe.
    """
    return f"{prefix}_{datetime.now(timezone.utc).strftime('%Y%m%d_%H%M%S')}"
