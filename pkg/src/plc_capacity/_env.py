"""Process-wide runtime knobs."""

import os


def thread_cap(default: int = 1) -> int:
    """Worker-thread budget, capped by the PLC_CAPACITY_THREADS variable."""
    raw = os.environ.get("PLC_CAPACITY_THREADS", "").strip()
    if not raw:
        return max(1, default)
    try:
        cap = int(raw)
    except ValueError:
        return max(1, default)
    return max(1, cap)
