# grover_pmp/utils.py

from __future__ import annotations

import math
import sys
from datetime import datetime

_VERBOSE = False


def set_verbose(enabled: bool) -> None:
    global _VERBOSE
    _VERBOSE = bool(enabled)


def log(msg: str) -> None:
    """
    Timestamped logger used across the project.

    Lines go to stderr so that CSV/JSON written to stdout stays parseable.
    """
    ts = datetime.now().isoformat(timespec="seconds")
    print(f"[{ts}] {msg}", file=sys.stderr)


def debug(msg: str) -> None:
    if _VERBOSE:
        log(f"[DEBUG] {msg}")


def warn(msg: str) -> None:
    log(f"[WARN] {msg}")


def wrap_2pi(angle: float) -> float:
    """Map an angle into [0, 2*pi)."""
    a = math.fmod(angle, 2.0 * math.pi)
    if a < 0.0:
        a += 2.0 * math.pi
    # fmod can hand back exactly 2*pi after the correction above
    if a >= 2.0 * math.pi:
        a = 0.0
    return a


def angle_diff(a: float, b: float) -> float:
    """Signed difference a - b folded into [-pi, pi)."""
    return (a - b + math.pi) % (2.0 * math.pi) - math.pi
