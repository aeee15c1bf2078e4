# utils.py

from __future__ import annotations

import math
import re
from typing import Optional

from grover_pmp.dynamics import overlap_from_qubits, require_overlap
from grover_pmp.errors import DomainError

_TIME_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(pi)?\s*$")


def parse_time(text: str) -> float:
    """
    Parse a time value, optionally in units of pi.

      "1.3pi" -> 1.3*pi, "pi" -> pi, "2.5" -> 2.5
    """
    m = _TIME_RE.match(text.lower())
    if not m or (m.group(1) is None and m.group(2) is None):
        raise DomainError(f"Cannot parse time value {text!r} (expected e.g. 1.3pi or 4.08)")

    value = float(m.group(1)) if m.group(1) is not None else 1.0
    if m.group(2):
        value *= math.pi
    if not math.isfinite(value):
        raise DomainError(f"Time value {text!r} is not finite")
    return value


def resolve_overlap(x: Optional[float], n: Optional[int]) -> float:
    """Overlap from --x or from the qubit count --n (x = 2^(-n/2))."""
    if x is not None and n is not None:
        raise DomainError("Give either --x or --n, not both")
    if x is None and n is None:
        raise DomainError("One of --x or --n is required")
    if n is not None:
        return overlap_from_qubits(n)
    return require_overlap(x)


def in_pi(value: float) -> str:
    """Format a time in units of pi with 6 decimals."""
    return f"{value / math.pi:.6f}pi"
