# parser.py

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List, Tuple

from grover_pmp.errors import DomainError
from grover_pmp.models import Protocol
from utils import parse_time

# Protocol file layout (same shape export.write_protocol_json produces):
#
#   {
#     "label": "custom",                    optional
#     "segments": [
#       {"duration": 1.2, "u": 1.0},
#       {"duration": 0.7, "u": 0.0},
#       ...
#     ]
#   }
#
# A bare list of segments is accepted too. Durations may be numbers or
# strings with a "pi" suffix.


def _duration(raw: Any, index: int) -> float:
    if isinstance(raw, bool):
        raise DomainError(f"Segment {index}: duration must be a number, got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, str):
        return parse_time(raw)
    raise DomainError(f"Segment {index}: duration must be a number, got {raw!r}")


def parse_protocol(data: Any) -> Protocol:
    """Build a Protocol from decoded JSON."""
    label = "custom"
    if isinstance(data, dict):
        label = str(data.get("label", label))
        segments = data.get("segments")
    else:
        segments = data

    if not isinstance(segments, list):
        raise DomainError(f"Protocol must contain a list of segments, got {type(segments).__name__}")

    pairs: List[Tuple[float, float]] = []
    for i, seg in enumerate(segments):
        if not isinstance(seg, dict) or "duration" not in seg or "u" not in seg:
            raise DomainError(f"Segment {i}: expected an object with 'duration' and 'u', got {seg!r}")
        u = seg["u"]
        if isinstance(u, bool) or not isinstance(u, (int, float)):
            raise DomainError(f"Segment {i}: u must be a number, got {u!r}")
        pairs.append((_duration(seg["duration"], i), float(u)))

    return Protocol.from_pairs(pairs, label=label)


def load_protocol(path: Path) -> Protocol:
    """Read a protocol JSON file. OSError propagates; bad content raises DomainError."""
    with path.open("r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DomainError(f"Protocol file {path} is not valid JSON: {e}") from e
    return parse_protocol(data)
