# grover_pmp/export.py
#
# CSV / JSON writers. Floats go out with 17 significant digits so repeated
# runs produce identical bytes.

from __future__ import annotations

import csv
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .bloch import bloch_trajectory
from .dynamics import fidelity
from .models import GradOptResult, Protocol, SweepRow, SwitchingRecord, Trajectory, VerificationReport

CSV_DIGITS = 17

TRAJECTORY_FIELDS = ["t", "re0", "im0", "re1", "im1", "fidelity"]
BLOCH_FIELDS = ["t", "theta", "phi"]
ARC_FIELDS = ["phi", "theta"]
VERIFICATION_FIELDS = ["t", "u", "phi", "hc"]
SWEEP_FIELDS = ["n", "x", "tf_optimal", "tf_singular", "tf_grover", "diff"]


def format_value(v: object) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.{CSV_DIGITS}g}"
    return str(v)


@contextmanager
def _open_out(path: Optional[Path]) -> Iterator[IO[str]]:
    """A file under path (parents created), or stdout when path is None."""
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        yield f


def write_csv(path: Optional[Path], fieldnames: Sequence[str], rows: Iterable[Mapping[str, object]]) -> None:
    with _open_out(path) as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row[k]) for k in fieldnames})


def write_json(path: Optional[Path], payload: object) -> None:
    with _open_out(path) as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


# ------------- row builders -------------

def trajectory_rows(trajectory: Trajectory) -> List[dict]:
    rows = []
    for t, s in zip(trajectory.times, trajectory.states):
        row = {"t": float(t)}
        row.update(s.to_row())
        row["fidelity"] = fidelity(s)
        rows.append(row)
    return rows


def bloch_rows(trajectory: Trajectory) -> List[dict]:
    return [{"t": t, "theta": theta, "phi": phi} for t, theta, phi in bloch_trajectory(trajectory)]


def arc_rows(samples: Sequence[Tuple[float, float]]) -> List[dict]:
    return [{"phi": phi, "theta": theta} for phi, theta in samples]


def verification_rows(records: Sequence[SwitchingRecord]) -> List[dict]:
    return [r.to_row() for r in records]


def sweep_rows(rows: Sequence[SweepRow], in_pi_units: bool = False) -> List[dict]:
    out = []
    for r in rows:
        row = r.to_row()
        if in_pi_units:
            for key in ("tf_optimal", "tf_singular", "tf_grover", "diff"):
                row[key] = row[key] / math.pi
        out.append(row)
    return out


# ------------- whole-file writers -------------

def write_trajectory_csv(path: Optional[Path], trajectory: Trajectory) -> None:
    write_csv(path, TRAJECTORY_FIELDS, trajectory_rows(trajectory))


def write_bloch_csv(path: Optional[Path], trajectory: Trajectory) -> None:
    write_csv(path, BLOCH_FIELDS, bloch_rows(trajectory))


def write_arc_csv(path: Optional[Path], samples: Sequence[Tuple[float, float]]) -> None:
    write_csv(path, ARC_FIELDS, arc_rows(samples))


def write_verification(csv_path: Optional[Path], json_path: Optional[Path], report: VerificationReport) -> None:
    write_csv(csv_path, VERIFICATION_FIELDS, verification_rows(report.records))
    write_json(json_path, report.to_dict())


def write_sweep_csv(path: Optional[Path], rows: Sequence[SweepRow], in_pi_units: bool = False) -> None:
    write_csv(path, SWEEP_FIELDS, sweep_rows(rows, in_pi_units))


def write_protocol_json(path: Optional[Path], protocol: Protocol) -> None:
    write_json(path, protocol.to_dict())


def write_grad_result_json(path: Optional[Path], result: GradOptResult) -> None:
    write_json(path, result.to_dict())
