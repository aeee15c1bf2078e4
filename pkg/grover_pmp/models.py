# grover_pmp/models.py

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError


# ------------- quantum state / Hamiltonian -------------

@dataclass(frozen=True)
class QubitState:
    """
    Two complex amplitudes [c0, c1]^T.

    c0 is the amplitude on the target |w>, c1 the amplitude on the
    orthogonal complement |w_bar>. The same type carries the costate |Pi>,
    which is not normalized.
    """
    c0: complex
    c1: complex

    @classmethod
    def from_array(cls, arr: Sequence[complex]) -> "QubitState":
        return cls(complex(arr[0]), complex(arr[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=np.complex128)

    def norm_sq(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    def scaled(self, k: complex) -> "QubitState":
        return QubitState(k * self.c0, k * self.c1)

    def to_row(self) -> dict:
        return {
            "re0": self.c0.real,
            "im0": self.c0.imag,
            "re1": self.c1.real,
            "im1": self.c1.imag,
        }


@dataclass(frozen=True)
class PauliHamiltonian:
    """H = e0*I + nx*sigma_x + ny*sigma_y + nz*sigma_z."""
    e0: float
    nx: float
    ny: float
    nz: float

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        return PauliHamiltonian(
            self.e0 + other.e0,
            self.nx + other.nx,
            self.ny + other.ny,
            self.nz + other.nz,
        )

    def __sub__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        return PauliHamiltonian(
            self.e0 - other.e0,
            self.nx - other.nx,
            self.ny - other.ny,
            self.nz - other.nz,
        )

    def __neg__(self) -> "PauliHamiltonian":
        return PauliHamiltonian(-self.e0, -self.nx, -self.ny, -self.nz)

    def scaled(self, k: float) -> "PauliHamiltonian":
        return PauliHamiltonian(k * self.e0, k * self.nx, k * self.ny, k * self.nz)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz], dtype=float)

    @property
    def omega(self) -> float:
        return math.sqrt(self.nx * self.nx + self.ny * self.ny + self.nz * self.nz)

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.e0 + self.nz, self.nx - 1j * self.ny],
                [self.nx + 1j * self.ny, self.e0 - self.nz],
            ],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class GroverHamiltonians:
    hw: PauliHamiltonian
    hs: PauliHamiltonian
    h0: PauliHamiltonian
    hd: PauliHamiltonian


@dataclass
class Trajectory:
    times: List[float]
    states: List[QubitState]

    @property
    def final(self) -> QubitState:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.times)


# ------------- protocols -------------

@dataclass(frozen=True)
class Segment:
    duration: float
    u: float

    def __post_init__(self) -> None:
        if not (0.0 < self.duration < math.inf):
            raise DomainError(f"Segment duration must be finite and > 0, got {self.duration}")
        # NaN fails both comparisons
        if not abs(self.u) <= 1.0:
            raise DomainError(f"Control value must satisfy |u| <= 1, got {self.u}")

    def to_dict(self) -> dict:
        return {"duration": self.duration, "u": self.u}


@dataclass(frozen=True)
class Protocol:
    """Piecewise-constant control u(t): ordered (duration, u) segments."""
    segments: Tuple[Segment, ...]
    label: str = "custom"

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, float]], label: str = "custom") -> "Protocol":
        return cls(tuple(Segment(float(d), float(u)) for d, u in pairs), label)

    @property
    def total_time(self) -> float:
        return math.fsum(s.duration for s in self.segments)

    def boundaries(self) -> List[float]:
        """Segment edge times, starting at 0 and ending at total_time."""
        edges = [0.0]
        acc = 0.0
        for s in self.segments:
            acc += s.duration
            edges.append(acc)
        return edges

    def switching_times(self) -> List[float]:
        """Interior edges where u actually changes value."""
        out = []
        edges = self.boundaries()
        for i in range(1, len(self.segments)):
            if self.segments[i].u != self.segments[i - 1].u:
                out.append(edges[i])
        return out

    def to_dict(self) -> dict:
        return {"label": self.label, "segments": [s.to_dict() for s in self.segments]}


@dataclass(frozen=True)
class OptimalTimes:
    t1: float
    t2: float
    tf: float

    def to_dict(self) -> dict:
        return {"t1": self.t1, "t2": self.t2, "tf": self.tf}


# ------------- PMP verification -------------

@dataclass
class CostateTrajectory:
    times: List[float]
    costates: List[QubitState]


@dataclass(frozen=True)
class SwitchingRecord:
    t: float
    u: float
    phi: float
    hc: float

    def to_row(self) -> dict:
        return {"t": self.t, "u": self.u, "phi": self.phi, "hc": self.hc}


@dataclass(frozen=True)
class Violation:
    t: float
    reason: str

    def to_dict(self) -> dict:
        return {"t": self.t, "reason": self.reason}


@dataclass(frozen=True)
class PmpConfig:
    lambda0: float = 1.0
    tol_phi: float = 1e-6
    tol_hc: float = 1e-6
    samples: int = 2000

    def __post_init__(self) -> None:
        if not self.lambda0 > 0.0:
            raise DomainError(f"lambda0 must be > 0, got {self.lambda0}")
        if not (self.tol_phi > 0.0 and self.tol_hc > 0.0):
            raise DomainError(
                f"Tolerances must be > 0, got tol_phi={self.tol_phi}, tol_hc={self.tol_hc}"
            )
        if self.samples < 2:
            raise DomainError(f"samples must be >= 2, got {self.samples}")


@dataclass
class VerificationReport:
    records: List[SwitchingRecord]
    sign_condition_ok: bool
    hc_constant_ok: bool
    hc_nonpositive_ok: bool
    hc_mean: float
    hc_max_dev: float
    violations: List[Violation] = field(default_factory=list)
    # Psi_0(tf) = 0 makes the terminal costate vanish; the checks are then vacuous
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return (
            not self.degenerate
            and self.sign_condition_ok
            and self.hc_constant_ok
            and self.hc_nonpositive_ok
        )

    @property
    def status(self) -> str:
        if self.degenerate:
            return "degenerate terminal costate"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "sign_condition_ok": self.sign_condition_ok,
            "hc_constant_ok": self.hc_constant_ok,
            "hc_nonpositive_ok": self.hc_nonpositive_ok,
            "hc_mean": self.hc_mean,
            "hc_max_dev": self.hc_max_dev,
            "violations": [v.to_dict() for v in self.violations],
            "record_count": len(self.records),
        }


# ------------- Bloch sphere -------------

@dataclass(frozen=True)
class BlochPoint:
    theta: float
    phi: float


@dataclass(frozen=True)
class TangentVector:
    d_theta: float
    d_phi: float

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.d_theta + other.d_theta, self.d_phi + other.d_phi)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.d_theta - other.d_theta, self.d_phi - other.d_phi)

    def scaled(self, k: float) -> "TangentVector":
        return TangentVector(k * self.d_theta, k * self.d_phi)

    def as_array(self) -> np.ndarray:
        return np.array([self.d_theta, self.d_phi], dtype=float)


@dataclass(frozen=True)
class ProblemFields:
    X: TangentVector
    Y: TangentVector
    f: TangentVector
    g: TangentVector


class ArcKind(str, Enum):
    FAST = "fast"
    SLOW = "slow"
    NOT_SINGULAR = "not_singular"


@dataclass(frozen=True)
class ArcClassification:
    l_x_alpha: float
    l_y_alpha: float
    kind: ArcKind
    singular_u: Optional[float] = None


@dataclass(frozen=True)
class GroverThetaAnalysis:
    delta_theta_max: float
    n_estimate: float


# ------------- optimizer results -------------

@dataclass(frozen=True)
class ScalarOptResult:
    best_param: float
    best_fidelity: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "best_param": self.best_param,
            "best_fidelity": self.best_fidelity,
            "evaluations": self.evaluations,
        }


@dataclass
class GradOptResult:
    u_grid: List[float]
    fidelity_history: List[float]
    iterations: int
    dt: float = 0.0

    @property
    def final_fidelity(self) -> float:
        return self.fidelity_history[-1]

    def to_dict(self) -> dict:
        return {
            "dt": self.dt,
            "iterations": self.iterations,
            "final_fidelity": self.final_fidelity,
            "u_grid": list(self.u_grid),
            "fidelity_history": list(self.fidelity_history),
        }


@dataclass(frozen=True)
class SweepRow:
    n: int
    x: float
    tf_optimal: float
    tf_singular: float
    tf_grover: float
    diff: float
    # informational only, not part of the CSV schema
    grover_fidelity: float = float("nan")

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "x": self.x,
            "tf_optimal": self.tf_optimal,
            "tf_singular": self.tf_singular,
            "tf_grover": self.tf_grover,
            "diff": self.diff,
        }
