# grover_pmp/dynamics.py
#
# Grover two-level dynamics:
#   - problem/driving Hamiltonians for a given overlap x = <s|w>
#   - exact propagation under a constant Hamiltonian (Pauli closed form)
#   - piecewise-constant evolution with sampling
#
# Units: hbar = 1, time dimensionless. The global phase (e0 term) is kept
# here; only the Bloch layer strips it.

from __future__ import annotations

import cmath
import math
from typing import Sequence, Union

import numpy as np

from .errors import DomainError
from .models import (
    GroverHamiltonians,
    PauliHamiltonian,
    Protocol,
    QubitState,
    Trajectory,
)

# Below this |n| the traceless part is treated as zero: sin(w dt)/w -> dt
OMEGA_EPS = 1e-14


def require_overlap(x: float) -> float:
    if not (0.0 < x < 1.0) or math.isnan(x):
        raise DomainError(f"Overlap x must lie in (0, 1), got {x}")
    return float(x)


def require_control(u: float) -> float:
    if not abs(u) <= 1.0:
        raise DomainError(f"Control value must satisfy |u| <= 1, got {u}")
    return float(u)


def overlap_from_qubits(n: int) -> float:
    """x = 2^(-n/2) for an n-qubit search space."""
    if n < 1:
        raise DomainError(f"Qubit count must be >= 1, got {n}")
    return 2.0 ** (-n / 2.0)


# ------------- Hamiltonians -------------

def grover_hamiltonians(x: float) -> GroverHamiltonians:
    """
    H0 and Hd from their closed forms; Hw = H0 + Hd, Hs = H0 - Hd.

      H0 = e/2 + (x/2) [sqrt(1-x^2) sigma_x + x sigma_z]
      Hd = -(x/2) sqrt(1-x^2) sigma_x + (1-x^2)/2 sigma_z

    Building Hw/Hs from H0 +/- Hd keeps control_hamiltonian(x, +/-1)
    bit-identical to Hw/Hs.
    """
    x = require_overlap(x)
    s = x * math.sqrt(1.0 - x * x)

    h0 = PauliHamiltonian(0.5, 0.5 * s, 0.0, 0.5 * x * x)
    hd = PauliHamiltonian(0.0, -0.5 * s, 0.0, 0.5 * (1.0 - x * x))
    return GroverHamiltonians(hw=h0 + hd, hs=h0 - hd, h0=h0, hd=hd)


def control_hamiltonian(x: float, u: float) -> PauliHamiltonian:
    """H(u) = H0 + u*Hd."""
    u = require_control(u)
    h = grover_hamiltonians(x)
    return h.h0 + h.hd.scaled(u)


def initial_state(x: float) -> QubitState:
    """|s> = [x, sqrt(1-x^2)]^T."""
    x = require_overlap(x)
    return QubitState(complex(x, 0.0), complex(math.sqrt(1.0 - x * x), 0.0))


def target_state() -> QubitState:
    return QubitState(1.0 + 0.0j, 0.0j)


def hamiltonian_matrix(h: PauliHamiltonian) -> np.ndarray:
    return h.matrix()


# ------------- propagation -------------

def _unitary_entries(h: PauliHamiltonian, dt: float):
    """
    e^{-iH dt} = e^{-i e0 dt} [cos(w dt) I - i sin(w dt) (n.sigma)/w],
    returned as its four entries (u00, u01, u10, u11).
    """
    w = h.omega
    c = math.cos(w * dt)
    sinc = dt if w < OMEGA_EPS else math.sin(w * dt) / w
    phase = cmath.exp(-1j * h.e0 * dt)

    u00 = phase * complex(c, -sinc * h.nz)
    u11 = phase * complex(c, sinc * h.nz)
    # -i sinc (nx -/+ i ny)
    u01 = phase * complex(-sinc * h.ny, -sinc * h.nx)
    u10 = phase * complex(sinc * h.ny, -sinc * h.nx)
    return u00, u01, u10, u11


def propagate_const(state: QubitState, h: PauliHamiltonian, dt: float) -> QubitState:
    """Exact e^{-iH dt}|state> for constant H and dt >= 0."""
    if dt < 0.0:
        raise DomainError(f"Propagation step must be >= 0, got {dt}")
    if dt == 0.0:
        return state

    u00, u01, u10, u11 = _unitary_entries(h, dt)
    return QubitState(
        u00 * state.c0 + u01 * state.c1,
        u10 * state.c0 + u11 * state.c1,
    )


def unitary(h: PauliHamiltonian, dt: float) -> np.ndarray:
    u00, u01, u10, u11 = _unitary_entries(h, dt)
    return np.array([[u00, u01], [u10, u11]], dtype=np.complex128)


def segment_unitaries(
    x: float,
    u_values: Sequence[float],
    dt: Union[float, Sequence[float]],
) -> np.ndarray:
    """
    Closed-form propagators for a run of constant-u cells.

    dt is either one duration shared by every cell or one per cell.
    Returns an array of shape (cells, 2, 2); entry k is e^{-i H(u_k) dt_k}.
    """
    h = grover_hamiltonians(x)
    u = np.asarray(u_values, dtype=float)
    if u.size and np.max(np.abs(u)) > 1.0:
        raise DomainError(f"Control grid has |u| > 1 (max {np.max(np.abs(u))})")
    dt = np.broadcast_to(np.asarray(dt, dtype=float), u.shape)
    if dt.size and np.min(dt) <= 0.0:
        raise DomainError(f"Cell durations must be > 0, got min {np.min(dt)}")

    e0 = h.h0.e0 + u * h.hd.e0
    n = h.h0.vector[None, :] + u[:, None] * h.hd.vector[None, :]
    w = np.linalg.norm(n, axis=1)
    c = np.cos(w * dt)
    safe_w = np.where(w < OMEGA_EPS, 1.0, w)
    sinc = np.where(w < OMEGA_EPS, dt, np.sin(w * dt) / safe_w)
    phase = np.exp(-1j * e0 * dt)

    nx, ny, nz = n[:, 0], n[:, 1], n[:, 2]
    out = np.empty((u.size, 2, 2), dtype=np.complex128)
    out[:, 0, 0] = phase * (c - 1j * sinc * nz)
    out[:, 1, 1] = phase * (c + 1j * sinc * nz)
    out[:, 0, 1] = phase * (-1j * sinc * (nx - 1j * ny))
    out[:, 1, 0] = phase * (-1j * sinc * (nx + 1j * ny))
    return out


def evolve(
    state: QubitState,
    protocol: Protocol,
    x: float,
    samples_per_segment: int = 1,
) -> Trajectory:
    """
    Propagate segment by segment under H0 + u*Hd and sample each segment at
    samples_per_segment evenly spaced points (segment end included).

    Every sample is taken from the segment's start state, so the segment
    endpoints are independent of the sampling density.
    """
    if samples_per_segment < 1:
        raise DomainError(f"samples_per_segment must be >= 1, got {samples_per_segment}")

    times = [0.0]
    states = [state]
    t0 = 0.0
    current = state

    for seg in protocol.segments:
        h = control_hamiltonian(x, seg.u)
        for k in range(1, samples_per_segment + 1):
            if k == samples_per_segment:
                dt = seg.duration
            else:
                dt = seg.duration * k / samples_per_segment
            times.append(t0 + dt)
            states.append(propagate_const(current, h, dt))
        current = states[-1]
        t0 += seg.duration

    return Trajectory(times=times, states=states)


def final_state(state: QubitState, protocol: Protocol, x: float) -> QubitState:
    """Endpoint of evolve() without the sampling."""
    current = state
    for seg in protocol.segments:
        current = propagate_const(current, control_hamiltonian(x, seg.u), seg.duration)
    return current


def fidelity(state: QubitState) -> float:
    """|c0|^2, the population of the target state."""
    return abs(state.c0) ** 2
