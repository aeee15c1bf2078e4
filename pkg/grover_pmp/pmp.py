# grover_pmp/pmp.py
#
# Pontryagin necessary conditions for the Grover control problem.
#
# The costate |Pi> obeys the same Schrodinger equation as |Psi>, with the
# boundary condition |Pi(tf)> = -[Psi_0(tf), 0]^T. From the pair we get
#
#   switching function  Phi(t) = Im <Pi| Hd |Psi>
#   c-Hamiltonian       Hc(t)  = Im <Pi| H0 + u Hd |Psi>
#
# and the conditions checked by verify():
#   (i)   u = -sign(Phi) wherever |Phi| > tol_phi
#   (ii)  Hc constant over [0, tf]
#   (iii) Hc <= 0
#
# The same pair gives the exact gradient of J = -|Psi_0(tf)|^2 / 2 with
# respect to a piecewise-constant control: dJ/du_k = integral of Phi over
# cell k.

from __future__ import annotations

import bisect
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dynamics import (
    OMEGA_EPS,
    control_hamiltonian,
    final_state,
    grover_hamiltonians,
    initial_state,
    propagate_const,
    require_control,
    segment_unitaries,
)
from .errors import DomainError
from .models import (
    CostateTrajectory,
    PauliHamiltonian,
    PmpConfig,
    Protocol,
    QubitState,
    SwitchingRecord,
    VerificationReport,
    Violation,
)
from .utils import debug

# |Psi_0(tf)| below this leaves a zero terminal costate
DEGENERATE_EPS = 1e-12


# ------------- pairings -------------

def _apply(h: PauliHamiltonian, psi: QubitState) -> Tuple[complex, complex]:
    a = (h.e0 + h.nz) * psi.c0 + complex(h.nx, -h.ny) * psi.c1
    b = complex(h.nx, h.ny) * psi.c0 + (h.e0 - h.nz) * psi.c1
    return a, b


def _pairing(costate: QubitState, h: PauliHamiltonian, state: QubitState) -> complex:
    """<Pi| H |Psi>."""
    a, b = _apply(h, state)
    return costate.c0.conjugate() * a + costate.c1.conjugate() * b


def terminal_cost(state: QubitState) -> float:
    return -0.5 * abs(state.c0) ** 2


def terminal_costate(final_state: QubitState) -> QubitState:
    """Gradient of the terminal cost: |Pi(tf)> = -[Psi_0(tf), 0]^T."""
    return QubitState(-final_state.c0, 0j)


def switching_function(costate: QubitState, state: QubitState, x: float) -> float:
    hd = grover_hamiltonians(x).hd
    return _pairing(costate, hd, state).imag


def c_hamiltonian(costate: QubitState, state: QubitState, u: float, x: float) -> float:
    u = require_control(u)
    h = grover_hamiltonians(x)
    return _pairing(costate, h.h0, state).imag + u * _pairing(costate, h.hd, state).imag


# ------------- forward / backward passes -------------

def _segment_edges(
    protocol: Protocol,
    x: float,
    start: QubitState,
) -> Tuple[List[float], List[PauliHamiltonian], List[QubitState], List[QubitState]]:
    """
    Edge times, per-segment Hamiltonians, state at each segment start and
    costate at each segment end.
    """
    edges = protocol.boundaries()
    hams = [control_hamiltonian(x, s.u) for s in protocol.segments]

    psi_start: List[QubitState] = []
    psi = start
    for seg, h in zip(protocol.segments, hams):
        psi_start.append(psi)
        psi = propagate_const(psi, h, seg.duration)

    return edges, hams, psi_start, _costate_ends(protocol, hams, psi)


def _costate_ends(
    protocol: Protocol,
    hams: Sequence[PauliHamiltonian],
    final_state: QubitState,
) -> List[QubitState]:
    """Costate at the end of every segment, swept backward from tf under -H."""
    pi_end: List[QubitState] = [QubitState(0j, 0j)] * len(hams)
    pi = terminal_costate(final_state)
    for k in range(len(hams) - 1, -1, -1):
        pi_end[k] = pi
        pi = propagate_const(pi, -hams[k], protocol.segments[k].duration)
    return pi_end


def _segment_index(edges: Sequence[float], t: float) -> int:
    k = bisect.bisect_right(edges, t) - 1
    return min(max(k, 0), len(edges) - 2)


def backward_costate(
    protocol: Protocol,
    final_state: QubitState,
    x: float,
    samples: int = 2000,
) -> CostateTrajectory:
    """
    Integrate the costate from tf down to 0 with the exact segment
    propagator run under -H, sampled on a uniform grid over [0, tf].

    final_state must be the forward endpoint of the same protocol.
    """
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples}")

    edges = protocol.boundaries()
    tf = edges[-1]
    if not protocol.segments:
        return CostateTrajectory(times=[0.0], costates=[terminal_costate(final_state)])

    hams = [control_hamiltonian(x, s.u) for s in protocol.segments]
    pi_end = _costate_ends(protocol, hams, final_state)

    times = [float(t) for t in np.linspace(0.0, tf, samples)]
    costates = []
    for t in times:
        k = _segment_index(edges, t)
        costates.append(propagate_const(pi_end[k], -hams[k], max(edges[k + 1] - t, 0.0)))
    return CostateTrajectory(times=times, costates=costates)


# ------------- verification -------------

def sample_records(
    protocol: Protocol,
    x: float,
    samples: int,
    start: Optional[QubitState] = None,
) -> List[SwitchingRecord]:
    """(t, u, Phi, Hc) on a uniform grid of `samples` points over [0, tf]."""
    start = initial_state(x) if start is None else start
    if not protocol.segments:
        pi = terminal_costate(start)
        return [SwitchingRecord(0.0, 0.0, switching_function(pi, start, x), c_hamiltonian(pi, start, 0.0, x))]

    h = grover_hamiltonians(x)
    edges, hams, psi_start, pi_end = _segment_edges(protocol, x, start)
    tf = edges[-1]

    records: List[SwitchingRecord] = []
    for t in np.linspace(0.0, tf, samples):
        t = float(t)
        k = _segment_index(edges, t)
        psi = propagate_const(psi_start[k], hams[k], max(t - edges[k], 0.0))
        pi = propagate_const(pi_end[k], -hams[k], max(edges[k + 1] - t, 0.0))
        u = protocol.segments[k].u
        phi = _pairing(pi, h.hd, psi).imag
        hc = _pairing(pi, h.h0, psi).imag + u * phi
        records.append(SwitchingRecord(t=t, u=u, phi=phi, hc=hc))
    return records


def verify(protocol: Protocol, x: float, config: Optional[PmpConfig] = None) -> VerificationReport:
    """
    Check the PMP necessary conditions along a protocol started from |s>.

    Samples within half a grid spacing of a switching instant are left out
    of the sign check: Phi crosses zero there.
    """
    config = config or PmpConfig()
    start = initial_state(x)
    records = sample_records(protocol, x, config.samples, start=start)
    degenerate = abs(final_state(start, protocol, x).c0) < DEGENERATE_EPS

    tf = protocol.total_time
    half_gap = 0.5 * tf / (config.samples - 1) if tf > 0.0 else 0.0
    switches = protocol.switching_times()

    violations: List[Violation] = []
    for r in records:
        if abs(r.phi) <= config.tol_phi:
            continue
        if any(abs(r.t - ts) <= half_gap for ts in switches):
            continue
        expected = -math.copysign(1.0, r.phi)
        if r.u != expected:
            violations.append(
                Violation(
                    t=r.t,
                    reason=f"sign: u={r.u:+g} with phi={r.phi:+.3e} (expected u={expected:+g})",
                )
            )
    sign_ok = not violations

    hc_values = np.array([r.hc for r in records], dtype=float)
    hc_mean = float(np.mean(hc_values))
    hc_dev = np.abs(hc_values - hc_mean)
    hc_max_dev = float(np.max(hc_dev))
    hc_constant_ok = hc_max_dev < config.tol_hc
    hc_nonpositive_ok = hc_mean <= config.tol_hc

    if not hc_constant_ok:
        for r, dev in zip(records, hc_dev):
            if dev >= config.tol_hc:
                violations.append(Violation(t=r.t, reason=f"hc: deviates from mean by {dev:.3e}"))
    if not hc_nonpositive_ok:
        violations.append(Violation(t=0.0, reason=f"hc: mean {hc_mean:+.3e} is positive"))

    debug(
        f"verify {protocol.label}: sign_ok={sign_ok} hc_mean={hc_mean:+.6e} "
        f"hc_max_dev={hc_max_dev:.3e} violations={len(violations)} degenerate={degenerate}"
    )

    return VerificationReport(
        records=records,
        sign_condition_ok=sign_ok,
        hc_constant_ok=hc_constant_ok,
        hc_nonpositive_ok=hc_nonpositive_ok,
        hc_mean=hc_mean,
        hc_max_dev=hc_max_dev,
        violations=violations,
        degenerate=degenerate,
    )


# ------------- adjoint gradients -------------

def _integrated_hd(x: float, u: np.ndarray, dt: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Integral over one cell of the Heisenberg-picture Hd:

      int_0^dt e^{iHs} Hd e^{-iHs} ds = D0 I + D . sigma

    With H = e0 + n.sigma the vector part rotates as d' = -2 n x d, so
      D = d_par dt + d_perp sin(2w dt)/(2w) - (n_hat x d)(1 - cos(2w dt))/(2w)
    """
    h = grover_hamiltonians(x)
    d = h.hd.vector
    n = h.h0.vector[None, :] + u[:, None] * d[None, :]
    w = np.linalg.norm(n, axis=1)
    small = w < OMEGA_EPS
    safe_w = np.where(small, 1.0, w)
    n_hat = n / safe_w[:, None]

    d_par = np.sum(n_hat * d[None, :], axis=1)[:, None] * n_hat
    d_perp = d[None, :] - d_par
    cross = np.cross(n_hat, d[None, :])
    two_w = 2.0 * safe_w
    s_term = np.sin(two_w * dt) / two_w
    c_term = (1.0 - np.cos(two_w * dt)) / two_w

    vec = d_par * dt[:, None] + d_perp * s_term[:, None] - cross * c_term[:, None]
    vec = np.where(small[:, None], d[None, :] * dt[:, None], vec)
    return h.hd.e0 * dt, vec


def _cell_pass(x: float, u: np.ndarray, dt: np.ndarray) -> Tuple[float, np.ndarray]:
    """One forward and one backward pass: (fidelity, dJ/du per cell)."""
    mats = segment_unitaries(x, u, dt)
    cells = u.size

    psi = initial_state(x).as_array()
    psi_start = np.empty((cells, 2), dtype=np.complex128)
    for k in range(cells):
        psi_start[k] = psi
        psi = mats[k] @ psi

    pi = np.array([-psi[0], 0.0], dtype=np.complex128)
    pi_start = np.empty((cells, 2), dtype=np.complex128)
    for k in range(cells - 1, -1, -1):
        pi = mats[k].conj().T @ pi
        pi_start[k] = pi

    d0, vec = _integrated_hd(x, u, dt)
    dx, dy, dz = vec[:, 0], vec[:, 1], vec[:, 2]
    a = (d0 + dz) * psi_start[:, 0] + (dx - 1j * dy) * psi_start[:, 1]
    b = (dx + 1j * dy) * psi_start[:, 0] + (d0 - dz) * psi_start[:, 1]
    grad = np.imag(np.conj(pi_start[:, 0]) * a + np.conj(pi_start[:, 1]) * b)
    return float(abs(psi[0]) ** 2), grad


def grid_fidelity_and_gradient(u_grid: Sequence[float], dt: float, x: float) -> Tuple[float, np.ndarray]:
    u = np.asarray(u_grid, dtype=float)
    if u.size == 0:
        raise DomainError("Control grid is empty")
    if np.max(np.abs(u)) > 1.0:
        raise DomainError(f"Control grid has |u| > 1 (max {np.max(np.abs(u))})")
    if dt <= 0.0:
        raise DomainError(f"Cell duration must be > 0, got {dt}")
    return _cell_pass(x, u, np.full(u.shape, float(dt)))


def adjoint_gradient(u_grid: Sequence[float], dt: float, x: float) -> List[float]:
    """
    dJ/du_k for J = -|Psi_0(tf)|^2 / 2 and a uniform grid of constant cells,
    from one forward and one backward Schrodinger solve.
    """
    _, grad = grid_fidelity_and_gradient(u_grid, dt, x)
    return [float(g) for g in grad]


def protocol_gradient(protocol: Protocol, x: float) -> List[float]:
    """dJ/du per segment of an arbitrary piecewise-constant protocol."""
    if not protocol.segments:
        return []
    u = np.array([s.u for s in protocol.segments], dtype=float)
    dt = np.array([s.duration for s in protocol.segments], dtype=float)
    _, grad = _cell_pass(x, u, dt)
    return [float(g) for g in grad]


def projected_gradient(u_grid: Sequence[float], grad: Sequence[float]) -> np.ndarray:
    """
    Gradient of J with the components that would push u through a bound
    zeroed: at u = +1 a negative dJ/du, at u = -1 a positive one.
    """
    u = np.asarray(u_grid, dtype=float)
    g = np.array(grad, dtype=float)
    g[(u >= 1.0) & (g < 0.0)] = 0.0
    g[(u <= -1.0) & (g > 0.0)] = 0.0
    return g
