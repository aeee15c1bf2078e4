# grover_pmp/optimizer.py
#
# Numerical optimization drivers:
#   - best t1 for a fixed tf within the bang-singular-bang and multiple-bang
#     families (coarse grid + golden-section refinement)
#   - projected gradient ascent on gridded controls with adjoint gradients
#   - the tf sweep over qubit counts
#
# Objectives use only evolve/fidelity; closed forms stay independent checks.

from __future__ import annotations

import math
from typing import Callable, List

import numpy as np
from scipy.optimize import minimize_scalar

from .dynamics import final_state, fidelity, initial_state, overlap_from_qubits, require_overlap
from .errors import DomainError
from .models import GradOptResult, Protocol, ScalarOptResult, SweepRow
from .pmp import grid_fidelity_and_gradient, projected_gradient
from .protocols import bang_singular_bang, grover_gate_state, grover_iterations, multiple_bang, optimal_times
from .utils import debug

GRID_POINTS = 400
T1_XTOL = 1e-8

# backtracking line search
ARMIJO = 1e-4
SHRINK = 0.5
INITIAL_STEP = 1.0
MIN_STEP = 1e-12
GRAD_TOL = 1e-6

MIN_CELLS = 10
MAX_SWEEP_QUBITS = 60


class _Counted:
    """Wraps an objective and counts its evaluations."""

    def __init__(self, fn: Callable[[float], float]) -> None:
        self.fn = fn
        self.calls = 0

    def __call__(self, t: float) -> float:
        self.calls += 1
        return self.fn(t)


def _protocol_fidelity(x: float, protocol: Protocol) -> float:
    return fidelity(final_state(initial_state(x), protocol, x))


def _scan_and_refine(objective: Callable[[float], float], grid: np.ndarray) -> ScalarOptResult:
    """
    Maximize objective over the grid, then polish the best interior point
    with golden-section search on its neighbours. Ties go to the smallest
    parameter (first maximum on the grid).
    """
    f = _Counted(objective)
    values = np.array([f(float(t)) for t in grid])
    k = int(np.argmax(values))
    best_t, best_f = float(grid[k]), float(values[k])

    if 0 < k < len(grid) - 1:
        a, b, c = float(grid[k - 1]), best_t, float(grid[k + 1])

        def neg(t: float) -> float:
            return -f(t)

        try:
            res = minimize_scalar(neg, bracket=(a, b, c), method="golden", tol=T1_XTOL)
        except ValueError:
            # flat neighbourhood: the 3-point bracket is not strict
            res = minimize_scalar(neg, bounds=(a, c), method="bounded", options={"xatol": T1_XTOL})

        t_ref = float(res.x)
        f_ref = -float(res.fun)
        if a <= t_ref <= c and f_ref > best_f:
            best_t, best_f = t_ref, f_ref

    return ScalarOptResult(best_param=best_t, best_fidelity=min(max(best_f, 0.0), 1.0), evaluations=f.calls)


def optimize_t1_bsb(x: float, tf: float) -> ScalarOptResult:
    """Best t1 for bang_singular_bang(t1, tf - 2 t1), t1 in [0, tf/2]."""
    x = require_overlap(x)
    if not tf > 0.0:
        raise DomainError(f"tf must be > 0, got {tf}")

    half = 0.5 * tf

    def objective(t1: float) -> float:
        t1 = min(max(t1, 0.0), half)
        return _protocol_fidelity(x, bang_singular_bang(t1, max(tf - 2.0 * t1, 0.0)))

    result = _scan_and_refine(objective, np.linspace(0.0, half, GRID_POINTS))
    debug(
        f"optimize_t1_bsb x={x} tf={tf / math.pi:.6f}pi -> t1={result.best_param / math.pi:.6f}pi "
        f"F={result.best_fidelity:.12f} ({result.evaluations} evaluations)"
    )
    return result


def optimize_t1_multibang(x: float, tf: float, n: int) -> ScalarOptResult:
    """Best t1 for multiple_bang(t1, n, tf), t1 in (0, tf/2)."""
    x = require_overlap(x)
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    if not tf > 0.0:
        raise DomainError(f"tf must be > 0, got {tf}")

    half = 0.5 * tf
    # open interval: keep the inner half-cycles strictly positive
    eps = half * 1e-9

    def objective(t1: float) -> float:
        t1 = min(max(t1, eps), half - eps)
        return _protocol_fidelity(x, multiple_bang(t1, n, tf))

    grid = np.linspace(0.0, half, GRID_POINTS + 2)[1:-1]
    result = _scan_and_refine(objective, grid)
    debug(
        f"optimize_t1_multibang x={x} tf={tf / math.pi:.6f}pi N={n} -> "
        f"t1={result.best_param / math.pi:.6f}pi F={result.best_fidelity:.12f}"
    )
    return result


def brute_force_t1(objective: Callable[[float], float], lo: float, hi: float, step: float = 1e-4) -> ScalarOptResult:
    """Exhaustive scan of objective over [lo, hi] at the given step."""
    if not step > 0.0:
        raise DomainError(f"step must be > 0, got {step}")
    if hi < lo:
        raise DomainError(f"Empty scan range [{lo}, {hi}]")

    count = int(math.floor((hi - lo) / step)) + 1
    grid = lo + step * np.arange(count)
    values = np.array([objective(float(t)) for t in grid])
    k = int(np.argmax(values))
    return ScalarOptResult(best_param=float(grid[k]), best_fidelity=float(values[k]), evaluations=count)


# ------------- gradient ascent -------------

def gradient_descent(x: float, tf: float, cells: int = 200, max_iter: int = 1000) -> GradOptResult:
    """
    Projected gradient ascent on fidelity over a uniform grid of `cells`
    constant controls, starting from u = 0.

    The ascent direction is the functional gradient -2 (dJ/du_k) / dt, so
    the step length does not depend on the grid resolution. Each iteration
    backtracks from INITIAL_STEP until the Armijo condition holds; iterates
    are clipped to [-1, 1].
    """
    x = require_overlap(x)
    if cells < MIN_CELLS:
        raise DomainError(f"cells must be >= {MIN_CELLS}, got {cells}")
    if not tf > 0.0:
        raise DomainError(f"tf must be > 0, got {tf}")
    if max_iter < 0:
        raise DomainError(f"max_iter must be >= 0, got {max_iter}")

    dt = tf / cells
    u = np.zeros(cells, dtype=float)
    fid, grad = grid_fidelity_and_gradient(u, dt, x)
    history = [fid]
    iterations = 0

    while iterations < max_iter:
        # dF/du_k = -2 dJ/du_k
        dfdu = -2.0 * projected_gradient(u, grad)
        direction = dfdu / dt
        norm = float(np.linalg.norm(direction) * math.sqrt(dt))
        if norm < GRAD_TOL:
            debug(f"gradient_descent: projected gradient norm {norm:.3e} below {GRAD_TOL}")
            break

        step = INITIAL_STEP
        accepted = False
        while step >= MIN_STEP:
            trial = np.clip(u + step * direction, -1.0, 1.0)
            gain = float(np.dot(dfdu, trial - u))
            trial_fid, trial_grad = grid_fidelity_and_gradient(trial, dt, x)
            if trial_fid >= fid + ARMIJO * gain:
                accepted = True
                break
            step *= SHRINK

        if not accepted:
            debug(f"gradient_descent: line search stalled at iteration {iterations}")
            break

        u, fid, grad = trial, trial_fid, trial_grad
        history.append(fid)
        iterations += 1
        if iterations % 50 == 0:
            debug(f"gradient_descent: iter={iterations} F={fid:.12f} |grad|={norm:.3e} step={step:g}")

    return GradOptResult(
        u_grid=[float(v) for v in u],
        fidelity_history=history,
        iterations=iterations,
        dt=dt,
    )


# ------------- tf sweep -------------

def _sweep_row(n: int) -> SweepRow:
    x = overlap_from_qubits(n)
    tf_opt = optimal_times(x).tf
    tf_sing = math.pi / x
    cycles = grover_iterations(x)
    return SweepRow(
        n=n,
        x=x,
        tf_optimal=tf_opt,
        tf_singular=tf_sing,
        tf_grover=2.0 * math.pi * cycles,
        diff=tf_sing - tf_opt,
        grover_fidelity=abs(grover_gate_state(x, cycles).c0) ** 2,
    )


def sweep_times(n_min: int, n_max: int) -> List[SweepRow]:
    """One row per qubit count n in [n_min, n_max]; x = 2^(-n/2)."""
    if not (1 <= n_min <= n_max <= MAX_SWEEP_QUBITS):
        raise DomainError(f"Need 1 <= n_min <= n_max <= {MAX_SWEEP_QUBITS}, got n_min={n_min}, n_max={n_max}")
    rows = [_sweep_row(n) for n in range(n_min, n_max + 1)]
    debug(f"sweep_times: {len(rows)} rows, last diff={rows[-1].diff / math.pi:.6f}pi")
    return rows
