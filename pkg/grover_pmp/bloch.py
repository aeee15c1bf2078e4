# grover_pmp/bloch.py
#
# Geometric-control view of the Grover problem on the (theta, phi) chart.
#
# A state e^{i phi0}[cos(theta/2), sin(theta/2) e^{i phi}]^T maps to
# (theta, phi); Hamiltonians become vector fields:
#
#   sigma_z -> V_z = 2 d_phi
#   sigma_x -> V_x = -2 sin(phi) d_theta - 2 cos(phi) cot(theta) d_phi
#   sigma_y -> V_y =  2 cos(phi) d_theta - 2 sin(phi) cot(theta) d_phi
#
# The identity part of a Hamiltonian only moves phi0 and has no image.
# Bracket convention: [V, W] = DW.V - DV.W.

from __future__ import annotations

import cmath
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import initial_state, require_control, require_overlap
from .errors import PoleError, PreconditionError
from .models import (
    ArcClassification,
    ArcKind,
    BlochPoint,
    GroverThetaAnalysis,
    PauliHamiltonian,
    ProblemFields,
    Protocol,
    QubitState,
    TangentVector,
    Trajectory,
)
from .utils import wrap_2pi

# Guard band around theta in {0, pi} and sin(phi) = 0
POLE_EPS = 1e-3

# Amplitudes below this count as zero when reading off phi
AMPLITUDE_EPS = 1e-12

# Central-difference step for Lie derivatives and brackets
LIE_STEP = 1e-6

# |alpha| allowed at a point handed to classify_arc
ARC_TOL = 1e-8

Field = Callable[[BlochPoint], TangentVector]


# ------------- chart -------------

def state_to_bloch(state: QubitState) -> BlochPoint:
    """Strip the global phase so c0 is real and >= 0, then read (theta, phi)."""
    a0 = abs(state.c0)
    a1 = abs(state.c1)
    theta = 2.0 * math.atan2(a1, a0)
    scale = max(a0, a1)
    if a0 <= AMPLITUDE_EPS * scale or a1 <= AMPLITUDE_EPS * scale:
        return BlochPoint(theta=theta, phi=0.0)
    phi = wrap_2pi(cmath.phase(state.c1) - cmath.phase(state.c0))
    return BlochPoint(theta=theta, phi=phi)


def bloch_to_state(p: BlochPoint) -> QubitState:
    return QubitState(
        complex(math.cos(0.5 * p.theta), 0.0),
        math.sin(0.5 * p.theta) * cmath.exp(1j * p.phi),
    )


def _check_theta(p: BlochPoint) -> None:
    if p.theta < POLE_EPS or p.theta > math.pi - POLE_EPS:
        raise PoleError(f"theta={p.theta} is within {POLE_EPS} of a pole (cot(theta) diverges)")


def _check_phi(p: BlochPoint) -> None:
    if abs(math.sin(p.phi)) < POLE_EPS:
        raise PoleError(f"sin(phi) vanishes at phi={p.phi}; the [f, g] decomposition is singular")


def _shift(p: BlochPoint, v: TangentVector, h: float) -> BlochPoint:
    return BlochPoint(p.theta + h * v.d_theta, p.phi + h * v.d_phi)


# ------------- vector fields -------------

def pauli_field(which: str, p: BlochPoint) -> TangentVector:
    if which == "z":
        return TangentVector(0.0, 2.0)
    if which not in ("x", "y"):
        raise ValueError(f"Unknown Pauli axis {which!r}; expected 'x', 'y' or 'z'")

    _check_theta(p)
    cot = 1.0 / math.tan(p.theta)
    if which == "x":
        return TangentVector(-2.0 * math.sin(p.phi), -2.0 * math.cos(p.phi) * cot)
    return TangentVector(2.0 * math.cos(p.phi), -2.0 * math.sin(p.phi) * cot)


def hamiltonian_field(h: PauliHamiltonian, p: BlochPoint) -> TangentVector:
    """nx V_x + ny V_y + nz V_z; e0 has no image."""
    out = pauli_field("z", p).scaled(h.nz)
    if h.nx != 0.0:
        out = out + pauli_field("x", p).scaled(h.nx)
    if h.ny != 0.0:
        out = out + pauli_field("y", p).scaled(h.ny)
    return out


def problem_fields(x: float, p: BlochPoint) -> ProblemFields:
    """
    Y (u = +1, Hw), X (u = -1, Hs), and the drift/control pair
    f = (X + Y)/2, g = (Y - X)/2.
    """
    x = require_overlap(x)
    _check_theta(p)
    s = x * math.sqrt(1.0 - x * x)
    cot = 1.0 / math.tan(p.theta)

    y_field = TangentVector(0.0, 1.0)
    x_field = TangentVector(
        -2.0 * s * math.sin(p.phi),
        (2.0 * x * x - 1.0) - 2.0 * s * math.cos(p.phi) * cot,
    )
    return ProblemFields(
        X=x_field,
        Y=y_field,
        f=(x_field + y_field).scaled(0.5),
        g=(y_field - x_field).scaled(0.5),
    )


def reduced_rhs(x: float, p: BlochPoint, u: float) -> TangentVector:
    """d(theta, phi)/dt = f + u g."""
    x = require_overlap(x)
    u = require_control(u)
    _check_theta(p)
    s = x * math.sqrt(1.0 - x * x)
    cot = 1.0 / math.tan(p.theta)
    sin_p = math.sin(p.phi)
    cos_p = math.cos(p.phi)

    f = TangentVector(-s * sin_p, x * x - s * cos_p * cot)
    g = TangentVector(s * sin_p, (1.0 - x * x) + s * cos_p * cot)
    return f + g.scaled(u)


# ------------- Lie calculus -------------

def lie_derivative(fn: Callable[[BlochPoint], float], field: Field, p: BlochPoint, h: float = LIE_STEP) -> float:
    """L_V fn at p by a central difference along V(p)."""
    v = field(p)
    return (fn(_shift(p, v, h)) - fn(_shift(p, v, -h))) / (2.0 * h)


def _jacobian(field: Field, p: BlochPoint, h: float) -> np.ndarray:
    jac = np.empty((2, 2), dtype=float)
    for j, step in enumerate((BlochPoint(h, 0.0), BlochPoint(0.0, h))):
        plus = field(BlochPoint(p.theta + step.theta, p.phi + step.phi)).as_array()
        minus = field(BlochPoint(p.theta - step.theta, p.phi - step.phi)).as_array()
        jac[:, j] = (plus - minus) / (2.0 * h)
    return jac


def lie_bracket(v: Field, w: Field, p: BlochPoint, h: float = LIE_STEP) -> TangentVector:
    """[V, W](p) = DW(p) V(p) - DV(p) W(p), Jacobians by central differences."""
    out = _jacobian(w, p, h) @ v(p).as_array() - _jacobian(v, p, h) @ w(p).as_array()
    return TangentVector(float(out[0]), float(out[1]))


def alpha_beta(x: float, p: BlochPoint) -> Tuple[float, float]:
    """
    Coefficients of [f, g] = alpha f + beta g:

      alpha = -sqrt(1-x^2) (x cot(theta)/sin(phi) + sqrt(1-x^2) cos(phi)/sin(phi))
      beta  = -x sqrt(1-x^2) cot(theta)/sin(phi) + x^2 cos(phi)/sin(phi)
    """
    x = require_overlap(x)
    _check_theta(p)
    _check_phi(p)
    r = math.sqrt(1.0 - x * x)
    cot = 1.0 / math.tan(p.theta)
    sin_p = math.sin(p.phi)
    cos_p = math.cos(p.phi)

    alpha = -r * (x * cot / sin_p + r * cos_p / sin_p)
    beta = -x * r * cot / sin_p + x * x * cos_p / sin_p
    return alpha, beta


# ------------- singular arc -------------

def singular_arc_theta(phi: float, x: float) -> float:
    """theta in (0, pi) on the alpha = 0 curve: cot(theta) = -(sqrt(1-x^2)/x) cos(phi)."""
    x = require_overlap(x)
    return 0.5 * math.pi + math.atan(math.sqrt(1.0 - x * x) / x * math.cos(phi))


def singular_arc_samples(x: float, n: int = 361) -> List[Tuple[float, float]]:
    """(phi, theta) pairs along the arc for phi in [0, 2 pi]."""
    if n < 2:
        raise ValueError(f"Need at least 2 arc samples, got {n}")
    return [(float(phi), singular_arc_theta(float(phi), x)) for phi in np.linspace(0.0, 2.0 * math.pi, n)]


def classify_arc(x: float, p_on_arc: BlochPoint) -> ArcClassification:
    """
    Lie derivatives of alpha along X and Y at a point with alpha = 0, and
    the resulting arc type:

      L_X alpha < 0 < L_Y alpha   fast  (singular control optimal)
      L_Y alpha < 0 < L_X alpha   slow
      same sign                   not singular
    """
    alpha0, _ = alpha_beta(x, p_on_arc)
    if abs(alpha0) >= ARC_TOL:
        raise PreconditionError(
            f"Point (theta={p_on_arc.theta}, phi={p_on_arc.phi}) is off the singular arc: alpha={alpha0:.3e}"
        )

    def alpha(q: BlochPoint) -> float:
        return alpha_beta(x, q)[0]

    l_x = lie_derivative(alpha, lambda q: problem_fields(x, q).X, p_on_arc)
    l_y = lie_derivative(alpha, lambda q: problem_fields(x, q).Y, p_on_arc)

    if l_x < 0.0 < l_y:
        kind = ArcKind.FAST
    elif l_y < 0.0 < l_x:
        kind = ArcKind.SLOW
    else:
        return ArcClassification(l_x_alpha=l_x, l_y_alpha=l_y, kind=ArcKind.NOT_SINGULAR)

    return ArcClassification(
        l_x_alpha=l_x,
        l_y_alpha=l_y,
        kind=kind,
        singular_u=(l_x + l_y) / (l_x - l_y),
    )


# ------------- Grover zigzag -------------

def initial_bloch(x: float) -> BlochPoint:
    """(2 arctan(sqrt(1-x^2)/x), 0)."""
    return state_to_bloch(initial_state(x))


def grover_theta_analysis(x: float) -> GroverThetaAnalysis:
    """
    Largest theta reduction one X bang can make (phi swept from pi to 0)
    and the number of Y/X cycles it implies to reach theta = 0.
    """
    x = require_overlap(x)
    delta = 4.0 * x * math.sqrt(1.0 - x * x)
    theta_i = 2.0 * math.atan2(math.sqrt(1.0 - x * x), x)
    return GroverThetaAnalysis(delta_theta_max=delta, n_estimate=theta_i / delta)


# ------------- trajectories -------------

def bloch_trajectory(trajectory: Trajectory) -> List[Tuple[float, float, float]]:
    """Project a full trajectory to (t, theta, phi) with phi unwrapped."""
    points = [state_to_bloch(s) for s in trajectory.states]
    phis = np.unwrap([p.phi for p in points]) if points else []
    return [
        (float(t), p.theta, float(phi))
        for t, p, phi in zip(trajectory.times, points, phis)
    ]


def integrate_reduced(
    x: float,
    protocol: Protocol,
    start: Optional[BlochPoint] = None,
    samples_per_segment: int = 1,
) -> List[Tuple[float, float, float]]:
    """
    Integrate d(theta, phi)/dt = f + u g segment by segment (DOP853),
    sampling each segment like dynamics.evolve does.

    Returns (t, theta, phi) with phi continuous. Raises PoleError if the
    path enters the guard band around theta in {0, pi}.
    """
    x = require_overlap(x)
    if samples_per_segment < 1:
        raise ValueError(f"samples_per_segment must be >= 1, got {samples_per_segment}")
    p0 = initial_bloch(x) if start is None else start
    y = np.array([p0.theta, p0.phi], dtype=float)

    out: List[Tuple[float, float, float]] = [(0.0, float(y[0]), float(y[1]))]
    t0 = 0.0
    for seg in protocol.segments:
        t1 = t0 + seg.duration
        grid = np.linspace(t0, t1, samples_per_segment + 1)[1:]

        def rhs(_t: float, v: np.ndarray, u: float = seg.u) -> np.ndarray:
            return reduced_rhs(x, BlochPoint(float(v[0]), float(v[1])), u).as_array()

        sol = solve_ivp(rhs, (t0, t1), y, method="DOP853", t_eval=grid, rtol=1e-12, atol=1e-12)
        if not sol.success:
            raise RuntimeError(f"Reduced integration failed on segment u={seg.u}: {sol.message}")

        out.extend((float(t), float(th), float(ph)) for t, th, ph in zip(sol.t, sol.y[0], sol.y[1]))
        y = sol.y[:, -1].copy()
        t0 = t1

    return out
