# grover_pmp/protocols.py
#
# Named control protocols and the closed-form bang-singular-bang optimum.
#
#   singular            u = 0 for pi/x
#   grover              N = round(pi/(4x)) cycles of (pi, +1), (pi, -1)
#   bang-singular-bang  (t1, +1), (t2, 0), (t1, -1)
#   multiple bang       (t1, +1), 2N half-cycles -1/+1, (t1, -1)

from __future__ import annotations

import cmath
import math
from typing import List, Tuple

import numpy as np

from .dynamics import require_overlap
from .errors import DomainError
from .models import OptimalTimes, Protocol, QubitState

SQRT3 = math.sqrt(3.0)

# sin(t1) below this makes the t2(t1) relation singular
SIN_T1_EPS = 1e-12

# |numerator| below this (relative to the denominator) means x*t2/2 = 0
ZERO_ANGLE_EPS = 1e-12


# ------------- protocol builders -------------

def singular_protocol(x: float) -> Protocol:
    x = require_overlap(x)
    return Protocol.from_pairs([(math.pi / x, 0.0)], label="singular")


def grover_iterations(x: float) -> int:
    """Nearest integer to pi/(4x)."""
    x = require_overlap(x)
    return max(1, int(round(math.pi / (4.0 * x))))


def grover_protocol(x: float) -> Protocol:
    """
    Grover's algorithm in Hamiltonian form: e^{-i pi Hw} then e^{-i pi Hs},
    repeated round(pi/(4x)) times.
    """
    n = grover_iterations(x)
    pairs: List[Tuple[float, float]] = []
    for _ in range(n):
        pairs.append((math.pi, 1.0))
        pairs.append((math.pi, -1.0))
    return Protocol.from_pairs(pairs, label="grover")


def bang_singular_bang(t1: float, t2: float) -> Protocol:
    """Y bang (u=+1) for t1, singular u=0 for t2, X bang (u=-1) for t1."""
    if t1 < 0.0 or t2 < 0.0:
        raise DomainError(f"Durations must be >= 0, got t1={t1}, t2={t2}")

    pairs = [(t1, 1.0), (t2, 0.0), (t1, -1.0)]
    return Protocol.from_pairs([(d, u) for d, u in pairs if d > 0.0], label="bsb")


def multiple_bang(t1: float, n: int, tf: float) -> Protocol:
    """
    (t1, +1), then 2n half-cycles of (tf - 2 t1)/(2n) alternating
    -1, +1, -1, ..., then (t1, -1). n = 2 gives 5 switchings.
    """
    if n < 1:
        raise DomainError(f"Number of alternations must be >= 1, got {n}")
    if not (0.0 < 2.0 * t1 < tf):
        raise DomainError(f"Need 0 < 2*t1 < tf, got t1={t1}, tf={tf}")

    inner = (tf - 2.0 * t1) / (2 * n)
    pairs: List[Tuple[float, float]] = [(t1, 1.0)]
    for i in range(2 * n):
        pairs.append((inner, -1.0 if i % 2 == 0 else 1.0))
    pairs.append((t1, -1.0))
    return Protocol.from_pairs(pairs, label=f"multibang-N{n}")


# ------------- closed forms -------------

def psi1_magnitude(t1: float, t2: float, x: float) -> float:
    """
    Second amplitude after bang-singular-bang (global phase dropped):

      sqrt(1-x^2) [cos(x t2/2)(1 - 4x^2 sin^2(t1/2)) - 2x sin(x t2/2) sin t1]

    Signed; square it for the residual population.
    """
    x = require_overlap(x)
    if t1 < 0.0 or t2 < 0.0:
        raise DomainError(f"Durations must be >= 0, got t1={t1}, t2={t2}")
    a = 0.5 * x * t2
    return math.sqrt(1.0 - x * x) * (
        math.cos(a) * (1.0 - 4.0 * x * x * math.sin(0.5 * t1) ** 2)
        - 2.0 * x * math.sin(a) * math.sin(t1)
    )


def t2_of_t1(t1: float, x: float) -> float:
    """
    Singular duration that zeroes psi1 for a given bang duration:

      tan(x t2/2) = (1 - 2x^2 + 2x^2 cos t1) / (2x sin t1)

    with x t2/2 taken in [0, pi).
    """
    x = require_overlap(x)
    s = math.sin(t1)
    if abs(s) < SIN_T1_EPS:
        raise DomainError(f"t2(t1) is singular at sin(t1) = 0 (t1={t1})")

    num = 1.0 - 2.0 * x * x + 2.0 * x * x * math.cos(t1)
    den = 2.0 * x * s
    if abs(num) <= ZERO_ANGLE_EPS * abs(den):
        return 0.0

    a = math.atan2(num, den)
    if a < 0.0:
        a += math.pi
    return 2.0 * a / x


def optimal_cos_t1(x: float) -> float:
    """The root (-1 + 2x^2) / (2(-1 + x^2)), the one giving the smaller t1."""
    x = require_overlap(x)
    return (-1.0 + 2.0 * x * x) / (2.0 * (-1.0 + x * x))


def cos_t1_residual(x: float, c: float) -> float:
    """4x^2(x^2-1) c^2 - 2(2x^2-1)^2 c + (2x^2-1)^2, zero at the optimal cos t1."""
    x = require_overlap(x)
    q = 2.0 * x * x - 1.0
    return 4.0 * x * x * (x * x - 1.0) * c * c - 2.0 * q * q * c + q * q


def optimal_times(x: float) -> OptimalTimes:
    c = optimal_cos_t1(x)
    if not (-1.0 <= c <= 1.0):
        raise DomainError(
            f"No bang-singular-bang optimum for x={x}: cos(t1*)={c} lies outside [-1, 1]"
        )
    t1 = math.acos(c)
    t2 = t2_of_t1(t1, x)
    return OptimalTimes(t1=t1, t2=t2, tf=2.0 * t1 + t2)


def asymptotic_times(x: float) -> OptimalTimes:
    """
    Small-x expansion: t1 = pi/3 + x^2/sqrt(3), t2 = pi/x - 2 sqrt(3).

    tf is kept as 2 t1 + t2, i.e. pi/x + 2pi/3 - 2 sqrt(3) + 2x^2/sqrt(3).
    """
    x = require_overlap(x)
    t1 = math.pi / 3.0 + x * x / SQRT3
    t2 = math.pi / x - 2.0 * SQRT3
    return OptimalTimes(t1=t1, t2=t2, tf=2.0 * t1 + t2)


# ------------- analytic references -------------

def singular_closed_form(x: float, t: float) -> QubitState:
    """Wave function under u = 0 starting from |s>."""
    x = require_overlap(x)
    phase = cmath.exp(-0.5j * t)
    c = math.cos(0.5 * x * t)
    s = math.sin(0.5 * x * t)
    return QubitState(
        phase * complex(x * c, -s),
        phase * complex(math.sqrt(1.0 - x * x) * c, 0.0),
    )


def grover_gate_state(x: float, n: int) -> QubitState:
    """
    (U_s U_w)^n |s> with U_w = 2|w><w| - I and U_s = I - 2|s><s|.

    Matches evolve(grover_protocol) up to the global sign (-1)^n.
    """
    x = require_overlap(x)
    s = np.array([x, math.sqrt(1.0 - x * x)], dtype=np.complex128)
    u_w = np.diag([1.0, -1.0]).astype(np.complex128)
    u_s = np.eye(2, dtype=np.complex128) - 2.0 * np.outer(s, s.conj())
    psi = np.linalg.matrix_power(u_s @ u_w, n) @ s
    return QubitState.from_array(psi)
