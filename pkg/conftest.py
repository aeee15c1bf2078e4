# conftest.py
#
# Shared helpers for the root test modules.

from __future__ import annotations

import math
from typing import List

import numpy as np
import pytest

from grover_pmp.dynamics import hamiltonian_matrix
from grover_pmp.models import PauliHamiltonian, Protocol

RK4_MAX_STEP = 1e-4


def random_protocol(rng: np.random.Generator, max_segments: int = 6) -> Protocol:
    count = int(rng.integers(1, max_segments + 1))
    durations = rng.uniform(0.05, 1.5, size=count)
    controls = rng.uniform(-1.0, 1.0, size=count)
    # some bangs
    bangs = rng.random(count) < 0.3
    controls[bangs] = np.sign(controls[bangs])
    return Protocol.from_pairs(list(zip(durations, controls)), label="random")


def rk4_transfer(h: PauliHamiltonian, duration: float) -> np.ndarray:
    """
    Fixed-step RK4 propagator for psi' = -iH psi over `duration`: the
    one-step transfer matrix sum_{k<=4} (hA)^k / k! raised to the step count.
    """
    steps = max(1, math.ceil(duration / RK4_MAX_STEP))
    step = duration / steps
    a = -1j * hamiltonian_matrix(h) * step
    m = np.eye(2, dtype=np.complex128)
    term = np.eye(2, dtype=np.complex128)
    for k in range(1, 5):
        term = term @ a / k
        m = m + term
    return np.linalg.matrix_power(m, steps)


@pytest.fixture
def random_protocols() -> List[Protocol]:
    rng = np.random.default_rng(20240611)
    return [random_protocol(rng) for _ in range(100)]
