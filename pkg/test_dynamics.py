# test_dynamics.py

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from conftest import rk4_transfer
from grover_pmp.dynamics import (
    control_hamiltonian,
    evolve,
    fidelity,
    final_state,
    grover_hamiltonians,
    hamiltonian_matrix,
    initial_state,
    overlap_from_qubits,
    propagate_const,
    require_overlap,
    segment_unitaries,
    target_state,
    unitary,
)
from grover_pmp.errors import DomainError
from grover_pmp.models import PauliHamiltonian, Protocol, QubitState


# ------------- Hamiltonians -------------

@pytest.mark.parametrize("x", [0.05, 0.25, 0.5, 0.9])
def test_hw_hs_are_projectors(x):
    h = grover_hamiltonians(x)
    s = np.array([x, math.sqrt(1 - x * x)])

    assert_allclose(hamiltonian_matrix(h.hw), np.diag([1.0, 0.0]), atol=1e-15)
    assert_allclose(hamiltonian_matrix(h.hs), np.outer(s, s), atol=1e-15)


@pytest.mark.parametrize("x", [0.1, 0.5, 0.8])
def test_drift_and_driving_split(x):
    h = grover_hamiltonians(x)
    hw, hs = hamiltonian_matrix(h.hw), hamiltonian_matrix(h.hs)

    assert_allclose(hamiltonian_matrix(h.h0), 0.5 * (hw + hs), atol=1e-15)
    assert_allclose(hamiltonian_matrix(h.hd), 0.5 * (hw - hs), atol=1e-15)


def test_bang_controls_give_exact_hw_hs():
    h = grover_hamiltonians(0.3)
    assert control_hamiltonian(0.3, 1.0) == h.hw
    assert control_hamiltonian(0.3, -1.0) == h.hs
    assert control_hamiltonian(0.3, 0.0) == h.h0


def test_control_bound_enforced():
    with pytest.raises(DomainError):
        control_hamiltonian(0.5, 1.01)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_overlap_domain(bad):
    with pytest.raises(DomainError):
        require_overlap(bad)


def test_overlap_from_qubits():
    assert overlap_from_qubits(2) == 0.5
    assert overlap_from_qubits(10) == 0.03125
    with pytest.raises(DomainError):
        overlap_from_qubits(0)


def test_initial_and_target_states():
    s = initial_state(0.5)
    assert s.norm_sq() == pytest.approx(1.0, abs=1e-15)
    assert fidelity(s) == pytest.approx(0.25)
    assert fidelity(target_state()) == 1.0


# ------------- propagation -------------

@pytest.mark.parametrize("u", [-1.0, -0.4, 0.0, 0.7, 1.0])
@pytest.mark.parametrize("dt", [1e-3, 0.8, 5.0])
def test_closed_form_matches_expm(u, dt):
    h = control_hamiltonian(0.35, u)
    expected = expm(-1j * hamiltonian_matrix(h) * dt)
    assert_allclose(unitary(h, dt), expected, atol=1e-12)


def test_identity_hamiltonian_only_adds_phase():
    h = PauliHamiltonian(0.3, 0.0, 0.0, 0.0)
    psi = QubitState(0.6 + 0j, 0.8j)
    out = propagate_const(psi, h, 2.0)
    phase = complex(math.cos(0.6), -math.sin(0.6))
    assert out.c0 == pytest.approx(phase * psi.c0, abs=1e-15)
    assert out.c1 == pytest.approx(phase * psi.c1, abs=1e-15)


def test_zero_and_negative_steps():
    h = control_hamiltonian(0.5, 0.0)
    psi = initial_state(0.5)
    assert propagate_const(psi, h, 0.0) is psi
    with pytest.raises(DomainError):
        propagate_const(psi, h, -0.1)


def test_segment_unitaries_match_single_propagators():
    u = np.array([-1.0, -0.3, 0.0, 0.5, 1.0])
    dt = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
    mats = segment_unitaries(0.4, u, dt)
    assert mats.shape == (5, 2, 2)
    for k in range(5):
        assert_allclose(mats[k], unitary(control_hamiltonian(0.4, u[k]), dt[k]), atol=1e-14)


def test_segment_unitaries_reject_bad_input():
    with pytest.raises(DomainError):
        segment_unitaries(0.4, [0.0, 1.5], 0.1)
    with pytest.raises(DomainError):
        segment_unitaries(0.4, [0.0, 0.5], 0.0)


# ------------- evolve -------------

def test_evolve_sampling_layout():
    protocol = Protocol.from_pairs([(1.0, 1.0), (0.5, 0.0), (2.0, -1.0)])
    traj = evolve(initial_state(0.5), protocol, 0.5, samples_per_segment=4)

    assert len(traj) == 1 + 3 * 4
    assert traj.times[0] == 0.0
    assert traj.times[4] == pytest.approx(1.0)
    assert traj.times[-1] == pytest.approx(3.5)
    assert all(b > a for a, b in zip(traj.times, traj.times[1:]))


def test_evolve_endpoint_independent_of_sampling():
    protocol = Protocol.from_pairs([(0.7, 1.0), (1.1, -0.2), (0.9, -1.0)])
    coarse = evolve(initial_state(0.3), protocol, 0.3, samples_per_segment=1).final
    fine = evolve(initial_state(0.3), protocol, 0.3, samples_per_segment=37).final
    direct = final_state(initial_state(0.3), protocol, 0.3)

    assert fine.c0 == coarse.c0 and fine.c1 == coarse.c1
    assert direct.c0 == coarse.c0 and direct.c1 == coarse.c1


def test_evolve_empty_protocol():
    traj = evolve(initial_state(0.5), Protocol(segments=()), 0.5)
    assert traj.times == [0.0]
    assert traj.final == initial_state(0.5)


def test_evolve_rejects_zero_samples():
    with pytest.raises(DomainError):
        evolve(initial_state(0.5), Protocol.from_pairs([(1.0, 0.0)]), 0.5, samples_per_segment=0)


# ------------- properties over random protocols -------------

def test_norm_conservation(random_protocols):
    for protocol in random_protocols:
        traj = evolve(initial_state(0.3), protocol, 0.3, samples_per_segment=5)
        for s in traj.states:
            assert abs(s.norm_sq() - 1.0) < 1e-10


def test_composition_and_reversibility(random_protocols):
    rng = np.random.default_rng(7)
    psi = initial_state(0.45)
    for protocol in random_protocols:
        for seg in protocol.segments:
            h = control_hamiltonian(0.45, seg.u)
            split = float(rng.uniform(0.0, seg.duration))

            whole = propagate_const(psi, h, seg.duration)
            parts = propagate_const(propagate_const(psi, h, split), h, seg.duration - split)
            assert abs(whole.c0 - parts.c0) < 1e-12
            assert abs(whole.c1 - parts.c1) < 1e-12

            back = propagate_const(whole, -h, seg.duration)
            assert abs(back.c0 - psi.c0) < 1e-12
            assert abs(back.c1 - psi.c1) < 1e-12


def test_rk4_oracle_agrees_with_closed_form(random_protocols):
    x = 0.5
    for protocol in random_protocols:
        psi = initial_state(x).as_array()
        for seg in protocol.segments:
            psi = rk4_transfer(control_hamiltonian(x, seg.u), seg.duration) @ psi
        exact = final_state(initial_state(x), protocol, x).as_array()
        assert np.max(np.abs(psi - exact)) < 1e-8
