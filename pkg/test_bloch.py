# test_bloch.py

import math

import numpy as np
import pytest

from grover_pmp.bloch import (
    alpha_beta,
    bloch_to_state,
    bloch_trajectory,
    classify_arc,
    hamiltonian_field,
    initial_bloch,
    integrate_reduced,
    lie_bracket,
    pauli_field,
    problem_fields,
    reduced_rhs,
    singular_arc_samples,
    singular_arc_theta,
    state_to_bloch,
)
from grover_pmp.dynamics import evolve, grover_hamiltonians, initial_state, propagate_const
from grover_pmp.errors import PoleError, PreconditionError
from grover_pmp.models import ArcKind, BlochPoint, PauliHamiltonian, Protocol
from grover_pmp.protocols import grover_protocol, optimal_times, bang_singular_bang, singular_protocol
from grover_pmp.utils import angle_diff

PI = math.pi
BAND = 0.05


def _random_point(rng):
    """A point away from theta poles and from sin(phi) = 0."""
    theta = rng.uniform(0.3, PI - 0.3)
    phi = rng.uniform(0.3, PI - 0.3) + (PI if rng.random() < 0.5 else 0.0)
    return BlochPoint(theta, phi)


# ------------- chart -------------

@pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
def test_initial_point(x):
    p = initial_bloch(x)
    assert p.theta == pytest.approx(2 * math.atan(math.sqrt(1 - x * x) / x), abs=1e-15)
    assert p.phi == 0.0


def test_chart_inverts_up_to_global_phase():
    p = BlochPoint(1.1, 4.0)
    psi = bloch_to_state(p).scaled(complex(math.cos(0.7), math.sin(0.7)))
    q = state_to_bloch(psi)
    assert q.theta == pytest.approx(p.theta, abs=1e-14)
    assert q.phi == pytest.approx(p.phi, abs=1e-14)


def test_poles_read_phi_zero():
    assert state_to_bloch(bloch_to_state(BlochPoint(0.0, 2.0))).phi == 0.0
    assert state_to_bloch(bloch_to_state(BlochPoint(PI, 2.0))).phi == 0.0


# ------------- vector fields -------------

@pytest.mark.parametrize("axis, h", [
    ("x", PauliHamiltonian(0.0, 1.0, 0.0, 0.0)),
    ("y", PauliHamiltonian(0.0, 0.0, 1.0, 0.0)),
    ("z", PauliHamiltonian(0.0, 0.0, 0.0, 1.0)),
])
def test_pauli_fields_match_schrodinger_flow(axis, h):
    p = BlochPoint(1.2, 0.8)
    psi = bloch_to_state(p)
    dt = 1e-6
    fwd = state_to_bloch(propagate_const(psi, h, dt))
    bwd = state_to_bloch(propagate_const(psi, -h, dt))

    v = pauli_field(axis, p)
    assert (fwd.theta - bwd.theta) / (2 * dt) == pytest.approx(v.d_theta, abs=1e-6)
    assert angle_diff(fwd.phi, bwd.phi) / (2 * dt) == pytest.approx(v.d_phi, abs=1e-6)


def test_pauli_field_rejects_poles_and_unknown_axis():
    with pytest.raises(PoleError):
        pauli_field("x", BlochPoint(1e-4, 1.0))
    with pytest.raises(PoleError):
        pauli_field("y", BlochPoint(PI - 1e-4, 1.0))
    assert pauli_field("z", BlochPoint(0.0, 1.0)).d_phi == 2.0
    with pytest.raises(ValueError):
        pauli_field("w", BlochPoint(1.0, 1.0))


@pytest.mark.parametrize("x", [0.1, 0.5, 0.8])
def test_problem_fields_are_images_of_hw_hs(x):
    p = BlochPoint(0.9, 2.3)
    h = grover_hamiltonians(x)
    fields = problem_fields(x, p)

    y_img = hamiltonian_field(h.hw, p)
    x_img = hamiltonian_field(h.hs, p)
    assert y_img.as_array() == pytest.approx(fields.Y.as_array(), abs=1e-14)
    assert x_img.as_array() == pytest.approx(fields.X.as_array(), abs=1e-14)
    assert (fields.f + fields.g).as_array() == pytest.approx(fields.Y.as_array(), abs=1e-15)
    assert (fields.f - fields.g).as_array() == pytest.approx(fields.X.as_array(), abs=1e-15)


@pytest.mark.parametrize("x", [0.05, 0.25, 0.5, 0.75])
def test_x_field_vanishes_at_initial_point(x):
    v = problem_fields(x, initial_bloch(x)).X
    assert abs(v.d_theta) < 1e-12
    assert abs(v.d_phi) < 1e-12


def test_reduced_rhs_bangs():
    x, p = 0.3, BlochPoint(1.4, 2.0)
    assert reduced_rhs(x, p, 1.0).as_array() == pytest.approx([0.0, 1.0], abs=1e-15)
    assert reduced_rhs(x, p, -1.0).as_array() == pytest.approx(problem_fields(x, p).X.as_array(), abs=1e-15)


# ------------- Lie brackets and the singular arc -------------

def test_bracket_decomposes_along_f_and_g():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = rng.uniform(0.05, 0.95)
        p = _random_point(rng)

        def f(q, x=x):
            return problem_fields(x, q).f

        def g(q, x=x):
            return problem_fields(x, q).g

        bracket = lie_bracket(f, g, p)
        alpha, beta = alpha_beta(x, p)
        expected = f(p).scaled(alpha) + g(p).scaled(beta)
        assert bracket.as_array() == pytest.approx(expected.as_array(), abs=1e-5)


def test_alpha_beta_pole():
    with pytest.raises(PoleError):
        alpha_beta(0.5, BlochPoint(1.0, 0.0))
    with pytest.raises(PoleError):
        alpha_beta(0.5, BlochPoint(1.0, PI))


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5])
def test_arc_points_have_zero_alpha(x):
    for phi in np.linspace(0.2, PI - 0.2, 9):
        theta = singular_arc_theta(float(phi), x)
        assert 0.0 < theta < PI
        assert abs(alpha_beta(x, BlochPoint(theta, float(phi)))[0]) < 1e-10


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5])
def test_singular_arc_is_fast(x):
    phis = np.concatenate([np.linspace(PI / 4, 3 * PI / 4, 10), np.linspace(5 * PI / 4, 7 * PI / 4, 10)])
    for phi in phis:
        p = BlochPoint(singular_arc_theta(float(phi), x), float(phi))
        arc = classify_arc(x, p)
        assert arc.l_y_alpha == pytest.approx(1 - x * x, abs=1e-5)
        assert arc.l_x_alpha == pytest.approx(-(1 - x * x), abs=1e-5)
        assert arc.kind is ArcKind.FAST
        assert arc.singular_u == pytest.approx(0.0, abs=1e-8)


def test_classify_arc_requires_arc_point():
    with pytest.raises(PreconditionError):
        classify_arc(0.5, BlochPoint(1.0, 1.0))


def test_singular_arc_samples():
    samples = singular_arc_samples(0.5, 5)
    assert [phi for phi, _ in samples] == pytest.approx([0.0, PI / 2, PI, 3 * PI / 2, 2 * PI])
    assert samples[1][1] == pytest.approx(PI / 2)


# ------------- reduced vs full dynamics -------------

def _in_band(theta: float) -> bool:
    return BAND < theta < PI - BAND


@pytest.mark.parametrize("name", ["singular", "bsb", "grover"])
def test_reduced_dynamics_match_projection(name):
    x, samples = 0.5, 200
    if name == "singular":
        protocol = singular_protocol(x)
    elif name == "bsb":
        opt = optimal_times(x)
        protocol = bang_singular_bang(opt.t1, opt.t2)
    else:
        protocol = grover_protocol(x)

    psi = initial_state(x)
    compared = 0
    for seg in protocol.segments:
        one = Protocol.from_pairs([(seg.duration, seg.u)])
        full = bloch_trajectory(evolve(psi, one, x, samples_per_segment=samples))
        psi = evolve(psi, one, x).final

        # longest prefix of the segment that stays inside the band
        m = 0
        while m < samples and _in_band(full[m + 1][1]) and _in_band(full[m][1]):
            m += 1
        if m == 0:
            continue

        start = BlochPoint(full[0][1], full[0][2])
        prefix = Protocol.from_pairs([(seg.duration * m / samples, seg.u)])
        reduced = integrate_reduced(x, prefix, start, samples_per_segment=m)
        for (t_f, th_f, ph_f), (t_r, th_r, ph_r) in zip(full[: m + 1], reduced):
            assert t_r == pytest.approx(t_f, abs=1e-12)
            assert abs(th_r - th_f) < 1e-6
            assert abs(angle_diff(ph_r, ph_f)) < 1e-6
        compared += m

    assert compared > 0


def test_reduced_integration_stops_at_pole():
    # the singular protocol ends on the target, theta = 0
    with pytest.raises(PoleError):
        integrate_reduced(0.5, singular_protocol(0.5))


def test_pauli_commutation_relations():
    rng = np.random.default_rng(5)

    def field(axis):
        return lambda q: pauli_field(axis, q)

    for _ in range(20):
        p = _random_point(rng)
        vx, vy, vz = (pauli_field(a, p) for a in "xyz")
        assert lie_bracket(field("z"), field("x"), p).as_array() == pytest.approx(vy.scaled(-2).as_array(), abs=1e-5)
        assert lie_bracket(field("y"), field("z"), p).as_array() == pytest.approx(vx.scaled(-2).as_array(), abs=1e-5)
        assert lie_bracket(field("x"), field("y"), p).as_array() == pytest.approx(vz.scaled(-2).as_array(), abs=1e-5)


def test_alpha_changes_sign_across_arc_point():
    eps = 0.01
    assert abs(alpha_beta(0.5, BlochPoint(PI / 2, PI / 2))[0]) < 1e-15
    assert alpha_beta(0.5, BlochPoint(PI / 2, PI / 2 + eps))[0] > 0
    assert alpha_beta(0.5, BlochPoint(PI / 2, PI / 2 - eps))[0] < 0


def test_chart_examples():
    q = bloch_to_state(BlochPoint(PI / 2, PI / 2))
    assert q.c0 == pytest.approx(1 / math.sqrt(2))
    assert q.c1 == pytest.approx(1j / math.sqrt(2))
    assert pauli_field("x", BlochPoint(PI / 2, PI / 2)).as_array() == pytest.approx([-2.0, 0.0], abs=1e-15)
    assert reduced_rhs(0.5, BlochPoint(PI / 2, PI / 2), -1.0).d_theta == pytest.approx(-math.sqrt(3) / 2)


def test_optimal_singular_segment_lies_on_arc():
    x = 0.5
    opt = optimal_times(x)
    bang = evolve(initial_state(x), Protocol.from_pairs([(opt.t1, 1.0)]), x).final
    singular = evolve(bang, Protocol.from_pairs([(opt.t2, 0.0)]), x, samples_per_segment=50)
    for s in singular.states:
        p = state_to_bloch(s)
        assert p.theta == pytest.approx(singular_arc_theta(p.phi, x), abs=1e-6)
