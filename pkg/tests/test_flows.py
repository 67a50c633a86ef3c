import math

import numpy as np
import pytest

from src.config import ABS_TOL, ANCHORED_ABS_TOL
from src.flows import (
    BoundaryError,
    EventKind,
    FullState,
    IntegratorConfig,
    SectionState,
    arm_proximity,
    arm_tail,
    constraint_rate,
    constraint_residual,
    full_energy,
    full_field,
    integrate,
    kepler_transit_angle,
    kepler_transit_check,
    manifold_state,
    mcgehee_transform,
    newton_from_mcgehee,
    oracle_deviation,
    parabolic_constraint,
    parabolic_constraint_rate,
    regularized_field,
    regularized_vs_section_deviation,
    section_embedding,
    section_restriction_deviation,
    vf_full,
    vf_projected,
    vf_regularized,
    v_crossing,
)
from src.potentials import Homogeneity, SectionKind, nearest_arm, potential_section


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75])
def test_kepler_transit_angle(beta):
    measured = kepler_transit_check(beta)
    assert abs(measured - math.pi / (1.0 - beta)) < 1e-6


def test_kepler_transit_rejects_degenerate_beta():
    with pytest.raises(ValueError):
        kepler_transit_angle(1.0)


def _random_manifold_states(section, h, count, seed):
    rng = np.random.default_rng(seed)
    low, high = (0.15, 1.42) if section is SectionKind.PLANAR else (-1.3, 1.3)
    states = []
    for _ in range(count):
        x = rng.uniform(low, high)
        vmax = math.sqrt(2.0 * potential_section(section, h, x))
        v = rng.uniform(-0.95, 0.95) * vmax
        states.append(manifold_state(section, h, x, v, 1 if rng.uniform() > 0.5 else -1))
    return states


@pytest.mark.parametrize("section", list(SectionKind))
def test_regularized_field_is_tangent_to_the_collision_manifold(homogeneity, section):
    for state in _random_manifold_states(section, homogeneity, 100, seed=7):
        assert abs(constraint_residual(section, homogeneity, state)) < 1e-12
        assert abs(constraint_rate(section, homogeneity, state)) < 1e-10


@pytest.mark.parametrize("section", list(SectionKind))
def test_energy_substitution_agrees_on_the_manifold(newton, section):
    for state in _random_manifold_states(section, newton, 20, seed=3):
        a = vf_regularized(section, newton, state, substituted=True)
        b = vf_regularized(section, newton, state, substituted=False)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def _run_through_arms(section, h, state, span):
    """Regularized run over `span`, continued through every arm it meets; returns (σ reached, worst residual)."""
    field = regularized_field(section, h)
    residual = lambda y: constraint_residual(section, h, SectionState(y[0], y[1], y[2]))
    away = IntegratorConfig().with_events([arm_proximity(section)])
    near_arm = IntegratorConfig(abs_tol=(ANCHORED_ABS_TOL, ABS_TOL, ANCHORED_ABS_TOL)).with_events(
        [arm_proximity(section)])
    sigma, anchor, worst = 0.0, None, 0.0
    for _ in range(5000):
        traj = integrate(field, state, away if anchor is None else near_arm, span - sigma,
                         residual=residual, t0=sigma, anchor=anchor)
        worst = max(worst, float(np.max(np.abs(traj.residuals))))
        sigma = float(traj.sigma[-1])
        if traj.status == "horizon":
            break
        x, v, u = traj.final_state
        arm = nearest_arm(section, x)
        state = manifold_state(section, h, 2.0 * arm - x, v + arm_tail(section, h, arm, v), 1 if u > 0 else -1)
        anchor = arm
    return sigma, worst


# planar orbits pass arms; the tetra start sits in the basin of the sink (0, +v̄)
@pytest.mark.parametrize("section, x0, fraction", [(SectionKind.PLANAR, 1.0, 0.0), (SectionKind.TETRA, 0.01, 0.995)])
def test_energy_relation_is_conserved_along_regularized_runs(newton, section, x0, fraction):
    v0 = fraction * math.sqrt(2.0 * potential_section(section, newton, x0))
    sigma, worst = _run_through_arms(section, newton, manifold_state(section, newton, x0, v0, 1), 50.0)
    assert sigma == pytest.approx(50.0)
    assert worst < 1e-8


def test_anchored_run_reports_original_coordinates(newton):
    arm = math.pi / 2
    state = manifold_state(SectionKind.PLANAR, newton, arm + 1e-6, -1.0, 1)
    config = IntegratorConfig(abs_tol=(ANCHORED_ABS_TOL, ABS_TOL, ANCHORED_ABS_TOL))
    field = regularized_field(SectionKind.PLANAR, newton)
    anchored = integrate(field, state, config, 0.2, anchor=arm)
    plain = integrate(field, state, config, 0.2)
    assert anchored.states[0] == pytest.approx(state.as_array(), abs=1e-15)
    assert anchored.final_state[0] > arm
    assert anchored.solution(0.1) == pytest.approx(plain.solution(0.1), rel=1e-3)
    residual = lambda y: constraint_residual(SectionKind.PLANAR, newton, SectionState(*y))
    assert abs(residual(anchored.final_state)) < 1e-9


def test_parabolic_constraint_rate_matches_directional_derivative(newton):
    s = np.array([0.6, 0.5, math.sqrt(1 - 0.61)])
    w = np.cross(s, [0.1, -0.3, 0.2])
    state = FullState(0.0, -0.7, s, w)
    field = vf_full(newton, state).as_array()
    y = state.as_array()
    step = 1e-6
    plus = parabolic_constraint(newton, FullState.from_array(y + step * field))
    minus = parabolic_constraint(newton, FullState.from_array(y - step * field))
    numeric = (plus - minus) / (2 * step)
    assert parabolic_constraint_rate(newton, state) == pytest.approx(numeric, rel=1e-5, abs=1e-7)


def test_mcgehee_transform_round_trip_and_energy(newton):
    q = np.array([1.0, 0.3, 0.2])
    p = np.array([0.1, 0.5, -0.2])
    state = mcgehee_transform(newton, q, p)
    q2, p2 = newton_from_mcgehee(newton, state)
    assert q2 == pytest.approx(q)
    assert p2 == pytest.approx(p)
    from src.potentials import potential_cartesian
    assert full_energy(newton, state) == pytest.approx(0.5 * p.dot(p) - potential_cartesian(newton, q))


def test_full_energy_undefined_on_collision_manifold(newton):
    with pytest.raises(ValueError):
        full_energy(newton, section_embedding(SectionKind.PLANAR, 0.7, -1.0, 0.2))


def test_reduced_newton_oracle_matches_mcgehee_flow(newton):
    deviation = oracle_deviation(newton, [1.0, 0.3, 0.2], [0.0, 0.5, 0.1], 0.5)
    assert deviation < 1e-6


@pytest.mark.parametrize("section, x0", [(SectionKind.PLANAR, math.pi / 3), (SectionKind.TETRA, 0.4)])
def test_sections_are_invariant_circles_of_the_full_flow(newton, section, x0):
    assert section_restriction_deviation(section, newton, x0, -1.0, 0.1, 0.3) < 1e-6


def test_regularized_flow_reproduces_the_section_flow(newton):
    state = manifold_state(SectionKind.PLANAR, newton, math.pi / 3, -1.0, 1)
    assert regularized_vs_section_deviation(SectionKind.PLANAR, newton, state, 0.2) < 1e-6


def test_projected_field_rejects_states_outside_the_graph(newton):
    vmax = math.sqrt(2.0 * potential_section(SectionKind.PLANAR, newton, 0.7))
    with pytest.raises(BoundaryError):
        vf_projected(SectionKind.PLANAR, newton, (0.7, vmax + 0.1), 1)
    dx, dv = vf_projected(SectionKind.PLANAR, newton, (0.7, 0.0), -1)
    assert dx < 0 < dv


def test_arm_tail_is_small_and_positive(homogeneity):
    tail = arm_tail(SectionKind.PLANAR, homogeneity, math.pi / 2, -1.0)
    assert 0.0 < tail < 0.1
    one_side = arm_tail(SectionKind.PLANAR, homogeneity, math.pi / 2, -1.0, sides=1)
    assert tail == pytest.approx(2 * one_side)


def test_integrate_records_events_and_status(newton):
    state = manifold_state(SectionKind.PLANAR, newton, math.pi / 4 + 0.05, -1.5, 1)
    config = IntegratorConfig().with_events([v_crossing(0.0), arm_proximity(SectionKind.PLANAR)])
    traj = integrate(regularized_field(SectionKind.PLANAR, newton), state, config, 100.0)
    assert traj.status == f"event:{EventKind.ARM_PROXIMITY.value}"
    assert traj.terminal_event().kind is EventKind.ARM_PROXIMITY


def test_integrate_rejects_non_positive_horizon(newton):
    with pytest.raises(ValueError):
        integrate(full_field(newton), np.zeros(8), IntegratorConfig(), 0.0)


SYMMETRIES = [
    (SectionKind.PLANAR, 1.0, lambda x, v, u: (math.pi / 2 - x, v, -u), 1),
    (SectionKind.PLANAR, 1.0, lambda x, v, u: (x, -v, -u), -1),
    (SectionKind.TETRA, 0.4, lambda x, v, u: (-x, v, -u), 1),
    (SectionKind.TETRA, 0.4, lambda x, v, u: (x, -v, -u), -1),
]


@pytest.mark.parametrize("section, x0, image, direction", SYMMETRIES)
def test_symmetry_images_are_trajectories(newton, section, x0, image, direction):
    field = regularized_field(section, newton)
    start = manifold_state(section, newton, x0, -0.3, 1)
    forward = integrate(field, start.as_array(), IntegratorConfig(), 0.3)
    mirrored = integrate(field, np.array(image(*start.as_array())), IntegratorConfig(), 0.3, direction)
    expected = np.array(image(*forward.final_state))
    assert np.max(np.abs(mirrored.final_state - expected)) < 1e-8
