import math

import numpy as np
import pytest

from src.potentials import (
    Homogeneity,
    HomogeneityError,
    SectionKind,
    SingularDirectionError,
    SphereAngles,
    CollisionError,
    fold,
    nearest_arm,
    arm_positions,
    potential_cartesian,
    potential_derivatives,
    potential_section,
    potential_sphere,
    potential_planar,
    potential_tetra,
    regularized_potential_planar,
    regularized_potential_tetra,
    regularized_potential,
    regularizing_factor,
    section_point,
)


@pytest.mark.parametrize("alpha", [0.0, 2.0, -1.0, 2.5])
def test_homogeneity_rejects_exponents_outside_open_interval(alpha):
    with pytest.raises(HomogeneityError):
        Homogeneity(alpha)


def test_homogeneity_beta_and_drift():
    h = Homogeneity(1.2)
    assert h.beta == pytest.approx(0.6)
    assert h.kappa == pytest.approx(0.4)
    assert Homogeneity.from_beta(0.25).alpha == pytest.approx(0.5)


@pytest.mark.parametrize("section", list(SectionKind))
@pytest.mark.parametrize("x", [0.3, 0.7, 1.2, 2.0, -0.4, 4.0])
def test_section_potential_is_the_orbit_sum_on_the_section(homogeneity, section, x):
    expected = potential_cartesian(homogeneity, section_point(section, x))
    assert potential_section(section, homogeneity, x) == pytest.approx(expected, rel=1e-12)


def test_cartesian_potential_is_homogeneous(homogeneity):
    q = np.array([0.8, 0.3, -0.5])
    scaled = potential_cartesian(homogeneity, 2.5 * q)
    assert scaled == pytest.approx(2.5 ** (-homogeneity.alpha) * potential_cartesian(homogeneity, q), rel=1e-12)


def test_sphere_potential_matches_cartesian(homogeneity):
    angles = SphereAngles(0.9, 0.35)
    assert potential_sphere(homogeneity, angles) == pytest.approx(
        potential_cartesian(homogeneity, angles.to_unit()), rel=1e-12)


def test_collision_configuration_raises(newton):
    with pytest.raises(CollisionError):
        potential_cartesian(newton, [0.0, 0.0, 1.0])


@pytest.mark.parametrize("section, arm", [(SectionKind.PLANAR, 0.0), (SectionKind.PLANAR, math.pi / 2),
                                          (SectionKind.TETRA, math.pi / 2)])
def test_section_potential_is_singular_at_arms(newton, section, arm):
    with pytest.raises(SingularDirectionError):
        potential_section(section, newton, arm)


@pytest.mark.parametrize("section", list(SectionKind))
@pytest.mark.parametrize("x", [0.4, 0.9, 1.3])
def test_analytic_derivatives_match_finite_differences(homogeneity, section, x):
    step = 1e-5
    u = lambda t: potential_section(section, homogeneity, t)
    first = (u(x + step) - u(x - step)) / (2 * step)
    second = (u(x + step) - 2 * u(x) + u(x - step)) / step ** 2
    assert potential_derivatives(section, homogeneity, x, 1) == pytest.approx(first, rel=1e-6, abs=1e-8)
    assert potential_derivatives(section, homogeneity, x, 2) == pytest.approx(second, rel=1e-4, abs=1e-5)


@pytest.mark.parametrize("section", list(SectionKind))
@pytest.mark.parametrize("x", [0.2, 0.8, 1.4, 2.5])
def test_regularized_potential_factors_the_section_potential(homogeneity, section, x):
    w, dw = regularized_potential(section, homogeneity, x)
    r, log_dr = regularizing_factor(section, homogeneity, x)
    assert w == pytest.approx(r * potential_section(section, homogeneity, x), rel=1e-12)
    step = 1e-6
    numeric = (regularized_potential(section, homogeneity, x + step)[0]
               - regularized_potential(section, homogeneity, x - step)[0]) / (2 * step)
    assert dw == pytest.approx(numeric, rel=1e-6, abs=1e-8)


def test_regularized_potential_is_finite_at_arms(homogeneity):
    w, _ = regularized_potential(SectionKind.PLANAR, homogeneity, math.pi / 2)
    assert w == pytest.approx(1.0)
    w, _ = regularized_potential(SectionKind.TETRA, homogeneity, math.pi / 2)
    assert w == pytest.approx(1.0)


def test_arm_helpers():
    assert nearest_arm(SectionKind.PLANAR, 1.4) == pytest.approx(math.pi / 2)
    assert nearest_arm(SectionKind.TETRA, -1.3) == pytest.approx(-math.pi / 2)
    assert arm_positions(SectionKind.PLANAR, -0.1, 3.2) == pytest.approx([0.0, math.pi / 2, math.pi])
    assert arm_positions(SectionKind.TETRA, -2.0, 2.0) == pytest.approx([-math.pi / 2, math.pi / 2])


@pytest.mark.parametrize("x, folded", [(3 * math.pi / 4, math.pi / 4), (7 * math.pi / 8, math.pi / 8),
                                       (math.pi / 3, math.pi / 3)])
def test_fold_planar(x, folded):
    assert fold(SectionKind.PLANAR, x) == pytest.approx(folded)


def test_fold_tetra_reflects_through_the_arm():
    assert fold(SectionKind.TETRA, math.pi - 0.3) == pytest.approx(0.3)
    assert fold(SectionKind.TETRA, -0.3) == pytest.approx(-0.3)


def test_sphere_angles_round_trip():
    angles = SphereAngles(2.0, -0.4)
    back = SphereAngles.from_unit(angles.to_unit())
    assert back.theta == pytest.approx(2.0)
    assert back.phi == pytest.approx(-0.4)


def test_restpoint_potential_values(newton):
    assert potential_planar(newton, math.pi / 4) == pytest.approx(0.5 + math.sqrt(2.0))
    phi1 = math.atan(1.0 / math.sqrt(2.0))
    assert potential_tetra(newton, phi1) == pytest.approx(0.75 * math.sqrt(6.0))


def test_explicit_regularized_forms(homogeneity):
    a, b = homogeneity.alpha, homogeneity.beta
    theta, phi = 0.6, 0.3
    s, c = math.sin(theta), math.cos(theta)
    w_pl, _ = regularized_potential_planar(homogeneity, theta)
    assert w_pl == pytest.approx(s ** a * c ** a + s ** a + c ** a)
    w_tet, _ = regularized_potential_tetra(homogeneity, phi)
    assert w_tet == pytest.approx(1.0 + 2.0 ** (1.0 + b) * math.cos(phi) ** a / (1.0 + math.sin(phi) ** 2) ** b)
