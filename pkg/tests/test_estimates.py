import math

import pytest
from scipy.integrate import quad

from src.config import HOMOGENEOUS_LIMIT_ALPHA
from src.estimates import (
    DISPUTED,
    MATCH,
    ArcsinDomainError,
    QuadratureDomainError,
    QuadratureMismatchError,
    bound_j1,
    bound_j2,
    bound_sets,
    branch_sandwich,
    envelope_checks,
    homogeneous_monotonicity,
    kappa_one,
    kappa_one_root,
    planar_homogeneous_bounds,
    recursive_sine_bound,
    sqrt_affine_integral,
    sqrt_affine_quadrature,
    sqrt_power_integral,
    tetra_bounds,
    tetra_continuation_bound,
    tetra_escape_bound,
    tetra_recursion_angles,
    tetra_supercritical_bounds,
)
from src.potentials import Homogeneity

CONFIDENT = [
    "planar.newton.v1",
    "planar.newton.v2",
    "planar.newton.v_3pi8_lower",
    "planar.newton.v0",
    "planar.homogeneous.w1",
    "planar.homogeneous.w2",
    "planar.homogeneous.v_3pi8_lower",
    "planar.homogeneous.v_pi4",
    "planar.supercritical.w1",
    "planar.supercritical.w3",
    "planar.supercritical.k2",
    "tetra.newton.v1",
    "tetra.newton.v2",
    "tetra.newton.v_7pi16",
    "tetra.newton.v3",
    "tetra.newton.v_phi1",
    "tetra.newton.escape",
    "tetra.homogeneous.v2",
    "tetra.homogeneous.v_phi1",
    "tetra.homogeneous.recursion",
]


@pytest.fixture(scope="module")
def reports():
    return {r.name: r for r in bound_sets("all")}


def test_closed_form_with_vanishing_singular_part():
    assert sqrt_affine_quadrature(0.0, 4.0, 0.3) == pytest.approx(0.6)


@pytest.mark.parametrize("a, b, x", [(1.0, 1.0, 0.5), (1.11, 2.41, 0.785), (0.3, 5.0, 0.1)])
def test_closed_form_antiderivative_differentiates_back(a, b, x):
    step = 1e-6
    numeric = (sqrt_affine_quadrature(a, b, x + step) - sqrt_affine_quadrature(a, b, x - step)) / (2 * step)
    assert numeric == pytest.approx(math.sqrt(a / x + b), rel=1e-6)


def test_closed_form_requires_positive_b():
    with pytest.raises(QuadratureDomainError):
        sqrt_affine_quadrature(1.0, 0.0, 0.5)
    with pytest.raises(QuadratureDomainError):
        sqrt_affine_quadrature(1.0, -1.0, 0.5)


@pytest.mark.parametrize("a, b", [(1.0, 1.0), (1.11, 2.41)])
def test_power_quadrature_agrees_with_closed_form(a, b):
    assert sqrt_power_integral(a, b, 1.0, math.pi / 4) == pytest.approx(sqrt_affine_integral(a, b, math.pi / 4),
                                                                        rel=1e-9)


def test_power_quadrature_against_direct_integration():
    direct, _ = quad(lambda x: math.sqrt(2.0 * x ** -0.6 + 1.5), 0.0, 0.4)
    assert sqrt_power_integral(2.0, 1.5, 0.6, 0.4) == pytest.approx(direct, rel=1e-7)


def test_power_quadrature_domain():
    assert sqrt_power_integral(1.0, 1.0, 1.0, 0.0) == 0.0
    with pytest.raises(QuadratureDomainError):
        sqrt_power_integral(1.0, 1.0, 2.0, 0.5)
    with pytest.raises(QuadratureDomainError):
        sqrt_power_integral(0.1, -5.0, 1.0, 1.0)


def test_power_quadrature_is_checked_against_the_closed_form(monkeypatch):
    monkeypatch.setattr("src.estimates.sqrt_affine_integral", lambda a, b, x: 1.0)
    with pytest.raises(QuadratureMismatchError):
        sqrt_power_integral(1.0, 1.0, 1.0, math.pi / 4)


@pytest.mark.parametrize("name", CONFIDENT)
def test_recomputed_values_match_their_references(reports, name):
    report = reports[name]
    assert report.status == MATCH, f"{name}: {report.computed} vs {report.reference}"


def test_disputed_entries_carry_a_note(reports):
    disputed = [r for r in reports.values() if r.status == DISPUTED]
    assert disputed
    assert all(r.note for r in disputed)
    assert "printed arithmetic is inconsistent" in reports["planar.newton.v_pi4"].note


def test_report_serialization(reports):
    entry = reports["planar.newton.v1"].as_dict()
    assert set(entry) == {"name", "step", "direction", "alpha", "computed", "reference", "diff", "status", "note"}
    assert entry["step"] == "1a"


def test_sine_recursion_with_a_trivial_step():
    values = recursive_sine_bound(Homogeneity(1.0), [1.0], [0.5, 0.0], 0.0)
    assert values == pytest.approx([0.0, 2.0 * math.sin(0.25)])


def test_sine_recursion_rejects_inconsistent_coefficients():
    with pytest.raises(ArcsinDomainError):
        recursive_sine_bound(Homogeneity(1.0), [0.01], [0.5, 0.0], -1.0)
    with pytest.raises(ValueError):
        recursive_sine_bound(Homogeneity(1.0), [1.0, 1.0], [0.5, 0.0], 0.0)


def test_recursion_angles_run_through_zero():
    angles = tetra_recursion_angles()
    assert len(angles) == 37
    assert angles[12] == pytest.approx(0.0)
    assert angles[36] == pytest.approx(-2.0 * angles[0])


def test_tetra_recursion_stays_below_the_escape_bound():
    reports = {r.name: r for r in tetra_bounds(True)}
    assert reports["tetra.newton.recursion"].computed < -reports["tetra.newton.escape"].computed


def test_homogeneous_tetra_bounds_hold_uniformly_in_beta(reports):
    newton_v3 = reports["tetra.newton.v3"].computed
    homogeneous_v3 = reports["tetra.homogeneous.v3"]
    assert homogeneous_v3.computed <= newton_v3 + 1e-12
    assert tetra_continuation_bound(0.5, reports["tetra.newton.v2"].computed) == pytest.approx(newton_v3)
    v2 = reports["tetra.homogeneous.v2"].computed
    assert tetra_continuation_bound(HOMOGENEOUS_LIMIT_ALPHA / 2, v2) == pytest.approx(homogeneous_v3.computed)

    escape = reports["tetra.homogeneous.escape"].computed
    assert escape >= tetra_escape_bound(0.5) - 1e-12
    assert tetra_escape_bound(0.5) == pytest.approx(reports["tetra.newton.escape"].computed)
    assert tetra_escape_bound(1e-6) == pytest.approx(math.sqrt(1.5) * (math.pi / 2 - 5 * math.atan(2 ** -0.5) / 3),
                                                     rel=1e-4)
    assert escape < -reports["tetra.homogeneous.recursion"].computed


def test_bounds_are_increasing_in_beta():
    assert homogeneous_monotonicity(points=20) == {"j1": True, "j2": True}
    assert bound_j1(0.5) > bound_j1(0.25)
    assert bound_j2(0.5) > bound_j2(0.25)


def test_bound_window_is_ordered():
    for beta in (0.1, 0.3, 0.5):
        assert bound_j2(beta) < bound_j1(beta) < 0.0


def test_kappa_one_changes_sign_near_its_reference_root():
    root = kappa_one_root()
    assert root == pytest.approx(1.461, abs=5e-3)
    assert kappa_one(1.4) < 0.0 < kappa_one(1.6)


def test_homogeneous_grid_entries():
    reports = planar_homogeneous_bounds([0.3, 0.7])
    grid = [r for r in reports if "[" in r.name]
    assert len(grid) == 4
    assert all(r.status == MATCH for r in grid if r.name.startswith("planar.homogeneous.j1"))
    with pytest.raises(ValueError):
        planar_homogeneous_bounds([1.2])


def test_envelopes_hold():
    checks = envelope_checks(points=200)
    assert {c.name for c in checks} == {"planar.1a", "planar.1b", "tetra.1a", "tetra.1b"}
    for check in checks:
        assert check.holds, f"{check.name} worst margin {check.worst_margin}"


def test_supercritical_tetra_chain_duplicates_planar():
    reports = tetra_supercritical_bounds()
    assert all(r.name.startswith("tetra.supercritical.") for r in reports)
    assert all("duplicates" in r.note for r in reports)


def test_unknown_bound_set():
    with pytest.raises(KeyError):
        bound_sets("octahedral")


def test_traced_branches_lie_inside_their_windows():
    for report in branch_sandwich(1.0):
        assert report.holds, report.as_dict()
