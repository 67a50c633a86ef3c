"""
Recomputation of the pointwise estimate chains that bound the collision
branches of the planar and tetrahedral sections.

Every chain step is evaluated by its literal recipe: a majorant or
minorant of the projected one-form, integrated in closed form or by
Gauss-Kronrod quadrature, then compared against its reference value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .config import (
    BETA_GRID,
    ENVELOPE_GRID,
    HOMOGENEOUS_LIMIT_ALPHA,
    QUAD_ABS_TOL,
    QUAD_AGREEMENT,
    REPORT_TOLERANCE,
    THETA_C,
)
from .logger import setup_logger
from .potentials import Homogeneity, NumericalError, SectionKind, potential_section

logger = setup_logger("estimates")

MATCH = "MATCH"
DISPUTED = "DISPUTED"

# interval subdivision points used by the chains
SUBDIVISION_POINTS = {
    "3pi/8": 3 * math.pi / 8,
    "7pi/16": 7 * math.pi / 16,
    "49pi/100": 49 * math.pi / 100,
    "pi/8": math.pi / 8,
    "pi/16": math.pi / 16,
    "pi/100": math.pi / 100,
}

# v(π/8) fed into the last planar step; recomputed by branch tracing
PLANAR_V_PI8 = -0.3741
# v(π/2) fed into the last supercritical step
SUPERCRITICAL_V_PI2 = -1.1804


class QuadratureDomainError(NumericalError):
    pass


class ArcsinDomainError(NumericalError):
    pass


class QuadratureMismatchError(NumericalError):
    pass


@dataclass
class BoundReport:
    name: str
    step: str
    direction: str
    computed: float
    reference: float
    alpha: float
    status: str = MATCH
    note: str = ""

    @property
    def difference(self) -> float:
        return abs(self.computed - self.reference)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "step": self.step,
            "direction": self.direction,
            "alpha": self.alpha,
            "computed": self.computed,
            "reference": self.reference,
            "diff": self.difference,
            "status": self.status,
            "note": self.note,
        }


def _report(name: str, step: str, direction: str, computed: float, reference: float,
            alpha: float, note: str = "") -> BoundReport:
    report = BoundReport(name, step, direction, float(computed), reference, alpha)
    if report.difference > REPORT_TOLERANCE:
        report.status = DISPUTED
        report.note = note
        logger.warning(f"{name}: computed {computed:.6f}, reference {reference:.4f} -> DISPUTED ({note})")
    else:
        logger.debug(f"{name}: computed {computed:.6f}, reference {reference:.4f}")
    return report


# --- Quadrature ---

def sqrt_affine_quadrature(a: float, b: float, x: float) -> float:
    """
    Antiderivative of √(a/x + b):
    √(x(a+bx)) + a/(2√b)·log(2√b·√(x(a+bx)) + 2bx + a).
    """
    if b <= 0.0:
        raise QuadratureDomainError(f"closed-form quadrature needs b > 0, got b={b}")
    if a < 0.0 or x < 0.0:
        raise QuadratureDomainError(f"closed-form quadrature needs a, x >= 0, got a={a}, x={x}")
    if a == 0.0:
        return math.sqrt(b) * x
    root = math.sqrt(x * (a + b * x))
    sb = math.sqrt(b)
    return root + a / (2.0 * sb) * math.log(2.0 * sb * root + 2.0 * b * x + a)


def sqrt_affine_integral(a: float, b: float, x: float) -> float:
    """∫_0^x √(a/t + b) dt from the closed form."""
    return sqrt_affine_quadrature(a, b, x) - sqrt_affine_quadrature(a, b, 0.0)


def sqrt_power_integral(a: float, b: float, p: float, upper: float) -> float:
    """
    ∫_0^upper √(a·x^{-p} + b) dx for 0 <= p < 2 by adaptive quadrature.

    x = t^m with m = 2/(2-p) turns the integrand into m√(a + b·t^{2m-2}).
    """
    if not (0.0 <= p < 2.0):
        raise QuadratureDomainError(f"exponent p must lie in [0, 2), got {p}")
    if upper <= 0.0:
        return 0.0
    if a * upper ** (-p) + b < 0.0:
        raise QuadratureDomainError(f"radicand a·x^-p + b is negative at x={upper} (a={a}, b={b}, p={p})")
    m = 2.0 / (2.0 - p)

    def integrand(t):
        return m * math.sqrt(max(a + b * t ** (2.0 * m - 2.0), 0.0))

    try:
        value, error = quad(integrand, 0.0, upper ** (1.0 / m), epsabs=QUAD_ABS_TOL, limit=200)
    except (ValueError, ZeroDivisionError) as e:
        logger.error(f"Quadrature failed for a={a}, b={b}, p={p}: {e}")
        raise QuadratureDomainError(f"Quadrature failed: {e}") from e
    if p == 1.0 and b > 0.0 and a > 0.0:
        closed = sqrt_affine_integral(a, b, upper)
        if abs(closed - value) > QUAD_AGREEMENT * max(1.0, abs(closed)):
            logger.error(f"Closed form {closed:.12g} and quadrature {value:.12g} disagree (a={a}, b={b}, x={upper})")
            raise QuadratureMismatchError(f"closed form {closed:.12g} vs quadrature {value:.12g}")
    return value


def _sqrt_v2(section: SectionKind, alpha: float, x: float) -> float:
    return math.sqrt(2.0 * potential_section(section, Homogeneity(alpha), x))


def _g(phi: float, alpha: float = 1.0) -> float:
    return (phi / math.sin(phi)) ** alpha


def _h(theta: float, alpha: float = 1.0) -> float:
    return 1.0 + math.sin(theta) ** (-alpha)


def _m(phi: float) -> float:
    return 2.0 * math.sqrt(2.0) / math.sqrt(1.0 + math.sin(phi) ** 2)


def _sine_step(vtilde: float, angle: float, v_start: float) -> float:
    ratio = v_start / vtilde
    if abs(ratio) > 1.0:
        raise ArcsinDomainError(f"arcsin argument {ratio:.6g} outside [-1, 1]")
    return vtilde * math.sin(angle + math.asin(ratio))


# --- Planar, Newtonian ---

def planar_newton_bounds() -> List[BoundReport]:
    v_pi4 = -_sqrt_v2(SectionKind.PLANAR, 1.0, math.pi / 4)
    a1 = math.pi * math.sqrt(2.0) / 4.0
    a2 = 1.0 + math.sqrt(2.0)
    v1 = v_pi4 + 0.5 * sqrt_affine_integral(a1, a2, math.pi / 4)
    v2 = v_pi4 + 0.5 * sqrt_power_integral(1.0, 1.0 - 2.0 * math.sqrt(2.0), 1.0, math.pi / 8)

    a5 = _h(3 * math.pi / 8)
    a6 = _g(math.pi / 8)
    v_3pi8_upper = v1 + 0.5 * sqrt_affine_integral(a6, a5, math.pi / 8)
    v_pi4_upper = v1 + 0.5 * sqrt_affine_integral(_g(math.pi / 4), a2, math.pi / 4)
    v_3pi8_lower = v2 + 0.5 * sqrt_power_integral(1.0, 2.0 - v2 * v2, 1.0, math.pi / 8)
    vtilde = _sqrt_v2(SectionKind.PLANAR, 1.0, math.pi / 4)
    v0_lower = _sine_step(vtilde, 3 * math.pi / 16, v_3pi8_lower)

    return [
        _report("planar.newton.v1", "1a", "upper", v1, -0.8014, 1.0),
        _report("planar.newton.v2", "1b", "lower", v2, -1.4164, 1.0),
        _report("planar.newton.v_3pi8", "1c", "upper", v_3pi8_upper, -0.0903, 1.0),
        _report("planar.newton.v_pi4", "1d", "upper", v_pi4_upper, -0.5630, 1.0,
                "printed arithmetic is inconsistent: v1 + 0.7445 = -0.0569, not -0.5630; computed follows the recipe"),
        _report("planar.newton.v_3pi8_lower", "1e", "lower", v_3pi8_lower, -0.7900, 1.0),
        _report("planar.newton.v0", "1f", "lower", v0_lower, 0.3376, 1.0),
    ]


# --- Planar, homogeneous ---

def bound_j1(beta: float) -> float:
    """Upper bound on v(π/2) for α = 2β, increasing in β."""
    b1 = (math.pi * math.sqrt(2.0) / 4.0) ** (2.0 * beta)
    b2 = 1.0 + 2.0 ** beta
    start = -(2.0 ** (0.5 - beta)) * math.sqrt(1.0 + 2.0 ** (beta + 1.0))
    return start + 2.0 ** (-0.5 - beta) * sqrt_power_integral(b1, b2, 2.0 * beta, math.pi / 4)


def bound_j2(beta: float) -> float:
    """Lower bound on v(π/2) for α = 2β, increasing in β."""
    start = -_sqrt_v2(SectionKind.PLANAR, 2.0 * beta, 3 * math.pi / 8)
    return start + 2.0 ** (-0.5 - beta) * sqrt_power_integral(1.0, 1.0 - 2.0 ** (beta + 1.0),
                                                              2.0 * beta, math.pi / 8)


def _half_prefactor_step(start: float, beta: float, interval: float, theta_h: float, phi_g: float) -> float:
    alpha = 2.0 * beta
    integral = sqrt_power_integral(_g(phi_g, alpha), _h(theta_h, alpha), 2.0 * beta, interval)
    return start + 0.5 * 2.0 ** (-0.5 - beta) * integral


def homogeneous_monotonicity(points: int = 50) -> Dict[str, bool]:
    """Strict increase of 𝔧₁ and 𝔧₂ on a β grid in (0, ½]."""
    betas = np.linspace(0.01, 0.5, points)
    result = {}
    for name, fn in (("j1", bound_j1), ("j2", bound_j2)):
        values = [fn(float(b)) for b in betas]
        result[name] = all(y > x for x, y in zip(values, values[1:]))
        if not result[name]:
            logger.warning(f"{name} is not increasing on the beta grid")
    return result


def planar_homogeneous_bounds(alpha_grid: Optional[Sequence[float]] = None) -> List[BoundReport]:
    """
    Chain for α ∈ (0, 1), evaluated at its supremum β = ½. `alpha_grid`
    adds the pointwise 𝔧₁, 𝔧₂ values at each α as informational entries.
    """
    w1 = bound_j1(0.5)
    w2 = bound_j2(0.5)
    reports = [
        _report("planar.homogeneous.w1", "1a", "upper", w1, -0.8013, 1.0),
        _report("planar.homogeneous.w2", "1b", "lower", w2, -1.6267, 1.0),
        _report("planar.homogeneous.v_3pi8", "1c", "upper",
                _half_prefactor_step(w1, 0.5, math.pi / 8, 3 * math.pi / 8, math.pi / 8), -0.0902, 1.0,
                "reference value matches the step without its outer factor 1/2"),
        _report("planar.homogeneous.v_3pi8_lower", "1d", "lower",
                w2 + 0.5 * sqrt_power_integral(1.0, 2.0 - w2 * w2, 1.0, math.pi / 8), -1.0276, 1.0),
        _report("planar.homogeneous.v_pi4", "1e", "upper",
                _half_prefactor_step(w1, 0.5, math.pi / 4, math.pi / 4, math.pi / 4), -0.2237, 1.0),
        _report("planar.homogeneous.v0", "1f", "lower",
                _sine_step(_sqrt_v2(SectionKind.PLANAR, 1.0, math.pi / 8), math.pi / 16, PLANAR_V_PI8),
                0.3810, 1.0, "v(pi/8) = -0.3741 enters without a derivation; see the traced value"),
    ]
    monotone = homogeneous_monotonicity()
    for name, ok in monotone.items():
        reports.append(BoundReport(f"planar.homogeneous.{name}_increasing", "1a" if name == "j1" else "1b",
                                   "value", float(ok), 1.0, 1.0, MATCH if ok else DISPUTED))
    for alpha in alpha_grid or ():
        if not (0.0 < alpha < 1.0):
            raise ValueError(f"alpha grid entries must lie in (0, 1), got {alpha}")
        beta = alpha / 2.0
        reports.append(BoundReport(f"planar.homogeneous.j1[{alpha:g}]", "1a", "upper", bound_j1(beta), w1, alpha,
                                   MATCH if bound_j1(beta) <= w1 else DISPUTED))
        reports.append(BoundReport(f"planar.homogeneous.j2[{alpha:g}]", "1b", "lower", bound_j2(beta), w2, alpha,
                                   MATCH if bound_j2(beta) >= w2 - REPORT_TOLERANCE else DISPUTED))
    return reports


# --- Planar, supercritical ---

def kappa_one(alpha: float) -> float:
    return bound_j1(alpha / 2.0)


def kappa_two(alpha: float) -> float:
    return bound_j2(alpha / 2.0)


def kappa_one_root(bracket=(1.4, 1.6)) -> float:
    """Zero of 𝔨₁: below it the upper bound on v(π/2) stays negative."""
    try:
        return brentq(kappa_one, *bracket, xtol=1e-10)
    except ValueError as e:
        logger.error(f"kappa_one has no sign change on {bracket}: {e}")
        raise NumericalError(f"kappa_one has no sign change on {bracket}") from e


def planar_supercritical_bounds(alpha: float = 1.1) -> List[BoundReport]:
    """
    Chain for α slightly above 1, with the bracket facts for the 𝔨
    functions. `alpha` is the exponent the intermediate steps use.
    """
    beta = alpha / 2.0
    w1 = kappa_one(1.4)
    w2 = bound_j2(0.5)
    w3 = bound_j2(0.55)
    root = kappa_one_root()
    k1 = kappa_one(alpha)

    step_1b = _half_prefactor_step(-0.1659, beta, math.pi / 100, 49 * math.pi / 100, math.pi / 100)
    lower = w2 + 0.5 * sqrt_power_integral(2.0 ** (1.0 - alpha), 2.0 ** (2.0 - alpha) - w2 * w2,
                                           alpha, math.pi / 100)
    upper_pi4 = _half_prefactor_step(k1, beta, math.pi / 4, math.pi / 4, math.pi / 4)
    v0_from_pi8 = _sine_step(_sqrt_v2(SectionKind.PLANAR, alpha, math.pi / 8), math.pi / 16, PLANAR_V_PI8)
    v0_from_pi4 = _sine_step(_sqrt_v2(SectionKind.PLANAR, alpha, math.pi / 4), 3 * math.pi / 25,
                             SUPERCRITICAL_V_PI2)

    return [
        _report("planar.supercritical.w1", "1a", "upper", w1, -0.1659, 1.4),
        BoundReport("planar.supercritical.k1_root", "1a", "value", root, 1.46136, 1.4,
                    MATCH if 1.4 < root < 1.6 else DISPUTED,
                    "zero of kappa_one; the validity bracket ends at the reference value"),
        _report("planar.supercritical.w2", "1b", "lower", w2, -1.6267, 1.0),
        _report("planar.supercritical.w3", "1b", "lower", w3, -1.5285, 1.1),
        _report("planar.supercritical.v_49pi100", "1b", "upper", step_1b, -0.0057, alpha,
                "same majorant as the homogeneous step; the reference value is not reproduced"),
        _report("planar.supercritical.v_pi2_lower", "1c", "lower", lower, -1.1804, alpha,
                "reference value not reproduced by the printed minorant"),
        _report("planar.supercritical.v_pi4", "1d", "upper", upper_pi4, -0.0713, alpha),
        _report("planar.supercritical.v0_pi8", "1e", "lower", v0_from_pi8, 0.4948, alpha,
                "v(pi/8) = -0.3741 reused from the subcritical chain"),
        _report("planar.supercritical.v0_pi4", "1f", "lower", v0_from_pi4, 0.0511, alpha,
                "sine step with the reference value of v(pi/2) as input"),
        _report("planar.supercritical.k2", "2", "value", kappa_two(1.7), 0.1055, 1.7),
    ]


# --- Tetrahedral ---

def tetra_recursion_angles(steps: int = 36, divisions: int = 12, phi1: float = THETA_C) -> List[float]:
    """φ̃ₙ = (divisions - n)·φ₁/divisions for n = 0..steps."""
    return [(divisions - n) * phi1 / divisions for n in range(steps + 1)]


def tetra_recursion_coefficients(h: Homogeneity, angles: Sequence[float]) -> List[float]:
    """𝔞ₙ = max of U_tet/2 over the endpoints of [φ̃ₙ, φ̃ₙ₋₁]; U_tet is monotone on each piece."""
    half = [potential_section(SectionKind.TETRA, h, phi) / 2.0 for phi in angles]
    return [max(half[n - 1], half[n]) for n in range(1, len(angles))]


def recursive_sine_bound(h: Homogeneity, a_sequence: Sequence[float], phi_sequence: Sequence[float],
                         v0: float) -> List[float]:
    """
    vₙ <= 2√𝔞ₙ·sin(½|Δφₙ| + arcsin(vₙ₋₁ / 2√𝔞ₙ)), iterated from v0.

    :return: [v0, v1, ..., vN]
    """
    if len(a_sequence) != len(phi_sequence) - 1:
        raise ValueError("a_sequence needs one entry per subinterval of phi_sequence")
    values = [v0]
    for n, a in enumerate(a_sequence, start=1):
        amp = 2.0 * math.sqrt(a)
        arg = values[-1] / amp
        if abs(arg) > 1.0:
            logger.error(f"alpha={h.alpha}: step {n} has arcsin argument {arg:.6g}")
            raise ArcsinDomainError(f"step {n}: |v/(2 sqrt a)| = {abs(arg):.6g} > 1, inconsistent coefficient")
        delta = abs(phi_sequence[n] - phi_sequence[n - 1])
        values.append(amp * math.sin(0.5 * delta + math.asin(arg)))
    return values


def tetra_recursion_value(h: Homogeneity, index: int = 32) -> float:
    angles = tetra_recursion_angles()
    start = -math.sqrt(2.0 * potential_section(SectionKind.TETRA, h, angles[0]))
    values = recursive_sine_bound(h, tetra_recursion_coefficients(h, angles), angles, start)
    return values[index]


def _m_beta(beta: float, phi: float) -> float:
    """2^{1+β}(1 + sin²φ)^{-β}; equals _m at β = 1/2."""
    return 2.0 ** (1.0 + beta) * (1.0 + math.sin(phi) ** 2) ** (-beta)


def tetra_escape_bound(beta: float) -> float:
    """Upper bound on the v increment between -5φ₁/3 and the arm at -π/2."""
    gap = math.pi / 2 - 5 * THETA_C / 3
    return 2.0 ** (-beta - 0.5) * sqrt_power_integral(_g(gap, 2 * beta), _m_beta(beta, -5 * THETA_C / 3),
                                                     2 * beta, gap)


def tetra_continuation_bound(beta: float, v2: float) -> float:
    """Lower bound on v(7π/16) for the continued right branch, started from v2 at the arm."""
    return v2 + 2.0 ** (-beta - 0.5) * sqrt_power_integral(1.0, 2.0 - v2 * v2 * 2.0 ** (2 * beta - 1.0),
                                                           2 * beta, math.pi / 16)


def _beta_grid(points: int = BETA_GRID) -> np.ndarray:
    return np.linspace(HOMOGENEOUS_LIMIT_ALPHA / 2, 0.5, points)


def tetra_bounds(newtonian: bool = True) -> List[BoundReport]:
    phi1 = THETA_C
    vbar = _sqrt_v2(SectionKind.TETRA, 1.0, phi1)
    arm_gap = math.pi / 2 - phi1
    v1 = 0.5 * (-2.0 * vbar + sqrt_affine_integral(_g(arm_gap), _m(phi1), arm_gap))
    v2 = -vbar + 0.5 * sqrt_power_integral(1.0, 2.0 - vbar * vbar, 1.0, math.pi / 16)
    v_7pi16 = v1 + 0.5 * sqrt_affine_integral(_g(math.pi / 16), _m(7 * math.pi / 16), math.pi / 16)

    if newtonian:
        v3 = tetra_continuation_bound(0.5, v2)
        return [
            _report("tetra.newton.v1", "1a", "upper", v1, -0.5727, 1.0),
            _report("tetra.newton.v2", "1b", "lower", v2, -1.4994, 1.0),
            _report("tetra.newton.v_7pi16", "1c", "upper", v_7pi16, -0.1004, 1.0),
            _report("tetra.newton.v3", "1d", "lower", v3, -1.0600, 1.0),
            _report("tetra.newton.v_phi1", "1e", "lower", _sine_step(vbar, 7 * math.pi / 32, v3), 0.1937, 1.0),
            _report("tetra.newton.recursion", "2", "upper", tetra_recursion_value(Homogeneity(1.0)), -1.1452, 1.0,
                    "endpoint-maximum coefficients give a different recursion value"),
            _report("tetra.newton.escape", "2", "upper", tetra_escape_bound(0.5), 0.8803, 1.0),
        ]

    # bounds that must hold for every beta in (0, 1/2]: worst case over the grid
    betas = _beta_grid()
    v3s = np.array([tetra_continuation_bound(b, v2) for b in betas])
    escapes = np.array([tetra_escape_bound(b) for b in betas])
    v3_beta, escape_beta = float(betas[np.argmin(v3s)]), float(betas[np.argmax(escapes)])
    # sine step at the beta -> 0 end, where v̄ = √6, started from the (1d) reference value
    vbar_limit = _sqrt_v2(SectionKind.TETRA, HOMOGENEOUS_LIMIT_ALPHA, phi1)
    limit = Homogeneity(HOMOGENEOUS_LIMIT_ALPHA)
    return [
        _report("tetra.homogeneous.v2", "1b", "lower", v2, -1.4993, 1.0),
        _report("tetra.homogeneous.v_7pi16", "1c", "upper", v_7pi16, -0.1004, 1.0),
        _report("tetra.homogeneous.v3", "1d", "lower", float(v3s.min()), -1.2078, 2 * v3_beta,
                f"minimum over beta in (0, 1/2] is {v3s.min():.4f} at beta = {v3_beta:.3g} and beta = 1/2 "
                f"gives {v3s[-1]:.4f}; the reference matches neither end"),
        _report("tetra.homogeneous.v_phi1", "1e", "lower", _sine_step(vbar_limit, 7 * math.pi / 32, -1.2078),
                0.4183, HOMOGENEOUS_LIMIT_ALPHA),
        _report("tetra.homogeneous.recursion", "2", "upper", tetra_recursion_value(limit), -1.6699,
                HOMOGENEOUS_LIMIT_ALPHA),
        _report("tetra.homogeneous.escape", "2", "upper", float(escapes.max()), 0.8721, 2 * escape_beta,
                f"supremum over beta in (0, 1/2] is {escapes.max():.4f} at beta = {escape_beta:.3g}; the reference "
                f"lies below it, both stay under the recursion bound"),
    ]


def tetra_supercritical_bounds(alpha: float = 1.1) -> List[BoundReport]:
    """
    The supercritical tetrahedral chain carries the planar chain verbatim
    (same angle, same potential, same constants); reported as such.
    """
    note = "duplicates the planar supercritical chain"
    reports = []
    for r in planar_supercritical_bounds(alpha):
        copy = replace(r, name=r.name.replace("planar.", "tetra."), note=f"{r.note}; {note}" if r.note else note)
        reports.append(copy)
    logger.warning(f"tetra supercritical chain: {note}")
    return reports


# --- Envelopes ---

@dataclass
class EnvelopeCheck:
    name: str
    kind: str
    holds: bool
    worst_margin: float


def _envelope(name: str, kind: str, bound: Callable, exact: Callable, upper: float,
              points: int) -> EnvelopeCheck:
    xs = np.linspace(upper / points, upper, points)
    margins = np.array([bound(x) - exact(x) for x in xs])
    if kind == "minorant":
        margins = -margins
    worst = float(margins.min())
    holds = worst >= -1e-12
    if not holds:
        logger.warning(f"{name}: {kind} violated by {-worst:.3e}")
    return EnvelopeCheck(name, kind, holds, worst)


def envelope_checks(points: int = ENVELOPE_GRID) -> List[EnvelopeCheck]:
    """
    Majorant >= integrand >= minorant on a uniform grid of each step's
    interval, in the local arm coordinate Φ = π/2 - x.
    """
    planar = lambda phi: 2.0 * potential_section(SectionKind.PLANAR, Homogeneity(1.0), math.pi / 2 - phi)
    tetra = lambda phi: 2.0 * potential_section(SectionKind.TETRA, Homogeneity(1.0), math.pi / 2 - phi)
    v_pi4_sq = planar(math.pi / 4)
    phi1 = THETA_C
    vbar_sq = tetra(math.pi / 2 - phi1)
    a1, a2 = math.pi * math.sqrt(2.0) / 4.0, 1.0 + math.sqrt(2.0)
    arm_gap = math.pi / 2 - phi1
    return [
        _envelope("planar.1a", "majorant", lambda p: 0.5 * math.sqrt(a1 / p + a2),
                  lambda p: 0.5 * math.sqrt(planar(p)), math.pi / 4, points),
        _envelope("planar.1b", "minorant", lambda p: 0.5 * math.sqrt(1.0 / p + 1.0 - 2.0 * math.sqrt(2.0)),
                  lambda p: 0.5 * math.sqrt(planar(p) - v_pi4_sq), math.pi / 8, points),
        _envelope("tetra.1a", "majorant", lambda p: 0.5 * math.sqrt(_g(arm_gap) / p + _m(phi1)),
                  lambda p: 0.5 * math.sqrt(tetra(p)), arm_gap, points),
        _envelope("tetra.1b", "minorant", lambda p: 0.5 * math.sqrt(max(1.0 / p + 2.0 - vbar_sq, 0.0)),
                  lambda p: 0.5 * math.sqrt(tetra(p) - vbar_sq), math.pi / 16, points),
    ]


# --- Traced comparisons ---

@dataclass
class SandwichReport:
    section: str
    alpha: float
    lower: float
    traced: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.traced <= self.upper

    def as_dict(self) -> dict:
        return {"section": self.section, "alpha": self.alpha, "lower": self.lower,
                "traced": self.traced, "upper": self.upper, "holds": self.holds}


def _first_arm_value(section: SectionKind, alpha: float, label: str) -> float:
    from .connections import Side, Stability, make_branch, trace_branch

    h = Homogeneity(alpha)
    outcome = trace_branch(h, make_branch(section, h, label, -1, Stability.UNSTABLE, Side.RIGHT))
    if not outcome.arm_crossings:
        raise NumericalError(f"{label}- right branch never reached an arm at alpha={alpha}")
    return outcome.arm_crossings[0].v


def branch_sandwich(alpha: float = 1.0) -> List[SandwichReport]:
    """Traced v at the first arm of the right W^u(c-) branches against their bound windows."""
    if abs(alpha - 1.0) < 1e-12:
        newton = planar_newton_bounds()
        planar_window = (newton[1].computed, newton[0].computed)
    elif 0.0 < alpha < 1.0:
        planar_window = (bound_j2(alpha / 2.0), bound_j1(alpha / 2.0))
    else:
        planar_window = (bound_j2(alpha / 2.0), kappa_one(alpha))
    reports = [SandwichReport("planar", alpha, planar_window[0],
                              _first_arm_value(SectionKind.PLANAR, alpha, "p11"), planar_window[1])]
    if abs(alpha - 1.0) < 1e-12:
        tetra = tetra_bounds(True)
        reports.append(SandwichReport("tetra", alpha, tetra[1].computed,
                                      _first_arm_value(SectionKind.TETRA, alpha, "e11"), tetra[0].computed))
    for r in reports:
        (logger.info if r.holds else logger.warning)(
            f"{r.section} alpha={alpha}: {r.lower:.4f} <= {r.traced:.6f} <= {r.upper:.4f} -> {r.holds}")
    return reports


def traced_inputs() -> List[BoundReport]:
    """v(π/8) on the continued right branch, the value fed into the last planar steps."""
    from .connections import Side, Stability, branch_value_at, make_branch, trace_branch

    reports = []
    for alpha in (1.0, 1.1):
        h = Homogeneity(alpha)
        outcome = trace_branch(h, make_branch(SectionKind.PLANAR, h, "p11", -1, Stability.UNSTABLE, Side.RIGHT))
        value = branch_value_at(outcome, math.pi - math.pi / 8)
        if value is None:
            raise NumericalError(f"branch never reached the angle pi/8 after its arm passage at alpha={alpha}")
        reports.append(_report(f"planar.traced.v_pi8[{alpha:g}]", "1f", "value", value, PLANAR_V_PI8, alpha,
                               "traced value differs from the constant used in the sine step"))
    return reports


BOUND_SETS: Dict[str, Callable[[], List[BoundReport]]] = {
    "planar-newton": planar_newton_bounds,
    "planar-homogeneous": planar_homogeneous_bounds,
    "planar-supercritical": planar_supercritical_bounds,
    "tetra-newton": lambda: tetra_bounds(True),
    "tetra-homogeneous": lambda: tetra_bounds(False),
    "tetra-supercritical": tetra_supercritical_bounds,
}


def bound_sets(name: str = "all", traced: bool = False) -> List[BoundReport]:
    """Reports of one named chain, or of every chain for "all"."""
    if name == "all":
        names = list(BOUND_SETS)
    elif name in BOUND_SETS:
        names = [name]
    else:
        raise KeyError(f"Unknown bound set '{name}', expected one of {['all'] + list(BOUND_SETS)}")
    reports = [r for n in names for r in BOUND_SETS[n]()]
    if traced:
        reports.extend(traced_inputs())
    disputed = sum(1 for r in reports if r.status == DISPUTED)
    logger.info(f"{len(reports)} bound reports, {disputed} disputed")
    return reports
