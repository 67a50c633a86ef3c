"""
Central configurations of the dihedral four-body problem and the
linearization of the collision-manifold flow at their restpoints.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .config import ANGLE_TOL
from .logger import setup_logger
from .potentials import (
    Homogeneity,
    NumericalError,
    SectionKind,
    SphereAngles,
    covariant_gradient,
    potential_derivatives,
    potential_section,
    potential_sphere,
    section_point,
)

logger = setup_logger("central_configs")


class RootFindError(NumericalError):
    pass


class CCKind(Enum):
    RECTANGULAR = "rectangular"
    TETRAHEDRAL = "tetrahedral"


@dataclass(frozen=True)
class ManifoldDimensions:
    stable: int
    unstable: int
    stable_parabolic: int
    unstable_parabolic: int

    def as_dict(self) -> dict:
        return {
            "stable": self.stable,
            "unstable": self.unstable,
            "stable_parabolic": self.stable_parabolic,
            "unstable_parabolic": self.unstable_parabolic,
        }


@dataclass(frozen=True)
class CentralConfiguration:
    kind: CCKind
    label: str
    angles: SphereAngles
    u_value: float
    vbar_pos: float
    lam: float
    section: SectionKind

    def unit(self) -> np.ndarray:
        return self.angles.to_unit()

    def signed(self, sign: int) -> str:
        return f"{self.label}{'+' if sign > 0 else '-'}"


@dataclass(frozen=True)
class LinearizationReport:
    lam: float
    vbar: float
    mu: Tuple[complex, complex]
    dims: ManifoldDimensions


# (dim W^s, dim W^u, dim W^s ∩ P, dim W^u ∩ P), read from the dimension table
_DIMENSION_TABLE = {
    (CCKind.RECTANGULAR, 1): ManifoldDimensions(3, 2, 3, 1),
    (CCKind.RECTANGULAR, -1): ManifoldDimensions(2, 3, 1, 3),
    (CCKind.TETRAHEDRAL, 1): ManifoldDimensions(2, 3, 2, 2),
    (CCKind.TETRAHEDRAL, -1): ManifoldDimensions(3, 2, 2, 2),
}


def manifold_dimensions(kind: CCKind, sign_vbar: int) -> ManifoldDimensions:
    return _DIMENSION_TABLE[(kind, 1 if sign_vbar > 0 else -1)]


def characteristic_exponents(h: Homogeneity, lam: float, vbar: float) -> Tuple[complex, complex]:
    """
    Roots of μ² + (1-β) v̄ μ - λ = 0, larger real part first.

    :param lam: second derivative of the section potential at the restpoint
    :param vbar: restpoint value of v (either sign)
    """
    if vbar == 0.0:
        raise ValueError("vbar must be non-zero at a restpoint")
    b = h.kappa * vbar
    root = cmath.sqrt(b * b + 4.0 * lam)
    mu1 = (-b + root) / 2.0
    mu2 = (-b - root) / 2.0
    if mu2.real > mu1.real:
        mu1, mu2 = mu2, mu1
    return complex(mu1), complex(mu2)


def companion_exponents(h: Homogeneity, lam: float, vbar: float) -> np.ndarray:
    """Eigenvalues of the 2x2 block [[0, 1], [λ, -(1-β)v̄]] acting on (δx, δy)."""
    block = np.array([[0.0, 1.0], [lam, -h.kappa * vbar]])
    return np.sort_complex(np.linalg.eigvals(block))[::-1]


def planar_vbar_closed(alpha: float) -> float:
    return math.sqrt(2.0 ** (1.0 - alpha) + 2.0 ** (2.0 - alpha / 2.0))


def tetra_vbar_closed(alpha: float) -> float:
    return math.sqrt(2.0 ** (1.0 - alpha) * 3.0 ** alpha * 6.0 ** (-alpha / 2.0)
                     + 4.0 ** (1.0 - alpha) * 3.0 ** (alpha / 2.0) * 2.0 ** (alpha / 2.0))


def vl_gap(h: Union[Homogeneity, float]) -> float:
    """Gap v⁺(planar) - v⁺(tetra); accepts α = 0."""
    alpha = h.alpha if isinstance(h, Homogeneity) else float(h)
    if not (0.0 <= alpha < 2.0):
        raise ValueError(f"alpha must lie in [0, 2), got {alpha}")
    return planar_vbar_closed(alpha) - tetra_vbar_closed(alpha)


def _section_root(section: SectionKind, h: Homogeneity, low: float, high: float) -> float:
    derivative = lambda x: potential_derivatives(section, h, x, 1)
    try:
        x = brentq(derivative, low, high, xtol=ANGLE_TOL, maxiter=200)
    except (ValueError, RuntimeError) as e:
        logger.error(f"Root finder failed on {section.value} section in [{low}, {high}]: {e}")
        raise RootFindError(f"No critical point of U_{section.value} in [{low}, {high}]") from e
    # Newton polish, accepted only when it does not increase |U'|
    for _ in range(3):
        step = derivative(x) / potential_derivatives(section, h, x, 2)
        candidate = x - step
        if abs(derivative(candidate)) > abs(derivative(x)):
            break
        x = candidate
        if abs(step) < ANGLE_TOL * 1e-3:
            break
    return x


def tetra_angle(h: Homogeneity) -> float:
    """Positive critical latitude of the tetrahedral section; sin² = 1/3 for every α."""
    return _section_root(SectionKind.TETRA, h, 1e-3, 1.5)


def planar_angle(h: Homogeneity) -> float:
    return _section_root(SectionKind.PLANAR, h, math.pi / 8, 3 * math.pi / 8)


_P2_ANGLES = [(math.pi / 2, math.pi / 4), (3 * math.pi / 2, math.pi / 4),
              (math.pi / 2, -math.pi / 4), (3 * math.pi / 2, -math.pi / 4)]
_P3_ANGLES = [(0.0, math.pi / 4), (math.pi, math.pi / 4),
              (0.0, -math.pi / 4), (math.pi, -math.pi / 4)]


def enumerate_ccs(h: Homogeneity) -> List[CentralConfiguration]:
    """
    All 20 central configurations: 12 squares (p_1k, p_2k, p_3k) and
    8 regular tetrahedra (e_k1, e_k2).
    """
    theta_pl = planar_angle(h)
    phi_t = tetra_angle(h)
    lam_pl = potential_derivatives(SectionKind.PLANAR, h, theta_pl, 2)
    lam_tet = potential_derivatives(SectionKind.TETRA, h, phi_t, 2)

    def make(kind, label, theta, phi, lam, section):
        angles = SphereAngles(theta, phi)
        u = potential_sphere(h, angles)
        return CentralConfiguration(kind, label, angles, u, math.sqrt(2.0 * u), lam, section)

    ccs = []
    for k in range(1, 5):
        theta = theta_pl + (k - 1) * math.pi / 2
        ccs.append(make(CCKind.RECTANGULAR, f"p1{k}", theta, 0.0, lam_pl, SectionKind.PLANAR))
    for k, (theta, phi) in enumerate(_P2_ANGLES, start=1):
        ccs.append(make(CCKind.RECTANGULAR, f"p2{k}", theta, phi, lam_pl, SectionKind.PLANAR))
    for k, (theta, phi) in enumerate(_P3_ANGLES, start=1):
        ccs.append(make(CCKind.RECTANGULAR, f"p3{k}", theta, phi, lam_pl, SectionKind.PLANAR))
    for k in range(1, 5):
        theta = (2 * k - 1) * math.pi / 4
        ccs.append(make(CCKind.TETRAHEDRAL, f"e{k}1", theta, phi_t, lam_tet, SectionKind.TETRA))
        ccs.append(make(CCKind.TETRAHEDRAL, f"e{k}2", theta, -phi_t, lam_tet, SectionKind.TETRA))

    for cc in ccs:
        residual = np.linalg.norm(covariant_gradient(h, cc.unit()))
        logger.debug(f"{cc.label}: theta={cc.angles.theta:.12g} phi={cc.angles.phi:.12g} |grad|={residual:.3e}")
    logger.info(f"Enumerated {len(ccs)} central configurations at alpha={h.alpha}")
    return ccs


def cc_by_label(ccs: List[CentralConfiguration], label: str) -> CentralConfiguration:
    for cc in ccs:
        if cc.label == label:
            return cc
    raise KeyError(f"No central configuration labelled '{label}'")


def nearest_cc(ccs: List[CentralConfiguration], s: np.ndarray) -> CentralConfiguration:
    s = np.asarray(s, dtype=float)
    return min(ccs, key=lambda cc: float(np.linalg.norm(cc.unit() - s)))


def vbar(h: Homogeneity, cc: CentralConfiguration) -> Tuple[float, float]:
    value = math.sqrt(2.0 * potential_sphere(h, cc.angles))
    return value, -value


def linearize(h: Homogeneity, cc: CentralConfiguration, sign: int) -> LinearizationReport:
    v = cc.vbar_pos if sign > 0 else -cc.vbar_pos
    mu = characteristic_exponents(h, cc.lam, v)
    return LinearizationReport(cc.lam, v, mu, manifold_dimensions(cc.kind, sign))


def section_restpoints(section: SectionKind, h: Homogeneity, low: float, high: float) -> List[float]:
    """Restpoint coordinates of the covering chart of a section inside [low, high]."""
    if section is SectionKind.PLANAR:
        base, spacing = [planar_angle(h)], math.pi / 2
    else:
        phi_t = tetra_angle(h)
        base, spacing = [-phi_t, 0.0, phi_t], math.pi
    points = []
    k = math.floor(low / spacing) - 1
    while k * spacing - spacing <= high:
        for b in base:
            x = b + k * spacing
            if low <= x <= high:
                points.append(x)
        k += 1
    return sorted(points)


def section_linearization(section: SectionKind, h: Homogeneity, x: float, sign: int) -> Tuple[float, float, Tuple[complex, complex]]:
    """(λ, v̄, μ pair) of the section restpoint at covering coordinate x."""
    lam = potential_derivatives(section, h, x, 2)
    v = math.copysign(math.sqrt(2.0 * potential_section(section, h, x)), sign)
    return lam, v, characteristic_exponents(h, lam, v)


def section_label(ccs: List[CentralConfiguration], section: SectionKind, x: float) -> str:
    return nearest_cc(ccs, section_point(section, x)).label


def cc_report(h: Homogeneity, ccs: Optional[List[CentralConfiguration]] = None) -> List[dict]:
    """Serializable report, one entry per configuration with both signs of v̄."""
    ccs = ccs if ccs is not None else enumerate_ccs(h)
    entries = []
    for cc in ccs:
        mu, dims = {}, {}
        for sign, key in ((1, "+"), (-1, "-")):
            report = linearize(h, cc, sign)
            mu[key] = [[m.real, m.imag] for m in report.mu]
            dims[key] = report.dims.as_dict()
        entries.append({
            "label": cc.label,
            "kind": cc.kind.value,
            "theta": cc.angles.theta,
            "phi": cc.angles.phi,
            "U": cc.u_value,
            "vbar": cc.vbar_pos,
            "lambda": cc.lam,
            "mu": mu,
            "dims": dims,
        })
    return entries
