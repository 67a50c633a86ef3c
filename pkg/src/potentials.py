"""
Dihedral D2 potential of the four-body problem in its four representations.

The reduced configuration q = (q1, q2, q3) is identified with (z, y),
z = q1 + i q2, y = q3. The D2 orbit of q gives the three mutual distances
|q - g q| for the non-identity elements ζ2, κ and ζ2κ.

Section potentials are written on the *covering* of each regularized
component, so they are valid for any real section coordinate:
    planar  x = θ, s = (cos θ, sin θ, 0)
    tetra   x = ψ, s = (cos ψ/√2, cos ψ/√2, sin ψ)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from .config import SINGULAR_GUARD
from .logger import setup_logger

logger = setup_logger("potentials")


class NumericalError(Exception):
    pass


class CollisionError(NumericalError):
    pass


class SingularDirectionError(NumericalError):
    pass


class HomogeneityError(ValueError):
    pass


class SectionKind(Enum):
    PLANAR = "planar"
    TETRA = "tetra"

    @classmethod
    def parse(cls, name: str) -> "SectionKind":
        try:
            return cls(name.lower())
        except ValueError as e:
            raise ValueError(f"Unknown section '{name}', expected planar or tetra") from e


@dataclass(frozen=True)
class Homogeneity:
    """Exponent pair (α, β = α/2) of the homogeneous potential."""
    alpha: float
    beta: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise HomogeneityError(f"alpha must lie in (0, 2), got {self.alpha}")
        object.__setattr__(self, "beta", self.alpha / 2.0)

    @property
    def kappa(self) -> float:
        # drift coefficient 1 - β of the collision-manifold flow
        return 1.0 - self.beta

    @classmethod
    def from_beta(cls, beta: float) -> "Homogeneity":
        return cls(2.0 * beta)


@dataclass(frozen=True)
class SphereAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (-math.pi / 2 < self.phi < math.pi / 2):
            raise SingularDirectionError(f"phi={self.phi} outside (-pi/2, pi/2)")
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))

    def to_unit(self) -> np.ndarray:
        c = math.cos(self.phi)
        return np.array([c * math.cos(self.theta), c * math.sin(self.theta), math.sin(self.phi)])

    @classmethod
    def from_unit(cls, s: np.ndarray) -> "SphereAngles":
        s = np.asarray(s, dtype=float)
        s = s / np.linalg.norm(s)
        return cls(math.atan2(s[1], s[0]), math.asin(max(-1.0, min(1.0, s[2]))))


def _pair_radii(q: np.ndarray) -> Tuple[float, float, float]:
    # half-distances |q - g q| / 2 for ζ2, κ, ζ2κ
    x1, x2, x3 = q
    return math.hypot(x1, x2), math.hypot(x2, x3), math.hypot(x1, x3)


def d2_orbit(q: np.ndarray) -> np.ndarray:
    """Images of q under the non-identity elements ζ2, κ, ζ2κ of D2."""
    x1, x2, x3 = np.asarray(q, dtype=float)
    return np.array([[-x1, -x2, x3], [x1, -x2, -x3], [-x1, x2, -x3]])


def potential_cartesian(h: Homogeneity, q) -> float:
    """
    Orbit-sum potential Σ |q - g q|^{-α}, homogeneous of degree -α.

    :param h: exponent pair
    :param q: reduced configuration (3-vector)
    :return: U(q)
    """
    q = np.asarray(q, dtype=float)
    distances = np.linalg.norm(q[None, :] - d2_orbit(q), axis=1)
    if np.any(distances < SINGULAR_GUARD):
        logger.error(f"Collision configuration q={q.tolist()}, distances={distances.tolist()}")
        raise CollisionError(f"Configuration {q.tolist()} lies on a collision set")
    return float(np.sum(distances ** (-h.alpha)))


def gradient_cartesian(h: Homogeneity, q) -> np.ndarray:
    """Euclidean gradient ∂U/∂q (unit mass metric)."""
    q = np.asarray(q, dtype=float)
    r1, r2, r3 = _pair_radii(q)
    if min(r1, r2, r3) < SINGULAR_GUARD / 2:
        raise CollisionError(f"Gradient requested on a collision set at {q.tolist()}")
    a = h.alpha
    x1, x2, x3 = q
    grad = (r1 ** (-a - 2)) * np.array([x1, x2, 0.0]) \
        + (r2 ** (-a - 2)) * np.array([0.0, x2, x3]) \
        + (r3 ** (-a - 2)) * np.array([x1, 0.0, x3])
    return -a * 2.0 ** (-a) * grad


def covariant_gradient(h: Homogeneity, s) -> np.ndarray:
    """Gradient of U restricted to the unit sphere at s: ∂U/∂q + αU s."""
    s = np.asarray(s, dtype=float)
    return gradient_cartesian(h, s) + h.alpha * potential_cartesian(h, s) * s


def potential_sphere(h: Homogeneity, a: SphereAngles) -> float:
    cphi = math.cos(a.phi)
    t2 = math.tan(a.phi) ** 2
    first = math.cos(a.theta) ** 2 + t2
    second = math.sin(a.theta) ** 2 + t2
    if cphi < SINGULAR_GUARD or min(first, second) < SINGULAR_GUARD:
        logger.error(f"Singular direction theta={a.theta}, phi={a.phi}")
        raise SingularDirectionError(f"Double-collision ray at theta={a.theta}, phi={a.phi}")
    b = h.alpha / 2.0
    return (2.0 * cphi) ** (-h.alpha) * (1.0 + first ** (-b) + second ** (-b))


def section_point(section: SectionKind, x: float) -> np.ndarray:
    """Unit vector on the shape sphere for a covering coordinate of the section."""
    if section is SectionKind.PLANAR:
        return np.array([math.cos(x), math.sin(x), 0.0])
    c = math.cos(x) / math.sqrt(2.0)
    return np.array([c, c, math.sin(x)])


def section_tangent(section: SectionKind, x: float) -> np.ndarray:
    """d s / d x; unit length in both sections."""
    if section is SectionKind.PLANAR:
        return np.array([-math.sin(x), math.cos(x), 0.0])
    c = -math.sin(x) / math.sqrt(2.0)
    return np.array([c, c, math.cos(x)])


def _check_section(section: SectionKind, x: float):
    s, c = math.sin(x), math.cos(x)
    if section is SectionKind.PLANAR:
        near = min(abs(s), abs(c))
    else:
        near = abs(c)
    if near < SINGULAR_GUARD:
        logger.error(f"{section.value} potential evaluated at arm x={x}")
        raise SingularDirectionError(f"{section.value} section is singular at x={x}")


def potential_section(section: SectionKind, h: Homogeneity, x: float) -> float:
    _check_section(section, x)
    a, b = h.alpha, h.beta
    s, c = math.sin(x), math.cos(x)
    if section is SectionKind.PLANAR:
        return 2.0 ** (-a) * (1.0 + abs(s) ** (-a) + abs(c) ** (-a))
    return (2.0 * abs(c)) ** (-a) + 2.0 ** (1.0 - b) * (1.0 + s * s) ** (-b)


def potential_planar(h: Homogeneity, theta: float) -> float:
    return potential_section(SectionKind.PLANAR, h, theta)


def potential_tetra(h: Homogeneity, phi: float) -> float:
    return potential_section(SectionKind.TETRA, h, phi)


def potential_derivatives(section: SectionKind, h: Homogeneity, x: float, order: int = 1) -> float:
    """
    Analytic derivative of the section potential.

    :param order: 0 returns U itself, 1 returns U', 2 returns U''
    """
    if order == 0:
        return potential_section(section, h, x)
    if order not in (1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    _check_section(section, x)
    a, b = h.alpha, h.beta
    s, c = math.sin(x), math.cos(x)
    if section is SectionKind.PLANAR:
        pre = a * 2.0 ** (-a)
        diff = abs(c) ** (-a - 2) - abs(s) ** (-a - 2)
        if order == 1:
            return pre * s * c * diff
        return pre * ((c * c - s * s) * diff
                      + (a + 2.0) * s * s * c * c * (abs(c) ** (-a - 4) + abs(s) ** (-a - 4)))

    ac = abs(c)
    p = 1.0 + s * s
    if order == 1:
        return a * 2.0 ** (-a) * s * c * ac ** (-a - 2) \
            - a * 2.0 ** (1.0 - b) * p ** (-b - 1) * s * c
    first = a * 2.0 ** (-a) * ((c * c - s * s) * ac ** (-a - 2) + (a + 2.0) * s * s * c * c * ac ** (-a - 4))
    second = a * 2.0 ** (1.0 - b) * p ** (-b - 2) * ((c * c - s * s) * p - 2.0 * (b + 1.0) * s * s * c * c)
    return first - second


def _signed_power(y: float, p: float) -> float:
    # sign(y)|y|^p, continuous at 0 for p > 0
    if y == 0.0:
        if p > 0:
            return 0.0
        return math.inf if p < 0 else 0.0
    return math.copysign(abs(y) ** p, y)


def regularized_potential_planar(h: Homogeneity, theta: float) -> Tuple[float, float]:
    """
    W_pl = |sin θ|^α |cos θ|^α + |sin θ|^α + |cos θ|^α and its derivative.
    W is finite at the arms; W' is infinite there for α < 1.
    """
    a = h.alpha
    s, c = math.sin(theta), math.cos(theta)
    ps, pc = abs(s) ** a, abs(c) ** a
    w = ps * pc + ps + pc
    with np.errstate(all="ignore"):
        dw = a * (c * (pc + 1.0) * _signed_power(s, a - 1.0) - s * (ps + 1.0) * _signed_power(c, a - 1.0))
    return w, dw


def regularized_potential_tetra(h: Homogeneity, phi: float) -> Tuple[float, float]:
    """W_tet = 1 + 2^{1+β}|cos φ|^α (1 + sin²φ)^{-β} and its derivative."""
    a, b = h.alpha, h.beta
    s, c = math.sin(phi), math.cos(phi)
    p = 1.0 + s * s
    w = 1.0 + 2.0 ** (1.0 + b) * abs(c) ** a * p ** (-b)
    dw = -(2.0 ** (2.0 + b)) * a * s * _signed_power(c, a - 1.0) * p ** (-b - 1.0)
    return w, dw


def regularized_potential(section: SectionKind, h: Homogeneity, x: float) -> Tuple[float, float]:
    if section is SectionKind.PLANAR:
        return regularized_potential_planar(h, x)
    return regularized_potential_tetra(h, x)


def regularizing_factor(section: SectionKind, h: Homogeneity, x: float) -> Tuple[float, float]:
    """
    R(x) with W = R·U, and its logarithmic derivative R'/R.
    planar R = |sin 2θ|^α, tetra R = |2 cos φ|^α.
    """
    a = h.alpha
    if section is SectionKind.PLANAR:
        s2, c2 = math.sin(2.0 * x), math.cos(2.0 * x)
        r = abs(s2) ** a
        log_dr = 2.0 * a * c2 / s2 if s2 != 0.0 else math.copysign(math.inf, c2)
        return r, log_dr
    c = math.cos(x)
    r = abs(2.0 * c) ** a
    log_dr = -a * math.tan(x) if c != 0.0 else -math.copysign(math.inf, math.sin(x))
    return r, log_dr


def arm_positions(section: SectionKind, low: float, high: float) -> list:
    """Arm coordinates of the covering chart inside [low, high]."""
    spacing = math.pi / 2 if section is SectionKind.PLANAR else math.pi
    offset = 0.0 if section is SectionKind.PLANAR else math.pi / 2
    k = math.ceil((low - offset) / spacing)
    arms = []
    while offset + k * spacing <= high:
        arms.append(offset + k * spacing)
        k += 1
    return arms


def nearest_arm(section: SectionKind, x: float) -> float:
    spacing = math.pi / 2 if section is SectionKind.PLANAR else math.pi
    offset = 0.0 if section is SectionKind.PLANAR else math.pi / 2
    return offset + round((x - offset) / spacing) * spacing


def fold(section: SectionKind, x: float) -> float:
    """Maps a covering coordinate to the fundamental interval of the section."""
    if section is SectionKind.PLANAR:
        r = x % math.pi
        return r if r <= math.pi / 2 else math.pi - r
    r = (x + math.pi / 2) % (2.0 * math.pi) - math.pi / 2
    return math.pi - r if r > math.pi / 2 else r
