"""
Vector fields of the McGehee-blown-up dihedral problem and the adaptive
integrator that drives them.

Three levels are modelled:
  * the full McGehee system (ρ, v, s, w) in τ-time,
  * the one-degree-of-freedom section flows, both in τ-time (x, v, y)
    and regularized in σ-time (x, v, u) with u = yR/√W, dτ = (R/√W) dσ,
  * the projected parabolic flow in the (x, v) plane.

Integration is delegated to scipy's embedded Runge-Kutta pair with dense
output; events are located on the dense output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad, solve_ivp

from .config import (
    ABS_TOL,
    ARM_PROXIMITY,
    BOUNDARY_MARGIN,
    CONSTRAINT_FACTOR,
    INTEGRATOR_METHOD,
    MAX_STEP,
    QUAD_ABS_TOL,
    REL_TOL,
)
from .logger import setup_logger
from .potentials import (
    Homogeneity,
    NumericalError,
    SectionKind,
    covariant_gradient,
    gradient_cartesian,
    nearest_arm,
    potential_cartesian,
    potential_derivatives,
    potential_section,
    regularized_potential,
    regularizing_factor,
    section_point,
    section_tangent,
)

logger = setup_logger("flows")


class IntegrationError(NumericalError):
    pass


class CloseEncounterError(IntegrationError):
    pass


class BoundaryError(NumericalError):
    pass


class ConstraintViolationError(NumericalError):
    pass


class EventKind(Enum):
    ARM_PROXIMITY = "arm_proximity"
    V_ZERO = "v_zero"
    V_LEVEL = "v_level"
    CAPTURE = "capture"
    CLOSE_ENCOUNTER = "close_encounter"
    TRANSIT = "transit"


@dataclass(frozen=True)
class SectionState:
    x: float
    v: float
    u: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.v, self.u])

    @classmethod
    def from_array(cls, y) -> "SectionState":
        return cls(float(y[0]), float(y[1]), float(y[2]))


@dataclass(frozen=True)
class FullState:
    rho: float
    v: float
    s: np.ndarray
    w: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.rho, self.v], np.asarray(self.s, float), np.asarray(self.w, float)))

    @classmethod
    def from_array(cls, y) -> "FullState":
        y = np.asarray(y, dtype=float)
        return cls(float(y[0]), float(y[1]), y[2:5].copy(), y[5:8].copy())


@dataclass
class EventSpec:
    kind: EventKind
    func: Callable[[float, np.ndarray], float]
    terminal: bool = False
    direction: float = 0.0

    def as_scipy(self, offset: Optional[np.ndarray] = None):
        if offset is None:
            def event(t, y):
                return self.func(t, y)
        else:
            def event(t, y):
                return self.func(t, y + offset)
        event.terminal = self.terminal
        event.direction = self.direction
        return event


@dataclass
class IntegratorConfig:
    rel_tol: float = REL_TOL
    abs_tol: Union[float, Tuple[float, ...]] = ABS_TOL
    max_step: float = MAX_STEP
    events: Sequence[EventSpec] = ()
    method: str = INTEGRATOR_METHOD

    def __post_init__(self):
        if self.rel_tol <= 0 or np.any(np.asarray(self.abs_tol) <= 0) or self.max_step <= 0:
            raise ValueError("Integrator tolerances and max_step must be positive")

    def with_events(self, events: Sequence[EventSpec]) -> "IntegratorConfig":
        return IntegratorConfig(self.rel_tol, self.abs_tol, self.max_step, tuple(events), self.method)


@dataclass
class TrajectoryEvent:
    sigma: float
    kind: EventKind
    state: np.ndarray


@dataclass
class Trajectory:
    """
    Accepted integrator steps in integration order (σ decreasing for
    backward runs), located events, and the terminal status.
    """
    sigma: np.ndarray
    states: np.ndarray
    columns: Tuple[str, ...]
    events: List[TrajectoryEvent] = field(default_factory=list)
    status: str = "horizon"
    residuals: Optional[np.ndarray] = None
    solution: Optional[object] = None

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def terminal_event(self) -> Optional[TrajectoryEvent]:
        if not self.status.startswith("event:"):
            return None
        kind = self.status.split(":", 1)[1]
        hits = [e for e in self.events if e.kind.value == kind]
        return hits[-1] if hits else None


# --- Event constructors ---

def v_crossing(value: float = 0.0, index: int = 1, terminal: bool = False, direction: float = 0.0) -> EventSpec:
    kind = EventKind.V_ZERO if value == 0.0 else EventKind.V_LEVEL
    return EventSpec(kind, lambda t, y: y[index] - value, terminal, direction)


def arm_proximity(section: SectionKind, delta: float = ARM_PROXIMITY, index: int = 0) -> EventSpec:
    """Terminal event when the covering coordinate comes within `delta` of an arm."""
    def distance(t, y):
        return abs(y[index] - nearest_arm(section, y[index])) - delta
    return EventSpec(EventKind.ARM_PROXIMITY, distance, terminal=True, direction=-1.0)


# --- Integrator ---

class _AnchoredSolution:
    """Dense output of an anchored run, reported in the original coordinates."""

    def __init__(self, solution, offset: np.ndarray):
        self.solution = solution
        self.offset = offset

    def __call__(self, t):
        y = np.asarray(self.solution(t))
        return y + (self.offset if y.ndim == 1 else self.offset[:, None])


def integrate(field_fn: Callable, state0, config: IntegratorConfig, horizon: float,
              direction: int = 1, columns: Optional[Sequence[str]] = None,
              residual: Optional[Callable[[np.ndarray], float]] = None,
              residual_limit: Optional[float] = None, t0: float = 0.0,
              anchor: Optional[float] = None, anchor_index: int = 0) -> Trajectory:
    """
    Integrates `field_fn(t, y)` from `state0` over a span of length `horizon`.

    :param direction: +1 forward, -1 backward in the independent variable
    :param residual: optional constraint evaluated at every accepted step
    :param residual_limit: raise ConstraintViolationError beyond this value
    :param anchor: when set, the solver carries y[anchor_index] - anchor so that
        the tolerances act on the distance to the anchor; samples, events and
        dense output are returned in the original coordinates
    :return: Trajectory with samples, located events and status
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    y0 = np.asarray(state0.as_array() if hasattr(state0, "as_array") else state0, dtype=float)
    columns = tuple(columns) if columns is not None else tuple(f"y{i}" for i in range(y0.size))
    specs = list(config.events)
    t_end = t0 + direction * horizon

    offset = np.zeros_like(y0)
    if anchor is not None:
        offset[anchor_index] = anchor
        rhs = lambda t, y: field_fn(t, y + offset)
        scipy_events = [spec.as_scipy(offset) for spec in specs]
    else:
        rhs = field_fn
        scipy_events = [spec.as_scipy() for spec in specs]

    try:
        sol = solve_ivp(rhs, (t0, t_end), y0 - offset, method=config.method, rtol=config.rel_tol,
                        atol=config.abs_tol, max_step=config.max_step, dense_output=True,
                        events=scipy_events or None)
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        logger.error(f"Integrator failed from y0={y0.tolist()}: {e}")
        raise IntegrationError(f"Integrator failed: {e}") from e

    if sol.status == -1:
        logger.error(f"Integration aborted at t={sol.t[-1]:.6g}: {sol.message}")
        raise IntegrationError(f"Step-size underflow near t={sol.t[-1]:.6g}, y={sol.y[:, -1].tolist()}: {sol.message}")

    events: List[TrajectoryEvent] = []
    status = "horizon"
    if sol.t_events is not None:
        for spec, times, states in zip(specs, sol.t_events, sol.y_events):
            for t, y in zip(times, states):
                events.append(TrajectoryEvent(float(t), spec.kind, np.array(y) + offset))
        if sol.status == 1:
            for spec, times in zip(specs, sol.t_events):
                if spec.terminal and len(times):
                    status = f"event:{spec.kind.value}"
                    break
    events.sort(key=lambda e: direction * e.sigma)

    states = sol.y.T + offset
    residuals = None
    if residual is not None:
        residuals = np.array([residual(y) for y in states])
        worst = float(np.max(np.abs(residuals)))
        if residual_limit is not None and worst > residual_limit:
            logger.error(f"Constraint residual {worst:.3e} exceeds {residual_limit:.3e}")
            raise ConstraintViolationError(f"Constraint residual {worst:.3e} exceeds {residual_limit:.3e}")

    solution = sol.sol if anchor is None else _AnchoredSolution(sol.sol, offset)
    logger.debug(f"Integrated {len(sol.t)} steps to t={sol.t[-1]:.6g}, status={status}, events={len(events)}")
    return Trajectory(sol.t.copy(), states, columns, events, status, residuals, solution)


# --- Full McGehee system ---

def vf_full(h: Homogeneity, state: FullState) -> FullState:
    """
    ρ' = ρv, v' = |w|² + βv² - αU(s), s' = w,
    w' = -|w|² s + (β-1) v w + ∇_s U(s).
    """
    s, w = np.asarray(state.s, float), np.asarray(state.w, float)
    u = potential_cartesian(h, s)
    w2 = float(np.dot(w, w))
    drho = state.rho * state.v
    dv = w2 + h.beta * state.v ** 2 - h.alpha * u
    dw = -w2 * s + (h.beta - 1.0) * state.v * w + covariant_gradient(h, s)
    return FullState(drho, dv, w.copy(), dw)


def full_field(h: Homogeneity) -> Callable:
    def rhs(t, y):
        return vf_full(h, FullState.from_array(y)).as_array()
    return rhs


def parabolic_constraint(h: Homogeneity, state: FullState) -> float:
    """v² + |w|² - 2U(s); equals 2ρ^α H, hence zero on the collision manifold."""
    w = np.asarray(state.w, float)
    return state.v ** 2 + float(np.dot(w, w)) - 2.0 * potential_cartesian(h, state.s)


def parabolic_constraint_rate(h: Homogeneity, state: FullState) -> float:
    # d/dτ (v² + |w|² - 2U) = 2βv (v² + |w|² - 2U)
    return 2.0 * h.beta * state.v * parabolic_constraint(h, state)


def full_energy(h: Homogeneity, state: FullState) -> float:
    if state.rho <= 0:
        raise ValueError("Energy is undefined on the collision manifold")
    return parabolic_constraint(h, state) / (2.0 * state.rho ** h.alpha)


def mcgehee_transform(h: Homogeneity, q, p) -> FullState:
    """(q, p) -> (ρ, v, s, w) with v = ρ^β<p, s>, w = ρ^β(p - <p, s>s)."""
    q, p = np.asarray(q, float), np.asarray(p, float)
    rho = float(np.linalg.norm(q))
    s = q / rho
    radial = float(np.dot(p, s))
    scale = rho ** h.beta
    return FullState(rho, scale * radial, s, scale * (p - radial * s))


def newton_from_mcgehee(h: Homogeneity, state: FullState) -> Tuple[np.ndarray, np.ndarray]:
    s = np.asarray(state.s, float)
    q = state.rho * s
    p = state.rho ** (-h.beta) * (state.v * s + np.asarray(state.w, float))
    return q, p


def section_embedding(section: SectionKind, x: float, v: float, y: float, rho: float = 0.0) -> FullState:
    """Lifts a section state (x, v, y) to the shape sphere."""
    return FullState(rho, v, section_point(section, x), y * section_tangent(section, x))


# --- Section flows ---

def vf_section_tau(section: SectionKind, h: Homogeneity) -> Callable:
    """Unregularized τ-time section flow on ρ = 0 for y = (x, v, y)."""
    def rhs(t, state):
        x, v, y = state
        u = potential_section(section, h, x)
        du = potential_derivatives(section, h, x, 1)
        return np.array([y, y * y + h.beta * v * v - h.alpha * u, (h.beta - 1.0) * v * y + du])
    return rhs


def vf_projected(section: SectionKind, h: Homogeneity, state: Tuple[float, float], u_sign: int) -> np.ndarray:
    """
    x' = ±√(2U - v²), v' = (1-β)(2U - v²).
    """
    x, v = state
    radicand = 2.0 * potential_section(section, h, x) - v * v
    if radicand < -BOUNDARY_MARGIN:
        logger.error(f"Projected state outside the graph: x={x}, v={v}, 2U-v²={radicand:.3e}")
        raise BoundaryError(f"v² exceeds 2U at x={x} (2U - v² = {radicand:.3e})")
    radicand = max(radicand, 0.0)
    return np.array([u_sign * math.sqrt(radicand), h.kappa * radicand])


def projected_one_form(section: SectionKind, h: Homogeneity, u_sign: int = 1,
                       drift: Optional[float] = None) -> Callable:
    """dv/dx = u_sign·drift·√(2U - v²), drift defaulting to 1-β."""
    drift = h.kappa if drift is None else drift

    def rhs(x, y):
        radicand = 2.0 * potential_section(section, h, x) - y[0] * y[0]
        if radicand < -BOUNDARY_MARGIN:
            raise BoundaryError(f"v² exceeds 2U at x={x} (2U - v² = {radicand:.3e})")
        return [u_sign * drift * math.sqrt(max(radicand, 0.0))]
    return rhs


def vf_regularized(section: SectionKind, h: Homogeneity, state: SectionState, rho: float = 0.0,
                   energy: float = 0.0, substituted: bool = True,
                   tolerance: Optional[float] = None) -> np.ndarray:
    """
    Regularized section field in σ-time, returned as (ρ', v', x', u').

    With g = R/√W:
      ρ' = gρv
      v' = (1-β)√W (2 - v²R/W) + 2ρ^α H R/√W          (substituted)
         = g [u² W/R² + β(v² - 2W/R)]                  (unsubstituted)
      x' = u
      u' = (β-1) g v u + (W'/2W)(2R - u²) + (R'/R)(u² - R)
    """
    if tolerance is not None:
        res = constraint_residual(section, h, state, rho, energy)
        if abs(res) > CONSTRAINT_FACTOR * tolerance:
            logger.error(f"Energy relation residual {res:.3e} at {state}")
            raise ConstraintViolationError(f"Energy relation residual {res:.3e} exceeds {CONSTRAINT_FACTOR * tolerance:.3e}")
    x, v, u = state.x, state.v, state.u
    w, dw = regularized_potential(section, h, x)
    r, log_dr = regularizing_factor(section, h, x)
    sw = math.sqrt(w)
    g = r / sw
    rho_a = rho ** h.alpha if rho > 0 else 0.0
    if substituted:
        dv = h.kappa * sw * (2.0 - v * v * r / w) + 2.0 * rho_a * energy * r / sw
    else:
        dv = g * (u * u * w / (r * r) + h.beta * (v * v - 2.0 * w / r))
    du = (h.beta - 1.0) * g * v * u + dw / (2.0 * w) * (2.0 * r - u * u) + log_dr * (u * u - r)
    return np.array([g * rho * v, dv, u, du])


def regularized_field(section: SectionKind, h: Homogeneity, with_tau: bool = False) -> Callable:
    """σ-time collision-manifold field on y = (x, v, u), optionally carrying τ as a fourth entry."""
    def rhs(t, y):
        d = vf_regularized(section, h, SectionState(y[0], y[1], y[2]))
        if with_tau:
            r, _ = regularizing_factor(section, h, y[0])
            w, _ = regularized_potential(section, h, y[0])
            return np.array([d[2], d[1], d[3], r / math.sqrt(w)])
        return np.array([d[2], d[1], d[3]])
    return rhs


def constraint_residual(section: SectionKind, h: Homogeneity, state: SectionState,
                        rho: float = 0.0, energy: float = 0.0) -> float:
    """u² + v²R²/W - 2R - 2Hρ^α R²/W."""
    w, _ = regularized_potential(section, h, state.x)
    r, _ = regularizing_factor(section, h, state.x)
    q = r * r / w
    rho_a = rho ** h.alpha if rho > 0 else 0.0
    return state.u ** 2 + state.v ** 2 * q - 2.0 * r - 2.0 * energy * rho_a * q


def constraint_rate(section: SectionKind, h: Homogeneity, state: SectionState,
                    rho: float = 0.0, energy: float = 0.0) -> float:
    """Analytic derivative of constraint_residual along vf_regularized."""
    drho, dv, dx, du = vf_regularized(section, h, state, rho, energy)
    w, dw = regularized_potential(section, h, state.x)
    r, log_dr = regularizing_factor(section, h, state.x)
    q = r * r / w
    dq = q * (2.0 * log_dr - dw / w)
    g = r / math.sqrt(w)
    rho_a = rho ** h.alpha if rho > 0 else 0.0
    v, u = state.v, state.u
    return (2.0 * u * du + 2.0 * v * dv * q + v * v * dq * dx - 2.0 * r * log_dr * dx
            - 2.0 * energy * (h.alpha * g * v * rho_a * q + rho_a * dq * dx))


def manifold_state(section: SectionKind, h: Homogeneity, x: float, v: float, u_sign: int = 1) -> SectionState:
    """Point of the regularized collision manifold above (x, v) with the given sign of u."""
    w, _ = regularized_potential(section, h, x)
    r, _ = regularizing_factor(section, h, x)
    radicand = 2.0 * r - v * v * r * r / w
    if radicand < -BOUNDARY_MARGIN:
        raise BoundaryError(f"No manifold point above x={x}, v={v}")
    return SectionState(x, v, math.copysign(math.sqrt(max(radicand, 0.0)), u_sign))


def arm_tail(section: SectionKind, h: Homogeneity, arm: float, v: float,
             delta: float = ARM_PROXIMITY, kappa: Optional[float] = None, sides: int = 2) -> float:
    """
    Increment of v across the window |x - arm| < delta, holding v fixed in
    the radicand: sides·κ ∫_0^δ √(2U(arm+Φ) - v²) dΦ.

    The x^{-α/2} singularity is removed by Φ = t^m, m = 2/(2-α).
    """
    kappa = h.kappa if kappa is None else kappa
    m = 2.0 / (2.0 - h.alpha)

    def ratio(phi):
        # R^{1/α}/Φ in the local coordinate of the arm
        if phi < 1e-150:
            return 2.0
        if section is SectionKind.PLANAR:
            return abs(math.sin(2.0 * phi)) / phi
        return abs(2.0 * math.sin(phi)) / phi

    def integrand(t):
        phi = t ** m
        c = ratio(phi)
        w, _ = regularized_potential(section, h, arm + phi)
        r = (c * phi) ** h.alpha
        return m * math.sqrt(max(2.0 * w - v * v * r, 0.0)) / c ** h.beta

    try:
        value, _ = quad(integrand, 0.0, delta ** (1.0 / m), epsabs=QUAD_ABS_TOL, limit=200)
    except (ValueError, ZeroDivisionError) as e:
        logger.error(f"Arm tail quadrature failed at arm={arm}, v={v}: {e}")
        raise IntegrationError(f"Arm tail quadrature failed: {e}") from e
    return sides * kappa * value


# --- Anisotropic Kepler calibration ---

def kepler_transit_angle(beta: float) -> float:
    """Angle swept from v = -√(2U) to v = +√(2U) at constant U: π/(1-β)."""
    if not (0.0 < beta < 1.0):
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    return math.pi / (1.0 - beta)


def kepler_transit_check(beta: float, potential: float = 1.0,
                         config: Optional[IntegratorConfig] = None) -> float:
    """
    Integrates the projected flow of a constant potential in the angle,
    lifted to (v, y) with v² + y² = 2U, from y = 0, v = -√(2U) until y
    returns to zero. Returns the angle swept.
    """
    expected = kepler_transit_angle(beta)
    kappa = 1.0 - beta
    config = config or IntegratorConfig()
    vbar = math.sqrt(2.0 * potential)

    def rhs(x, y):
        return np.array([kappa * y[1], -kappa * y[0]])

    transit = EventSpec(EventKind.TRANSIT, lambda t, y: y[1], terminal=True, direction=-1.0)
    traj = integrate(rhs, np.array([-vbar, 0.0]), config.with_events([transit]),
                     horizon=4.0 * math.pi / kappa, columns=("v", "y"))
    hit = traj.terminal_event()
    if hit is None:
        raise IntegrationError("Constant-potential flow did not reach the equilibrium line")
    logger.info(f"Kepler transit at beta={beta}: {hit.sigma:.12g} (expected {expected:.12g})")
    return hit.sigma


# --- Reduced Newtonian oracle ---

@dataclass
class NewtonOracle:
    trajectory: Trajectory
    tau: np.ndarray
    mcgehee: np.ndarray
    energy: float


def reduced_newton_oracle(h: Homogeneity, q0, p0, horizon: float,
                          config: Optional[IntegratorConfig] = None,
                          encounter: float = 1e-3) -> NewtonOracle:
    """
    Integrates q'' = ∂U/∂q in physical time together with τ(t),
    dτ/dt = ρ^{-1-β}, and maps every sample to McGehee variables.
    """
    config = config or IntegratorConfig()
    q0, p0 = np.asarray(q0, float), np.asarray(p0, float)

    def rhs(t, y):
        q, p = y[0:3], y[3:6]
        rho = float(np.linalg.norm(q))
        return np.concatenate((p, gradient_cartesian(h, q), [rho ** (-1.0 - h.beta)]))

    def closest(t, y):
        q = y[0:3]
        return min(math.hypot(q[0], q[1]), math.hypot(q[1], q[2]), math.hypot(q[0], q[2]),
                   float(np.linalg.norm(q))) - encounter

    guard = EventSpec(EventKind.CLOSE_ENCOUNTER, closest, terminal=True, direction=-1.0)
    y0 = np.concatenate((q0, p0, [0.0]))
    traj = integrate(rhs, y0, config.with_events([guard]), horizon,
                     columns=("q1", "q2", "q3", "p1", "p2", "p3", "tau"))
    if traj.status == f"event:{EventKind.CLOSE_ENCOUNTER.value}":
        logger.error(f"Close encounter at t={traj.sigma[-1]:.6g}; oracle aborted")
        raise CloseEncounterError(f"Close encounter at t={traj.sigma[-1]:.6g}")

    mcgehee = np.array([mcgehee_transform(h, y[0:3], y[3:6]).as_array() for y in traj.states])
    energy = 0.5 * float(np.dot(p0, p0)) - potential_cartesian(h, q0)
    return NewtonOracle(traj, traj.states[:, 6].copy(), mcgehee, energy)


def oracle_deviation(h: Homogeneity, q0, p0, horizon: float,
                     config: Optional[IntegratorConfig] = None) -> float:
    """Largest gap between the transformed oracle and vf_full integrated in τ."""
    oracle = reduced_newton_oracle(h, q0, p0, horizon, config)
    start = FullState.from_array(oracle.mcgehee[0])
    span = float(oracle.tau[-1])
    traj = integrate(full_field(h), start, config or IntegratorConfig(), span)
    predicted = traj.solution(oracle.tau).T
    return float(np.max(np.abs(predicted - oracle.mcgehee)))


def section_restriction_deviation(section: SectionKind, h: Homogeneity, x0: float, v0: float,
                                  y0: float, horizon: float,
                                  config: Optional[IntegratorConfig] = None) -> float:
    """Gap between vf_full started on a section circle and the section τ-flow."""
    config = config or IntegratorConfig()
    full = integrate(full_field(h), section_embedding(section, x0, v0, y0), config, horizon)
    sect = integrate(vf_section_tau(section, h), np.array([x0, v0, y0]), config, horizon)
    worst = 0.0
    for t, y in zip(sect.sigma, sect.states):
        lifted = section_embedding(section, y[0], y[1], y[2]).as_array()
        worst = max(worst, float(np.max(np.abs(full.solution(t) - lifted))))
    return worst


def regularized_vs_section_deviation(section: SectionKind, h: Homogeneity, state: SectionState,
                                     horizon: float, config: Optional[IntegratorConfig] = None) -> float:
    """
    Runs the regularized field with τ carried along and compares (x, v)
    with the τ-time section flow at matching τ.
    """
    config = config or IntegratorConfig()
    reg = integrate(regularized_field(section, h, with_tau=True),
                    np.array([state.x, state.v, state.u, 0.0]), config, horizon)
    w, _ = regularized_potential(section, h, state.x)
    r, _ = regularizing_factor(section, h, state.x)
    y0 = state.u * math.sqrt(w) / r
    tau_end = float(reg.states[-1, 3])
    sect = integrate(vf_section_tau(section, h), np.array([state.x, state.v, y0]), config, tau_end)
    worst = 0.0
    for row in reg.states:
        if row[3] <= 0.0:
            continue
        xv = sect.solution(row[3])[:2]
        worst = max(worst, float(np.max(np.abs(xv - row[:2]))))
    return worst
