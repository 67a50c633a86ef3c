"""
Branch tracing on the regularized collision manifold and the connection
graph between central configurations and binary escape sets.

Branches live in the covering chart of a section. At an arm the trace
stops ARM_PROXIMITY away, adds the arm tail to v and restarts on the
mirrored side with the same sign of u, which in the folded chart is the
usual "reflect θ, flip u" continuation through a binary collision.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect, brentq

from .central_configs import (
    CentralConfiguration,
    cc_by_label,
    enumerate_ccs,
    nearest_cc,
    planar_vbar_closed,
    section_label,
    section_linearization,
    section_restpoints,
    tetra_angle,
    planar_angle,
)
from .config import (
    ALPHA0_STAR_BRACKET,
    ALPHA_STAR_BRACKET,
    ALPHA_XTOL,
    ANCHORED_ABS_TOL,
    ARM_PROXIMITY,
    CAPTURE_RADIUS,
    ENERGY_TOLERANCE,
    ESCAPE_MARGIN,
    MAX_ARM_PASSES,
    MAX_THREADS,
    MONOTONE_GRID,
    SADDLE_TOLERANCE,
    SEED_EPSILON,
    SIGMA_BUDGET,
)
from .flows import (
    BoundaryError,
    EventKind,
    EventSpec,
    IntegratorConfig,
    SectionState,
    Trajectory,
    arm_proximity,
    arm_tail,
    constraint_residual,
    integrate,
    manifold_state,
    projected_one_form,
    regularized_field,
    v_crossing,
)
from .logger import setup_logger
from .potentials import (
    Homogeneity,
    NumericalError,
    SectionKind,
    fold,
    nearest_arm,
    potential_section,
    regularized_potential,
    regularizing_factor,
    section_point,
)

logger = setup_logger("connections")

FUNDAMENTAL_LABELS = ("p11", "p21", "p31", "e11", "e12")
# coordinate transpositions carrying the circle s1 = s2 to s1 = s3 and s2 = s3
PERMUTATIONS = ((0, 2, 1), (2, 1, 0))
FIGURE_BOXES = (
    "B^{s,+}", "B^{s,-}", "B^{u,+}", "B^{u,-}",
    "p11+", "p11-", "p21,p31+", "p21,p31-", "e11,e12+", "e11,e12-",
)


class NoSignChangeError(NumericalError):
    pass


class NonHyperbolicError(NumericalError):
    pass


class LyapunovOrderError(NumericalError):
    """A restpoint-to-restpoint edge along which v would decrease."""
    pass


class Stability(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class OutcomeKind(Enum):
    RESTPOINT_CAPTURE = "restpoint_capture"
    ARM_ESCAPE = "arm_escape"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Branch:
    section: SectionKind
    x_rest: float
    vbar_sign: int
    stability: Stability
    side: Side
    label: str

    @property
    def signed_label(self) -> str:
        return f"{self.label}{'+' if self.vbar_sign > 0 else '-'}"

    @property
    def name(self) -> str:
        manifold = "W^u" if self.stability is Stability.UNSTABLE else "W^s"
        return f"{self.side.value} {manifold}({self.signed_label}) [{self.section.value}]"

    @property
    def direction(self) -> int:
        return 1 if self.stability is Stability.UNSTABLE else -1


@dataclass
class ArmCrossing:
    sigma: float
    arm: float
    target: str
    v: float


@dataclass
class ZeroCrossing:
    sigma: float
    x: float
    folded: float


@dataclass
class BranchOutcome:
    branch: Branch
    kind: OutcomeKind
    target: Optional[str] = None
    v_at_arm: Optional[float] = None
    arm_crossings: List[ArmCrossing] = field(default_factory=list)
    zero_crossings: List[ZeroCrossing] = field(default_factory=list)
    saddle: bool = False
    seed: Optional[SectionState] = None
    final_state: Optional[np.ndarray] = None
    segments: List[Trajectory] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "branch": self.branch.name,
            "outcome": self.kind.value,
            "target": self.target,
            "v_at_arm": self.v_at_arm,
            "saddle": self.saddle,
            "arm_crossings": [{"sigma": c.sigma, "arm": c.arm, "target": c.target, "v": c.v}
                              for c in self.arm_crossings],
            "zero_crossings": [{"sigma": z.sigma, "x": z.x, "folded": z.folded}
                               for z in self.zero_crossings],
            "final_state": None if self.final_state is None else [float(y) for y in self.final_state],
        }


@dataclass(frozen=True)
class ConnectionEdge:
    source: str
    target: str
    branch: str
    alpha: float
    v_at_arms: Tuple[float, ...] = ()
    saddle: bool = False
    origin: str = "traced"

    def as_dict(self) -> dict:
        return {"from": self.source, "to": self.target, "branch": self.branch,
                "v_at_arms": list(self.v_at_arms), "saddle": self.saddle, "origin": self.origin}


@dataclass
class ConnectionGraph:
    alpha: float
    nodes: List[str]
    edges: List[ConnectionEdge]

    def successors(self, node: str) -> List[str]:
        return sorted({e.target for e in self.edges if e.source == node})

    def predecessors(self, node: str) -> List[str]:
        return sorted({e.source for e in self.edges if e.target == node})

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "nodes": list(self.nodes), "edges": [e.as_dict() for e in self.edges]}


# --- Labels ---

def escape_label(section: SectionKind, arm: float, direction: int) -> str:
    """Binary escape set reached through `arm`: s for forward runs, u for backward ones."""
    s = section_point(section, arm)
    j = int(np.argmax(np.abs(s)))
    sign = "+" if s[j] > 0 else "-"
    kind = "s" if direction > 0 else "u"
    return f"B{j + 1}^{{{kind},{sign}}}"


def is_escape(label: str) -> bool:
    return label.startswith("B")


def dual_label(label: str) -> str:
    if is_escape(label):
        return label.replace("^{s,", "^{x,").replace("^{u,", "^{s,").replace("^{x,", "^{u,")
    return label[:-1] + ("-" if label.endswith("+") else "+")


def dual_edge(edge: ConnectionEdge) -> ConnectionEdge:
    """X^a ⇝ Y^b  becomes  Y^{-b} ⇝ X^{-a}, with B^s and B^u exchanged."""
    return ConnectionEdge(dual_label(edge.target), dual_label(edge.source), f"dual of {edge.branch}",
                          edge.alpha, edge.v_at_arms, edge.saddle, "dual")


def permute_label(label: str, perm: Sequence[int], ccs: List[CentralConfiguration]) -> str:
    if is_escape(label):
        j = int(label[1]) - 1
        new_j = list(perm).index(j)
        return f"B{new_j + 1}{label[2:]}"
    cc = cc_by_label(ccs, label[:-1])
    image = cc.unit()[list(perm)]
    return nearest_cc(ccs, image).label + label[-1]


def label_value(label: str, ccs: List[CentralConfiguration]) -> float:
    """Signed restpoint value v̄ of a labelled central configuration."""
    cc = cc_by_label(ccs, label[:-1])
    return cc.vbar_pos if label.endswith("+") else -cc.vbar_pos


# --- Branch seeding ---

def locate_restpoint(section: SectionKind, h: Homogeneity, label: str,
                     ccs: Optional[List[CentralConfiguration]] = None) -> float:
    """Covering coordinate, nearest to zero, of the restpoint carrying `label`."""
    ccs = ccs or enumerate_ccs(h)
    candidates = [x for x in section_restpoints(section, h, -math.pi, 2 * math.pi)
                  if section_label(ccs, section, x) == label]
    if not candidates:
        raise KeyError(f"{label} is not a restpoint of the {section.value} section")
    return min(candidates, key=abs)


def make_branch(section: SectionKind, h: Homogeneity, label: str, sign: int,
                stability: Stability = Stability.UNSTABLE, side: Side = Side.RIGHT,
                ccs: Optional[List[CentralConfiguration]] = None) -> Branch:
    return Branch(section, locate_restpoint(section, h, label, ccs), 1 if sign > 0 else -1, stability, side, label)


def branch_exponent(h: Homogeneity, branch: Branch) -> float:
    _, _, mu = section_linearization(branch.section, h, branch.x_rest, branch.vbar_sign)
    if abs(mu[0].imag) > 0.0:
        raise NonHyperbolicError(f"{branch.signed_label} is a focus in the {branch.section.value} section; "
                                 f"it has no one-dimensional branches")
    if min(abs(mu[0].real), abs(mu[1].real)) < 1e-12:
        raise NonHyperbolicError(f"{branch.signed_label} is not hyperbolic at alpha={h.alpha}")
    return mu[0].real if branch.stability is Stability.UNSTABLE else mu[1].real


def seed_branch(h: Homogeneity, branch: Branch, epsilon: float = SEED_EPSILON) -> SectionState:
    """
    Restpoint displaced by ε along the eigendirection (δx, δy) = (1, μ);
    v is re-solved from the energy relation and u = yR/√W.
    """
    if not (0.0 <= epsilon <= 1e-4):
        raise ValueError(f"epsilon must lie in [0, 1e-4], got {epsilon}")
    mu = branch_exponent(h, branch)
    norm = math.hypot(1.0, mu)
    side = 1.0 if branch.side is Side.RIGHT else -1.0
    x = branch.x_rest + side * epsilon / norm
    y = side * epsilon * mu / norm
    radicand = 2.0 * potential_section(branch.section, h, x) - y * y
    v = math.copysign(math.sqrt(radicand), branch.vbar_sign)
    w, _ = regularized_potential(branch.section, h, x)
    r, _ = regularizing_factor(branch.section, h, x)
    return SectionState(x, v, y * r / math.sqrt(w))


# --- Tracing ---

class _RestpointLocator:
    """Nearest covering restpoint and its |v̄|, without re-root-finding per call."""

    def __init__(self, section: SectionKind, h: Homogeneity):
        self.section = section
        if section is SectionKind.PLANAR:
            self.base = [planar_angle(h)]
            self.spacing = math.pi / 2
        else:
            phi_t = tetra_angle(h)
            self.base = [-phi_t, 0.0, phi_t]
            self.spacing = math.pi
        self.values = {b: math.sqrt(2.0 * potential_section(section, h, b)) for b in self.base}

    def nearest(self, x: float) -> Tuple[float, float]:
        k = round(x / self.spacing)
        best = None
        for shift in (k - 1, k, k + 1):
            for b in self.base:
                xr = b + shift * self.spacing
                if best is None or abs(x - xr) < abs(x - best[0]):
                    best = (xr, self.values[b])
        return best


def _capture_event(locator: _RestpointLocator, radius: float) -> EventSpec:
    def distance(t, y):
        xr, vr = locator.nearest(y[0])
        vr = math.copysign(vr, y[1])
        return math.sqrt((y[0] - xr) ** 2 + (y[1] - vr) ** 2 + y[2] ** 2) - radius
    return EventSpec(EventKind.CAPTURE, distance, terminal=True, direction=-1.0)


def trace_branch(h: Homogeneity, branch: Branch, epsilon: float = SEED_EPSILON,
                 config: Optional[IntegratorConfig] = None, sigma_budget: float = SIGMA_BUDGET,
                 max_passes: int = MAX_ARM_PASSES, critical_alphas: Sequence[float] = (),
                 ccs: Optional[List[CentralConfiguration]] = None) -> BranchOutcome:
    """
    Follows a branch until it is captured by a restpoint, escapes through
    an arm with |v| above every restpoint value, or exhausts its budget.
    """
    config = config or IntegratorConfig()
    ccs = ccs or enumerate_ccs(h)
    section, direction = branch.section, branch.direction
    locator = _RestpointLocator(section, h)
    threshold = planar_vbar_closed(h.alpha) + ESCAPE_MARGIN
    near_critical = any(abs(h.alpha - c) < SADDLE_TOLERANCE for c in critical_alphas)
    if near_critical:
        logger.warning(f"alpha={h.alpha} is within {SADDLE_TOLERANCE} of a critical exponent; saddle case")

    seed = seed_branch(h, branch, epsilon)
    events = [arm_proximity(section), v_crossing(0.0), _capture_event(locator, CAPTURE_RADIUS)]
    field_fn = regularized_field(section, h)
    residual = lambda y: constraint_residual(section, h, SectionState(y[0], y[1], y[2]))
    anchored = IntegratorConfig(config.rel_tol, (ANCHORED_ABS_TOL, config.abs_tol, ANCHORED_ABS_TOL),
                                config.max_step, (), config.method)
    outcome = BranchOutcome(branch, OutcomeKind.UNDECIDED, seed=seed, saddle=near_critical)

    state = seed.as_array()
    sigma = 0.0
    passes = 0
    anchor = None
    while direction * sigma < sigma_budget:
        segment_config = (config if anchor is None else anchored).with_events(events)
        segment = integrate(field_fn, state, segment_config, sigma_budget - direction * sigma, direction,
                            columns=("x", "v", "u"), residual=residual, residual_limit=ENERGY_TOLERANCE,
                            t0=sigma, anchor=anchor)
        outcome.segments.append(segment)
        for event in segment.events:
            if event.kind is EventKind.V_ZERO:
                x = float(event.state[0])
                outcome.zero_crossings.append(ZeroCrossing(event.sigma, x, fold(section, x)))
                logger.debug(f"{branch.name}: v=0 at x={x:.12g} (folded {fold(section, x):.12g})")
        sigma = float(segment.sigma[-1])
        state = segment.final_state
        outcome.final_state = state

        if segment.status == f"event:{EventKind.CAPTURE.value}":
            xr, _ = locator.nearest(state[0])
            sign = 1 if state[1] > 0 else -1
            _, _, mu = section_linearization(section, h, xr, sign)
            outcome.kind = OutcomeKind.RESTPOINT_CAPTURE
            outcome.target = section_label(ccs, section, xr) + ("+" if sign > 0 else "-")
            outcome.saddle = outcome.saddle or (mu[0].real > 0.0 > mu[1].real)
            logger.info(f"{branch.name}: captured by {outcome.target} at sigma={sigma:.6g}")
            return outcome

        if segment.status != f"event:{EventKind.ARM_PROXIMITY.value}":
            break

        x, v, u = state
        arm = nearest_arm(section, x)
        tail = arm_tail(section, h, arm, v)
        v_arm = v + direction * tail / 2.0
        target = escape_label(section, arm, direction)
        outcome.arm_crossings.append(ArmCrossing(sigma, arm, target, v_arm))
        if outcome.v_at_arm is None:
            outcome.v_at_arm = v_arm
        logger.debug(f"{branch.name}: arm {arm:.6g} at sigma={sigma:.6g}, v={v_arm:.12g}")

        if direction * v_arm > threshold:
            outcome.kind = OutcomeKind.ARM_ESCAPE
            outcome.target = target
            logger.info(f"{branch.name}: escapes to {target} with v={v_arm:.6g}")
            return outcome

        passes += 1
        if passes > max_passes:
            break
        v_new = v + direction * tail
        if v_new * v < 0:
            outcome.zero_crossings.append(ZeroCrossing(sigma, arm, fold(section, arm)))
        # past the arm at the mirrored distance, still moving away from it
        offset = arm - x
        u_sign = 1 if u > 0 else -1
        if direction * u_sign * offset <= 0:
            raise BoundaryError(f"{branch.name}: restart at x={arm + offset} would move back into arm {arm}")
        state = manifold_state(section, h, arm + offset, v_new, u_sign).as_array()
        anchor = arm

    logger.warning(f"{branch.name}: undecided after sigma={sigma:.6g} and {passes} arm passages")
    return outcome


def branch_value_at(outcome: BranchOutcome, x_cover: float) -> Optional[float]:
    """v of the traced branch at the first crossing of the covering coordinate x_cover."""
    for segment in outcome.segments:
        xs = segment.states[:, 0]
        for i in range(len(xs) - 1):
            if (xs[i] - x_cover) * (xs[i + 1] - x_cover) <= 0.0:
                a, b = segment.sigma[i], segment.sigma[i + 1]
                if a == b:
                    return float(segment.states[i, 1])
                t = brentq(lambda s: segment.solution(s)[0] - x_cover, min(a, b), max(a, b), xtol=1e-13)
                return float(segment.solution(t)[1])
    return None


def branch_samples(outcome: BranchOutcome) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Concatenated (σ, state, residual) of all segments."""
    sigma = np.concatenate([s.sigma for s in outcome.segments])
    states = np.vstack([s.states for s in outcome.segments])
    residuals = np.concatenate([s.residuals for s in outcome.segments])
    return sigma, states, residuals


# --- Classification ---

def default_branches(h: Homogeneity, ccs: Optional[List[CentralConfiguration]] = None) -> List[Branch]:
    """Unstable branches of the saddle restpoints p11± (planar) and e11±, e12± (tetra)."""
    ccs = ccs or enumerate_ccs(h)
    branches = []
    for section, labels in ((SectionKind.PLANAR, ("p11",)), (SectionKind.TETRA, ("e11", "e12"))):
        for label in labels:
            for sign in (1, -1):
                for side in (Side.LEFT, Side.RIGHT):
                    branches.append(make_branch(section, h, label, sign, Stability.UNSTABLE, side, ccs))
    return branches


def outcome_edge(h: Homogeneity, outcome: BranchOutcome) -> Optional[ConnectionEdge]:
    if outcome.kind is OutcomeKind.UNDECIDED or outcome.target is None:
        return None
    v_arms = tuple(c.v for c in outcome.arm_crossings)
    own = outcome.branch.signed_label
    if outcome.branch.stability is Stability.UNSTABLE:
        return ConnectionEdge(own, outcome.target, outcome.branch.name, h.alpha, v_arms, outcome.saddle)
    return ConnectionEdge(outcome.target, own, outcome.branch.name, h.alpha, v_arms, outcome.saddle)


def check_lyapunov_order(h: Homogeneity, edges: Iterable[ConnectionEdge],
                         ccs: Optional[List[CentralConfiguration]] = None) -> None:
    """v increases along the flow, so a restpoint edge must end at a larger v̄ than it starts."""
    ccs = ccs or enumerate_ccs(h)
    for edge in edges:
        if is_escape(edge.source) or is_escape(edge.target):
            continue
        if label_value(edge.target, ccs) <= label_value(edge.source, ccs):
            logger.error(f"Edge {edge.source} -> {edge.target} ({edge.branch}) decreases v")
            raise LyapunovOrderError(f"Edge {edge.source} -> {edge.target} decreases v at alpha={h.alpha}")


def classify_connections(h: Homogeneity, critical_alphas: Sequence[float] = (),
                         epsilon: float = SEED_EPSILON, config: Optional[IntegratorConfig] = None,
                         branches: Optional[Iterable[Branch]] = None) -> List[ConnectionEdge]:
    """
    Traces the default branches, adds their duals and the images of the
    tetrahedral connections under coordinate transpositions.
    """
    ccs = enumerate_ccs(h)
    branches = list(branches) if branches is not None else default_branches(h, ccs)
    outcomes = [trace_branch(h, branch, epsilon, config, critical_alphas=critical_alphas, ccs=ccs)
                for branch in branches]
    return edges_from_outcomes(h, outcomes, ccs)


def edges_from_outcomes(h: Homogeneity, outcomes: Iterable[BranchOutcome],
                        ccs: Optional[List[CentralConfiguration]] = None) -> List[ConnectionEdge]:
    """Edges of traced outcomes closed under duality and the tetrahedral transpositions."""
    ccs = ccs or enumerate_ccs(h)
    traced: List[ConnectionEdge] = []
    for outcome in outcomes:
        edge = outcome_edge(h, outcome)
        if edge is None:
            logger.warning(f"{outcome.branch.name}: undecided, no edge recorded")
            continue
        traced.append(edge)

    edges = list(traced)
    edges.extend(dual_edge(e) for e in traced)
    tetra_like = [e for e in edges if "[tetra]" in e.branch]
    for perm in PERMUTATIONS:
        for edge in tetra_like:
            source = permute_label(edge.source, perm, ccs)
            target = permute_label(edge.target, perm, ccs)
            labels = [l[:-1] for l in (source, target) if not is_escape(l)]
            if all(l in FUNDAMENTAL_LABELS for l in labels):
                edges.append(ConnectionEdge(source, target, f"permuted {edge.branch}", h.alpha,
                                            edge.v_at_arms, edge.saddle, "permutation"))

    unique: Dict[Tuple[str, str], ConnectionEdge] = {}
    for edge in edges:
        unique.setdefault((edge.source, edge.target), edge)
    result = list(unique.values())

    check_lyapunov_order(h, result, ccs)
    for edge in result:
        if edge.saddle:
            logger.warning(f"Saddle connection {edge.source} -> {edge.target} at alpha={h.alpha}")
    logger.info(f"alpha={h.alpha}: {len(traced)} traced edges, {len(result)} in total")
    return result


def connection_graph(h: Homogeneity, edges: Optional[List[ConnectionEdge]] = None) -> ConnectionGraph:
    edges = edges if edges is not None else classify_connections(h)
    nodes = sorted({e.source for e in edges} | {e.target for e in edges})
    return ConnectionGraph(h.alpha, nodes, sorted(edges, key=lambda e: (e.source, e.target)))


def _box(label: str) -> str:
    if is_escape(label):
        return "B" + label[2:]
    base, sign = label[:-1], label[-1]
    if base.startswith("p1"):
        return "p11" + sign
    if base.startswith("p"):
        return "p21,p31" + sign
    return "e11,e12" + sign


def collapse_to_boxes(graph: ConnectionGraph) -> Dict[str, List[str]]:
    """
    Merges nodes the way the connection figure draws them: escape sets by
    (stability, sign), p2/p3 per sign, e11/e12 per sign.
    """
    boxes: Dict[str, set] = {}
    for node in graph.nodes:
        boxes.setdefault(_box(node), set())
    for edge in graph.edges:
        boxes[_box(edge.source)].add(_box(edge.target))
    return {k: sorted(v - {k}) for k, v in sorted(boxes.items())}


def sweep(alphas: Sequence[float], critical_alphas: Sequence[float] = (),
          epsilon: float = SEED_EPSILON) -> Dict[float, List[ConnectionEdge]]:
    """classify_connections over an α grid, fanned out over D4_THREADS workers."""
    def job(alpha):
        return alpha, classify_connections(Homogeneity(alpha), critical_alphas, epsilon)

    with ThreadPoolExecutor(max_workers=MAX_THREADS) as pool:
        return dict(pool.map(job, alphas))


# --- Critical exponents ---

@dataclass
class AlphaStarReport:
    section: str
    target: str
    drift: str
    integrator: str
    root: float
    bracket: Tuple[float, float]
    samples: List[Tuple[float, float]]
    monotone: bool

    def as_dict(self) -> dict:
        return {"section": self.section, "target": self.target, "drift": self.drift,
                "integrator": self.integrator, "root": self.root, "bracket": list(self.bracket),
                "V_samples": [[a, v] for a, v in self.samples], "monotone": self.monotone}


_TARGETS = ("alpha_star", "alpha0_star")


def _drift_value(h: Homogeneity, drift: str) -> float:
    if drift == "half":
        return 0.5
    if drift == "section":
        return h.kappa
    raise ValueError(f"Unknown drift '{drift}', expected half or section")


def _family_geometry(section: SectionKind, h: Homogeneity) -> Tuple[float, float, float]:
    x_rest = planar_angle(h) if section is SectionKind.PLANAR else tetra_angle(h)
    arm = nearest_arm(section, x_rest + (math.pi / 4 if section is SectionKind.PLANAR else math.pi / 2))
    vbar = -math.sqrt(2.0 * potential_section(section, h, x_rest))
    return x_rest, arm, vbar


def _one_form_leg(section, h, drift, x0, x1, v0, config):
    rhs = projected_one_form(section, h, 1, drift)

    def turning(x, y):
        return 2.0 * potential_section(section, h, x) - y[0] * y[0]
    turning.terminal = True
    turning.direction = -1.0
    sol = solve_ivp(rhs, (x0, x1), [v0], method=config.method, rtol=config.rel_tol,
                    atol=config.abs_tol, max_step=config.max_step, events=[turning])
    if sol.status == -1:
        raise NumericalError(f"One-form integration failed: {sol.message}")
    return float(sol.y[0, -1]), sol.status == 1


def _sigma_leg(section, h, drift, x0, x1, v0, config, anchor=0.0):
    # y[0] is x - anchor, so the tolerance acts on the distance to the anchor
    def rhs(t, y):
        x = anchor + y[0]
        w, _ = regularized_potential(section, h, x)
        r, _ = regularizing_factor(section, h, x)
        return [math.sqrt(max(2.0 * r - y[1] ** 2 * r * r / w, 0.0)),
                drift * math.sqrt(w) * (2.0 - y[1] ** 2 * r / w)]

    def reach(t, y):
        return anchor + y[0] - x1
    reach.terminal = True
    reach.direction = 1.0

    def turning(t, y):
        return 2.0 * potential_section(section, h, anchor + y[0]) - y[1] ** 2
    turning.terminal = True
    turning.direction = -1.0
    atol = config.abs_tol if anchor == 0.0 else (ANCHORED_ABS_TOL, config.abs_tol)
    sol = solve_ivp(rhs, (0.0, SIGMA_BUDGET), [x0 - anchor, v0], method=config.method, rtol=config.rel_tol,
                    atol=atol, max_step=config.max_step, events=[reach, turning])
    if sol.status != 1:
        raise NumericalError(f"Regularized projected flow did not reach x={x1}: {sol.message}")
    turned = len(sol.t_events[1]) > 0
    return float(sol.y[1, -1]), turned


def section_value(alpha: float, section: SectionKind = SectionKind.PLANAR, target: str = "alpha_star",
                  drift: str = "half", integrator: str = "one_form",
                  config: Optional[IntegratorConfig] = None, delta: float = ARM_PROXIMITY) -> float:
    """
    V(α) of the one-parameter family started at the negative restpoint:
    v at the arm for alpha_star, v back at the restpoint angle on the
    mirrored side for alpha0_star.
    """
    if target not in _TARGETS:
        raise ValueError(f"Unknown target '{target}', expected one of {_TARGETS}")
    h = Homogeneity(alpha)
    config = config or IntegratorConfig()
    kappa = _drift_value(h, drift)
    x_rest, arm, vbar = _family_geometry(section, h)

    if integrator == "one_form":
        v, turned = _one_form_leg(section, h, kappa, x_rest, arm - delta, vbar, config)
    elif integrator == "regularized":
        seed = 1e-6
        lam = section_linearization(section, h, x_rest, -1)[0]
        k = (2.0 * kappa ** 2 * abs(vbar) + math.sqrt(4.0 * kappa ** 4 * vbar ** 2 + 16.0 * kappa ** 2 * lam)) / 8.0
        v, turned = _sigma_leg(section, h, kappa, x_rest + seed, arm - delta, vbar + k * seed ** 2, config)
    else:
        raise ValueError(f"Unknown integrator '{integrator}'")
    if turned:
        return v

    if target == "alpha_star":
        return v + arm_tail(section, h, arm, v, delta, kappa, sides=1)

    v = v + arm_tail(section, h, arm, v, delta, kappa, sides=2)
    mirror = 2.0 * arm - x_rest
    if integrator == "one_form":
        v, _ = _one_form_leg(section, h, kappa, arm + delta, mirror, v, config)
    else:
        v, _ = _sigma_leg(section, h, kappa, arm + delta, mirror, v, config, anchor=arm)
    return v


def find_alpha_star(section: SectionKind = SectionKind.PLANAR, bracket: Optional[Tuple[float, float]] = None,
                    target_section: str = "alpha_star", drift: str = "half",
                    integrator: str = "one_form", grid: int = MONOTONE_GRID,
                    config: Optional[IntegratorConfig] = None) -> AlphaStarReport:
    """
    Bisection root of V(α) in `bracket`, with V checked for strict
    monotonicity on a uniform grid across the bracket.
    """
    if bracket is None:
        bracket = ALPHA_STAR_BRACKET if target_section == "alpha_star" else ALPHA0_STAR_BRACKET
    a, b = bracket
    value = lambda alpha: section_value(alpha, section, target_section, drift, integrator, config)

    alphas = np.linspace(a, b, grid)
    samples = [(float(al), value(float(al))) for al in alphas]
    values = [v for _, v in samples]
    monotone = all(v2 > v1 for v1, v2 in zip(values, values[1:]))
    if not monotone:
        logger.warning(f"V is not strictly increasing on {bracket} ({target_section}, {drift})")
    if values[0] * values[-1] > 0:
        logger.error(f"No sign change of V on {bracket}: V(a)={values[0]:.6g}, V(b)={values[-1]:.6g}")
        raise NoSignChangeError(f"V keeps the sign {'+' if values[0] > 0 else '-'} on {bracket} "
                                f"({target_section}, drift={drift})")
    try:
        root = bisect(value, a, b, xtol=ALPHA_XTOL)
    except (ValueError, RuntimeError) as e:
        logger.error(f"Bisection failed on {bracket}: {e}")
        raise NoSignChangeError(f"Bisection failed on {bracket}: {e}") from e
    logger.info(f"{target_section} ({section.value}, {drift}, {integrator}) = {root:.10f}")
    return AlphaStarReport(section.value, target_section, drift, integrator, float(root),
                           (float(a), float(b)), samples, monotone)


def alpha_star_report(section: SectionKind = SectionKind.PLANAR, drift: str = "half",
                      config: Optional[IntegratorConfig] = None) -> dict:
    """Both critical exponents from both integrators."""
    results = {}
    for target in _TARGETS:
        for integrator in ("one_form", "regularized"):
            results[(target, integrator)] = find_alpha_star(section, None, target, drift, integrator,
                                                            config=config)
    star = results[("alpha_star", "one_form")]
    zero = results[("alpha0_star", "one_form")]
    agreement = max(abs(results[(t, "one_form")].root - results[(t, "regularized")].root) for t in _TARGETS)
    return {
        "section": section.value,
        "drift": drift,
        "alpha0_star": zero.root,
        "alpha_star": star.root,
        "bracket": {"alpha0_star": list(zero.bracket), "alpha_star": list(star.bracket)},
        "V_samples": {"alpha0_star": [[a, v] for a, v in zero.samples],
                      "alpha_star": [[a, v] for a, v in star.samples]},
        "monotone": zero.monotone and star.monotone,
        "integrator_agreement": agreement,
    }
