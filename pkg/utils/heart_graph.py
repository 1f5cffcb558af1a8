"""
Finite hearts, simple tilts and the geometry of the stability space.

A heart is stored as the quiver with potential of its simples together with
the classes [S_i] in K(D) ≅ ℤⁿ (standard-heart basis, one row per vertex) and
the shift level of each simple relative to the seed heart when it lies in a
single shift of it.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import sympy

from .config import MAX_TILT_STEPS, WORKER_THREADS
from .error_handler import (
    InvalidCentralChargeError,
    InvalidHeartError,
    NonReducibleError,
    OutOfRangeError,
    ProportionalClassesError,
    StabLabError,
    ZeroClassError,
)
from .logging_handler import StructuredLogger
from .qp_core import Quiver, QuiverWithPotential, canonical_form, euler_matrix, mutate
from .rep_stab import (
    CentralChargeVector,
    Representation,
    hn_filtration,
    in_closed_upper_half_plane,
)

logger = StructuredLogger(__name__)

ClassVector = Tuple[int, ...]
HEART_NOT_UPDATED = "heart-not-updated"
_NO_LEVEL = 1 << 30
_DATA_TOLERANCE = 1e-9


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


def _sign(row: Sequence[int]) -> int:
    """1 for a non-negative row, −1 for a non-positive row, 0 for mixed signs."""
    if all(c >= 0 for c in row):
        return 1
    if all(c <= 0 for c in row):
        return -1
    return 0


def _default_level(row: Sequence[int]) -> Optional[int]:
    return {1: 0, -1: 1}.get(_sign(row))


@dataclass(frozen=True)
class Heart:
    qp: QuiverWithPotential
    classes: Tuple[ClassVector, ...]
    levels: Optional[Tuple[Optional[int], ...]] = None

    def __post_init__(self):
        n = len(self.qp.vertices)
        classes = tuple(tuple(int(c) for c in row) for row in self.classes)
        if len(classes) != n or any(len(row) != n for row in classes):
            raise InvalidHeartError(detail=f"class matrix is not {n}x{n}")
        if n and abs(sympy.Matrix(classes).det()) != 1:
            raise InvalidHeartError(detail="simple classes do not form a basis of K(D)")
        levels = self.levels
        if levels is None:
            levels = tuple(_default_level(row) for row in classes)
        elif len(levels) != n:
            raise InvalidHeartError(detail="one level per simple is required")
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "levels", tuple(levels))

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.qp.vertices

    def index(self, simple) -> int:
        return self.qp.quiver.index(simple)

    def simple_class(self, simple) -> ClassVector:
        return self.classes[self.index(simple)]

    def coordinates(self, cls: Sequence[int]) -> Tuple[Fraction, ...]:
        """cls expressed in the basis of this heart's simples."""
        if len(cls) != self.rank:
            raise ZeroClassError(cls=tuple(cls))
        row = sympy.Matrix([list(cls)]) * sympy.Matrix(self.classes).inv()
        return tuple(Fraction(int(x.p), int(x.q)) for x in row)

    def key(self) -> tuple:
        """Isomorphism-invariant key: canonical labelling plus permuted classes and levels."""
        def decorate(order):
            return (tuple(self.classes[o] for o in order),
                    tuple(_NO_LEVEL if self.levels[o] is None else self.levels[o] for o in order))
        return canonical_form(self.qp, decorate)[0]

    def class_set(self) -> frozenset:
        return frozenset(self.classes)


def standard_heart(qp: QuiverWithPotential) -> Heart:
    n = len(qp.vertices)
    return Heart(qp, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), tuple(0 for _ in range(n)))


def _combined_level(own: Optional[int], tilted: Optional[int], row: Sequence[int]) -> Optional[int]:
    if own is None or tilted is None:
        return None
    if own == tilted:
        return own
    if abs(own - tilted) != 1:
        return None
    parity = {1: 0, -1: 1}.get(_sign(row))
    if parity is None:
        return None
    return own if own % 2 == parity else tilted


def simple_tilt(H: Heart, simple, direction: Union[Direction, str] = Direction.FORWARD) -> Heart:
    """
    Forward: [S_i] ↦ −[S_i], [S_j] ↦ [S_j] + q_ij[S_i]. Backward is the inverse,
    [S_j] ↦ [S_j] + q_ji[S_i]. The quiver part becomes μ_i in both directions.
    """
    direction = Direction(direction)
    k = H.index(simple)
    vertex = H.vertices[k]
    quiver = H.qp.quiver
    tilted_row = H.classes[k]
    tilted_level = H.levels[k]
    classes = list(H.classes)
    levels = list(H.levels)
    for j, other in enumerate(H.vertices):
        if j == k:
            continue
        count = quiver.arrow_count(vertex, other) if direction is Direction.FORWARD else quiver.arrow_count(other, vertex)
        if count:
            classes[j] = tuple(a + count * b for a, b in zip(classes[j], tilted_row))
            levels[j] = _combined_level(levels[j], tilted_level, classes[j])
    classes[k] = tuple(-c for c in tilted_row)
    if tilted_level is not None:
        levels[k] = tilted_level + (1 if direction is Direction.FORWARD else -1)
    return Heart(mutate(H.qp, vertex), tuple(classes), tuple(levels))


def shift_heart(H: Heart, n: int) -> Heart:
    sign = -1 if n % 2 else 1
    return Heart(
        H.qp,
        tuple(tuple(sign * c for c in row) for row in H.classes),
        tuple(None if level is None else level + n for level in H.levels),
    )


def is_intermediate(H: Heart) -> bool:
    """Every simple lies in H₀ or H₀[1]: sign-definite rows at level 0 or 1."""
    return all(_sign(row) != 0 for row in H.classes) and all(level in (0, 1) for level in H.levels)


def cross_wall(H: Heart, simple) -> Heart:
    return simple_tilt(H, simple, Direction.BACKWARD)


# -- Euler form and spherical twists ------------------------------------------------

def euler_on_classes(H: Heart, x: Sequence[int], y: Sequence[int]) -> int:
    """χ(x, y) for classes in K(D), computed in the basis of H's simples."""
    cx = sympy.Matrix([list(H.coordinates(x))])
    cy = sympy.Matrix([list(H.coordinates(y))])
    value = (cx * sympy.Matrix(euler_matrix(H.qp)) * cy.T)[0, 0]
    return int(value)


def sph_twist_class_action(H: Heart, simple, cls: Sequence[int], inverse: bool = False) -> ClassVector:
    """K-theory shadow of the spherical twist at S_i: cls ↦ cls − χ(S_i, cls)[S_i]."""
    s = H.simple_class(simple)
    pairing = euler_on_classes(H, s, cls)
    sign = 1 if inverse else -1
    return tuple(c + sign * pairing * a for c, a in zip(cls, s))


def _twist_rows(H: Heart, generator: ClassVector, rows: Iterable[ClassVector], inverse: bool) -> frozenset:
    sign = 1 if inverse else -1
    twisted = []
    for row in rows:
        pairing = euler_on_classes(H, generator, row)
        twisted.append(tuple(c + sign * pairing * a for c, a in zip(row, generator)))
    return frozenset(twisted)


# -- The A2 pentagon ------------------------------------------------------------------

def a2_quiver_with_potential() -> QuiverWithPotential:
    return QuiverWithPotential(Quiver.from_edges(["1", "2"], [("a", "1", "2")]))


def pentagon_hearts() -> Dict[str, Heart]:
    """H₀ … H₄ of the A2 pentagon, labelled as in the chamber picture."""
    h0 = standard_heart(a2_quiver_with_potential())
    h1 = simple_tilt(h0, "1")
    h3 = simple_tilt(h0, "2")
    h2 = simple_tilt(h1, "2")
    h4 = simple_tilt(h2, "1")
    return {"H0": h0, "H1": h1, "H2": h2, "H3": h3, "H4": h4}


_PENTAGON_CLASS_SETS = {label: heart.class_set() for label, heart in pentagon_hearts().items()}


def heart_chamber_label(H: Heart, max_word_length: int = 3) -> Optional[str]:
    """Pentagon label of H, directly or modulo a short word of spherical twists."""
    if H.rank != 2 or len(H.qp.quiver.arrows) != 1:
        return None
    for label, classes in _PENTAGON_CLASS_SETS.items():
        if H.class_set() == classes:
            return label
    generators = sorted(set(H.classes) | {(1, 0), (0, 1)})
    layer = {H.class_set()}
    seen = set(layer)
    for _ in range(max_word_length):
        following = set()
        for rows in sorted(layer, key=sorted):
            for generator, inverse in product(generators, (False, True)):
                twisted = _twist_rows(H, generator, rows, inverse)
                for label, classes in _PENTAGON_CLASS_SETS.items():
                    if twisted == classes:
                        return label
                if twisted not in seen:
                    seen.add(twisted)
                    following.add(twisted)
        layer = following
    return None


def chamber_of(Z: CentralChargeVector) -> str:
    """Chamber label of a central charge given on the simples of H₀(A2)."""
    if len(Z) != 2:
        raise InvalidCentralChargeError(detail="chamber_of expects the two A2 simples")
    for index, (re, im) in enumerate(Z.values):
        if re == 0 and im == 0:
            raise InvalidCentralChargeError(detail=f"Z(S_{index + 1}) = 0")
    tol = 0.0 if Z.backend == "exact" else Z.tolerance
    return chamber_from_imaginary_parts(Z.values[0][1], Z.values[1][1], tol)


def chamber_from_imaginary_parts(im1, im2, tolerance: float = 0.0) -> str:
    def sign(x) -> int:
        return 0 if abs(x) <= tolerance else (1 if x > 0 else -1)

    s1, s2, se = sign(im1), sign(im2), sign(im1 + im2)
    vanishing = [name for name, s in (("S1", s1), ("S2", s2), ("E", se)) if s == 0]
    if vanishing:
        return "wall:" + ",".join(vanishing)
    if s1 > 0 and s2 > 0:
        return "H0"
    if s1 > 0 and s2 < 0:
        return "H3"
    if s1 < 0 and s2 < 0:
        return "H4"
    return "H1" if se > 0 else "H2"


# -- Exchange graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class ExchangeEdge:
    source: int
    target: Optional[int]
    simple: str
    direction: Direction
    error: Optional[str] = None


@dataclass
class ExchangeGraphSlice:
    vertices: List[Heart] = field(default_factory=list)
    edges: List[ExchangeEdge] = field(default_factory=list)
    depths: List[int] = field(default_factory=list)
    boundary: List[int] = field(default_factory=list)

    def forward_edges(self) -> List[ExchangeEdge]:
        return [e for e in self.edges if e.direction is Direction.FORWARD and e.target is not None]

    def to_networkx(self, directed: bool = True) -> Union[nx.MultiDiGraph, nx.Graph]:
        graph = nx.MultiDiGraph() if directed else nx.Graph()
        graph.add_nodes_from(range(len(self.vertices)))
        for edge in self.forward_edges():
            if directed:
                graph.add_edge(edge.source, edge.target, simple=edge.simple)
            else:
                graph.add_edge(edge.source, edge.target)
        return graph

    def to_dot(self) -> str:
        lines = ["digraph exchange_graph {"]
        for index, heart in enumerate(self.vertices):
            classes = ";".join("(" + ",".join(str(c) for c in row) + ")" for row in heart.classes)
            label = heart_chamber_label(heart)
            name = f"{label}: {classes}" if label else classes
            shape = ", shape=box" if index in self.boundary else ""
            lines.append(f'  {index} [label="{name}"{shape}];')
        for edge in self.edges:
            if edge.target is None:
                continue
            lines.append(f'  {edge.source} -> {edge.target} [label="{edge.simple} {edge.direction.value}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _tilts(heart: Heart) -> List[Tuple[str, Direction, Union[Heart, StabLabError]]]:
    results = []
    for vertex in heart.vertices:
        for direction in (Direction.FORWARD, Direction.BACKWARD):
            try:
                results.append((vertex, direction, simple_tilt(heart, vertex, direction)))
            except (NonReducibleError, InvalidHeartError) as e:
                results.append((vertex, direction, e))
    return results


def exchange_graph(seed: Heart, max_depth: Optional[int] = None,
                   heart_filter: Optional[Callable[[Heart], bool]] = None,
                   threads: Optional[int] = None) -> ExchangeGraphSlice:
    """
    Breadth-first closure of seed under simple tilts.

    Vertices are numbered in discovery order; frontiers are expanded on a
    worker pool and merged in frontier order, so numbering never depends on
    the thread count. max_depth=None requires a filter that keeps the slice
    finite.
    """
    if max_depth is not None and max_depth < 0:
        raise OutOfRangeError(name="depth", value=max_depth, low=0, high="∞")
    if max_depth is None and heart_filter is None:
        raise OutOfRangeError(name="depth", value="unlimited", low=0, high="finite without a filter")
    keep = heart_filter or (lambda heart: True)
    graph = ExchangeGraphSlice([seed], [], [0], [])
    index: Dict[tuple, int] = {seed.key(): 0}
    frontier = [0]
    depth = 0
    with ThreadPoolExecutor(max_workers=threads or WORKER_THREADS) as executor:
        while frontier:
            expansions = list(executor.map(lambda i: _tilts(graph.vertices[i]), frontier))
            next_frontier = []
            for source, tilts in zip(frontier, expansions):
                for simple, direction, outcome in tilts:
                    if isinstance(outcome, StabLabError):
                        graph.edges.append(ExchangeEdge(source, None, simple, direction, str(outcome)))
                        if source not in graph.boundary:
                            graph.boundary.append(source)
                        continue
                    if not keep(outcome):
                        continue
                    key = outcome.key()
                    if key not in index:
                        if max_depth is not None and depth >= max_depth:
                            continue
                        index[key] = len(graph.vertices)
                        graph.vertices.append(outcome)
                        graph.depths.append(depth + 1)
                        next_frontier.append(index[key])
                    graph.edges.append(ExchangeEdge(source, index[key], simple, direction))
            frontier = next_frontier
            depth += 1
    logger.info("Built exchange graph slice", vertices=len(graph.vertices),
                edges=len(graph.edges), boundary=len(graph.boundary))
    return graph


# -- Stability conditions ---------------------------------------------------------------

@dataclass(frozen=True)
class StabilityCondition:
    """A heart with Z given on its simples (vertex order)."""
    heart: Heart
    Z: CentralChargeVector
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.Z) != self.heart.rank:
            raise InvalidCentralChargeError(detail="one value per simple is required")
        if HEART_NOT_UPDATED not in self.flags:
            tol = 0.0 if self.Z.backend == "exact" else self.Z.tolerance
            for index, (re, im) in enumerate(self.Z.values):
                if not in_closed_upper_half_plane(re, im, tol):
                    raise InvalidCentralChargeError(detail=f"Z of simple {index + 1} is not in the closed upper half-plane")

    def central_charge_on(self, cls: Sequence[int]) -> complex:
        return central_charge_on(self, cls)

    def phase_of(self, cls: Sequence[int]) -> float:
        """Phase in (0, 1] of a class of a nonzero object of the heart."""
        coordinates = self.heart.coordinates(cls)
        if not any(coordinates) or any(c < 0 for c in coordinates):
            raise ZeroClassError(cls=tuple(cls))
        value = self.central_charge_on(cls)
        if value.imag == 0 and value.real < 0:
            return 1.0
        return cmath.phase(value) / math.pi


def central_charge_on(sigma: StabilityCondition, cls: Sequence[int]) -> complex:
    """Z(cls) for cls ∈ K(D), through the inverse of the class matrix."""
    coordinates = sigma.heart.coordinates(cls)
    re, im = sigma.Z.evaluate(coordinates)
    return complex(float(re), float(im))


def second_type_walls(sigma: StabilityCondition) -> Tuple[str, List[str]]:
    """Simples of phase exactly 1; two or more at once is a higher-codimension wall."""
    at_phase_one = [vertex for vertex, (re, im) in zip(sigma.heart.vertices, sigma.Z.values)
                    if im == 0 and re < 0]
    if not at_phase_one:
        return "none", []
    if len(at_phase_one) == 1:
        return "wall", at_phase_one
    return "higher-codimension wall", at_phase_one


def c_action(sigma: StabilityCondition, lam: complex) -> StabilityCondition:
    """
    λ.σ: Z ↦ e^{−πiλ}Z as a function on K(D).

    The heart moves to H[⌊Re λ⌋] followed by forward tilts at simples whose
    value left H̄. A non-integer Re λ together with a nonzero Im λ keeps the
    heart and returns the flagged Z-only result.
    """
    lam = complex(lam)
    H = sigma.heart
    rotated = sigma.Z.rotated(lam)
    shift = math.floor(lam.real)
    if lam.real != shift and lam.imag != 0:
        logger.warning("Heart not updated for complex non-integer lambda", lam=str(lam))
        return StabilityCondition(H, rotated, (HEART_NOT_UPDATED,))
    sign = -1 if shift % 2 else 1
    heart = shift_heart(H, shift)
    values = rotated.scaled(1) if sign == 1 else CentralChargeVector(
        tuple((-re, -im) for re, im in rotated.values), rotated.backend, rotated.tolerance, strict=False)
    if lam.real == shift:
        return StabilityCondition(heart, CentralChargeVector(values.values, values.backend, values.tolerance))
    tolerance = sigma.Z.tolerance
    current = values.complex_values()
    for _ in range(MAX_TILT_STEPS):
        outside = [k for k, z in enumerate(current)
                   if not in_closed_upper_half_plane(z.real, z.imag, tolerance)]
        if not outside:
            return StabilityCondition(heart, CentralChargeVector.from_complex(current, tolerance=tolerance))
        k = min(outside, key=lambda i: (cmath.phase(current[i]), i))
        vertex = heart.vertices[k]
        quiver = heart.qp.quiver
        updated = list(current)
        for j, other in enumerate(heart.vertices):
            if j != k:
                updated[j] = current[j] + quiver.arrow_count(vertex, other) * current[k]
        updated[k] = -current[k]
        heart = simple_tilt(heart, vertex, Direction.FORWARD)
        current = updated
    logger.warning("Tilt budget exhausted", lam=str(lam), steps=MAX_TILT_STEPS)
    return StabilityCondition(H, rotated, (HEART_NOT_UPDATED,))


# -- Metric -------------------------------------------------------------------------

class HNData(NamedTuple):
    phi_minus: float
    phi_plus: float
    mass: float


class ProbeEntry(NamedTuple):
    cls: ClassVector
    first: HNData
    second: HNData


def _check_hn_data(sigma: StabilityCondition, cls: ClassVector, data: HNData) -> None:
    """HN data of an object of class cls must fit Z and, unless flagged, the heart of σ."""
    value = sigma.central_charge_on(cls)
    tolerance = _DATA_TOLERANCE * max(1.0, abs(value), data.mass)
    if data.phi_minus > data.phi_plus + _DATA_TOLERANCE:
        raise InvalidCentralChargeError(detail=f"φ⁻ > φ⁺ for class {cls}")
    if data.mass < abs(value) - tolerance:
        raise InvalidCentralChargeError(detail=f"mass {data.mass:.6g} of class {cls} is below |Z| = {abs(value):.6g}")
    if data.phi_plus - data.phi_minus <= _DATA_TOLERANCE:
        if abs(data.mass * cmath.exp(1j * math.pi * data.phi_minus) - value) > tolerance:
            raise InvalidCentralChargeError(detail=f"phase {data.phi_minus:.6g} and mass of class {cls} do not match Z")
    elif data.phi_plus - data.phi_minus < 1 and abs(value) > tolerance:
        turned = cmath.phase(value) / math.pi - data.phi_minus
        if data.phi_minus + turned % 2 > data.phi_plus + _DATA_TOLERANCE and turned % 2 < 2 - _DATA_TOLERANCE:
            raise InvalidCentralChargeError(detail=f"Z of class {cls} lies outside its phase range")
    if HEART_NOT_UPDATED in sigma.flags:
        return
    shift = math.ceil(data.phi_plus - _DATA_TOLERANCE) - 1
    if data.phi_minus <= shift + _DATA_TOLERANCE:
        return
    sign = -1 if shift % 2 else 1
    coordinates = sigma.heart.coordinates(cls)
    if not any(coordinates) or any(sign * c < 0 for c in coordinates):
        raise InvalidHeartError(detail=f"class {cls} with phases in ({shift}, {shift + 1}] is not in the heart shifted by {shift}")


def stab_metric(sigma1: StabilityCondition, sigma2: StabilityCondition,
                probe: Sequence[ProbeEntry]) -> float:
    """Probe distance after checking every entry against σ₁ (first) and σ₂ (second)."""
    for entry in probe:
        if len(entry.cls) not in (sigma1.heart.rank, sigma2.heart.rank):
            raise ZeroClassError(cls=entry.cls)
        _check_hn_data(sigma1, entry.cls, entry.first)
        _check_hn_data(sigma2, entry.cls, entry.second)
    return probe_distance(probe)


def probe_distance(probe: Sequence[ProbeEntry]) -> float:
    """sup over the probe of |Δφ⁻|, |Δφ⁺| and |log(m₂/m₁)|."""
    if not probe:
        raise OutOfRangeError(name="probe size", value=0, low=1, high="∞")
    distance = 0.0
    for entry in probe:
        if not entry.first.mass > 0 or not entry.second.mass > 0:
            raise InvalidCentralChargeError(detail=f"zero mass for class {entry.cls}")
        distance = max(
            distance,
            abs(entry.second.phi_minus - entry.first.phi_minus),
            abs(entry.second.phi_plus - entry.first.phi_plus),
            abs(math.log(entry.second.mass / entry.first.mass)),
        )
    return distance


def c_action_probe(sigma: StabilityCondition, lam: complex, semistable_classes: Sequence[Sequence[int]],
                   shifts: Iterable[int] = (-1, 0, 1)) -> List[ProbeEntry]:
    """
    Probe entries for (σ, λ.σ): each σ-semistable class and its shifts keep
    their objects, with phases lowered by Re λ and masses read from the
    central charge that c_action(σ, λ) returns.
    """
    lam = complex(lam)
    moved = c_action(sigma, lam)
    entries = []
    for cls in semistable_classes:
        base = sigma.phase_of(cls)
        for k in shifts:
            shifted = tuple(-c for c in cls) if k % 2 else tuple(cls)
            phi = base + k
            entries.append(ProbeEntry(
                shifted,
                HNData(phi, phi, abs(sigma.central_charge_on(shifted))),
                HNData(phi - lam.real, phi - lam.real, abs(moved.central_charge_on(shifted))),
            ))
    return entries


def probe_from_representations(reps: Iterable[Representation], sigma1: StabilityCondition,
                               sigma2: StabilityCondition) -> List[ProbeEntry]:
    """Probe entries from HN filtrations of representations of the standard heart."""
    entries = []
    for sigma in (sigma1, sigma2):
        if any(row != tuple(int(i == j) for j in range(sigma.heart.rank)) for i, row in enumerate(sigma.heart.classes)):
            raise InvalidHeartError(detail="representation probes need the standard heart")
    for rep in reps:
        data = []
        for sigma in (sigma1, sigma2):
            factors = hn_filtration(rep, sigma.Z)
            mass = sum(abs(sigma.Z.as_complex(f.cls)) for f in factors)
            data.append(HNData(factors[-1].phase, factors[0].phase, mass))
        entries.append(ProbeEntry(rep.dim, data[0], data[1]))
    return entries


# -- Support property and walls of marginal stability --------------------------------

@dataclass(frozen=True)
class SupportReport:
    constant: Union[Fraction, float]
    norm: str
    ratios: Tuple[Tuple[ClassVector, float], ...]
    quadratic_form: Tuple[Tuple[ClassVector, float], ...]


def _exact_sqrt(value: Fraction) -> Union[Fraction, float]:
    num, den = value.numerator, value.denominator
    root_num, root_den = math.isqrt(num), math.isqrt(den)
    if root_num * root_num == num and root_den * root_den == den:
        return Fraction(root_num, root_den)
    return math.sqrt(value)


def support_constant(sigma: StabilityCondition, semistable_classes: Sequence[Sequence[int]],
                     norm: str = "euclidean") -> SupportReport:
    """min |Z(γ)|/‖γ‖ over the classes, with the quadratic form |Z(γ)|² − c²‖γ‖² per class."""
    if not semistable_classes:
        raise OutOfRangeError(name="class list size", value=0, low=1, high="∞")
    if norm not in ("euclidean", "sup"):
        raise OutOfRangeError(name="norm", value=norm, low="euclidean", high="sup")
    exact = sigma.Z.backend == "exact"
    squared = []
    for cls in semistable_classes:
        cls = tuple(int(c) for c in cls)
        if not any(cls):
            raise ZeroClassError(cls=cls)
        coordinates = sigma.heart.coordinates(cls)
        re, im = sigma.Z.evaluate(coordinates if exact else [float(c) for c in coordinates])
        norm_sq = sum(c * c for c in cls) if norm == "euclidean" else max(abs(c) for c in cls) ** 2
        value = (re * re + im * im) / norm_sq if exact else (float(re) ** 2 + float(im) ** 2) / norm_sq
        squared.append((cls, value, norm_sq))
    minimum = min(value for _, value, _ in squared)
    constant = _exact_sqrt(Fraction(minimum)) if exact else math.sqrt(minimum)
    ratios = tuple((cls, math.sqrt(float(value))) for cls, value, _ in squared)
    form = tuple((cls, float(value * norm_sq - minimum * norm_sq)) for cls, value, norm_sq in squared)
    return SupportReport(constant, norm, ratios, form)


def marginal_wall_check(Z: CentralChargeVector, alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """True iff Z(α)/Z(β) is real."""
    alpha, beta = tuple(alpha), tuple(beta)
    minors = [alpha[i] * beta[j] - alpha[j] * beta[i] for i in range(len(alpha)) for j in range(i + 1, len(alpha))]
    if not any(alpha) or not any(beta) or not any(minors):
        raise ProportionalClassesError(alpha=alpha, beta=beta)
    re_b, im_b = Z.evaluate(beta)
    if re_b == 0 and im_b == 0:
        raise ZeroClassError(cls=beta)
    re_a, im_a = Z.evaluate(alpha)
    cross = re_a * im_b - im_a * re_b
    if Z.backend == "exact":
        return cross == 0
    scale = math.hypot(float(re_a), float(im_a)) * math.hypot(float(re_b), float(im_b))
    return abs(cross) <= Z.tolerance * max(scale, 1.0)
