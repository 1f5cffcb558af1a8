"""
Quivers with potential.

Paths are tuples of arrow ids in traversal order: ``("a", "b")`` means
"first a, then b" and requires ``t(a) == s(b)``. Coefficients are exact
``Fraction`` values. All objects are immutable once built.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import sympy

from .config import MAX_REDUCTION_ROUNDS
from .error_handler import (
    GinzburgPreconditionError,
    InvalidQuiverError,
    NonReducibleError,
    OutOfRangeError,
    UnknownArrowError,
    UnknownVertexError,
)
from .logging_handler import StructuredLogger

logger = StructuredLogger(__name__)

Path = Tuple[str, ...]
Coefficient = Union[Fraction, int, str]


def as_fraction(value: Coefficient) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def canonical_rotation(word: Sequence) -> tuple:
    """Lexicographically minimal rotation of a cyclic word."""
    word = tuple(word)
    if not word:
        return word
    return min(word[k:] + word[:k] for k in range(len(word)))


@dataclass(frozen=True)
class PathSum:
    """A finite formal sum of paths with rational coefficients, kept normalised."""
    terms: Tuple[Tuple[Path, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Path, Coefficient]) -> "PathSum":
        cleaned = {}
        for path, coeff in mapping.items():
            coeff = as_fraction(coeff)
            if coeff != 0:
                cleaned[tuple(path)] = coeff
        return cls(tuple(sorted(cleaned.items(), key=lambda item: (len(item[0]), item[0]))))

    @classmethod
    def single(cls, path: Sequence[str], coeff: Coefficient = 1) -> "PathSum":
        return cls.from_mapping({tuple(path): coeff})

    def as_dict(self) -> Dict[Path, Fraction]:
        return dict(self.terms)

    def paths(self) -> List[Path]:
        return [path for path, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PathSum") -> "PathSum":
        merged = defaultdict(Fraction, self.as_dict())
        for path, coeff in other.terms:
            merged[path] += coeff
        return PathSum.from_mapping(merged)

    def __neg__(self) -> "PathSum":
        return self.scale(-1)

    def __sub__(self, other: "PathSum") -> "PathSum":
        return self + (-other)

    def scale(self, factor: Coefficient) -> "PathSum":
        factor = as_fraction(factor)
        return PathSum.from_mapping({path: coeff * factor for path, coeff in self.terms})

    def times(self, other: "PathSum") -> "PathSum":
        """Concatenation product (self first, then other)."""
        product = defaultdict(Fraction)
        for left, a in self.terms:
            for right, b in other.terms:
                product[left + right] += a * b
        return PathSum.from_mapping(product)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for path, coeff in self.terms:
            word = "".join(path) if all(len(a) == 1 for a in path) else ".".join(path)
            parts.append(word if coeff == 1 else f"{coeff}*{word}")
        return " + ".join(parts)


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """Finite quiver without loops or 2-cycles; validated on construction."""
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(
            a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2])) for a in self.arrows
        ))
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidQuiverError(detail="duplicate vertex ids")
        known = set(self.vertices)
        ids = set()
        pairs = set()
        for arrow in self.arrows:
            if arrow.id in ids:
                raise InvalidQuiverError(detail=f"duplicate arrow id {arrow.id}")
            ids.add(arrow.id)
            if arrow.source not in known or arrow.target not in known:
                raise InvalidQuiverError(detail=f"arrow {arrow.id} has an undeclared endpoint")
            if arrow.source == arrow.target:
                raise InvalidQuiverError(detail=f"arrow {arrow.id} is a loop")
            pairs.add((arrow.source, arrow.target))
        for source, target in pairs:
            if (target, source) in pairs:
                raise InvalidQuiverError(detail=f"2-cycle between {source} and {target}")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Tuple[str, object, object]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(str(a), str(s), str(t)) for a, s, t in edges))

    def arrow(self, arrow_id: str) -> Arrow:
        for arrow in self.arrows:
            if arrow.id == arrow_id:
                return arrow
        raise UnknownArrowError(arrow=arrow_id)

    def has_arrow(self, arrow_id: str) -> bool:
        return any(arrow.id == arrow_id for arrow in self.arrows)

    def index(self, vertex) -> int:
        try:
            return self.vertices.index(str(vertex))
        except ValueError:
            raise UnknownVertexError(vertex=vertex) from None

    def arrow_count(self, source, target) -> int:
        source, target = str(source), str(target)
        return sum(1 for a in self.arrows if a.source == source and a.target == target)

    def incoming(self, vertex) -> List[Arrow]:
        return [a for a in self.arrows if a.target == str(vertex)]

    def outgoing(self, vertex) -> List[Arrow]:
        return [a for a in self.arrows if a.source == str(vertex)]

    def arrow_matrix(self) -> List[List[int]]:
        """q[i][j] = number of arrows from vertex i to vertex j (vertex order)."""
        return [[self.arrow_count(i, j) for j in self.vertices] for i in self.vertices]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.id)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())

    def is_cycle(self, word: Sequence[str]) -> bool:
        if not word:
            return False
        arrows = [self.arrow(a) for a in word]
        return all(arrows[k].target == arrows[(k + 1) % len(arrows)].source for k in range(len(arrows)))


@dataclass(frozen=True)
class Potential:
    """Finite sum of cycles, stored by canonical rotation with merged coefficients."""
    terms: Tuple[Tuple[Fraction, Path], ...] = ()

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Coefficient, Sequence[str]]]) -> "Potential":
        merged: Dict[Path, Fraction] = defaultdict(Fraction)
        for coeff, word in terms:
            word = tuple(str(a) for a in word)
            if not word:
                raise InvalidQuiverError(detail="empty cycle in potential")
            merged[canonical_rotation(word)] += as_fraction(coeff)
        ordered = sorted(((c, w) for w, c in merged.items() if c != 0), key=lambda t: (len(t[1]), t[1]))
        return cls(tuple(ordered))

    @classmethod
    def zero(cls) -> "Potential":
        return cls(())

    def is_zero(self) -> bool:
        return not self.terms

    def arrows_used(self) -> set:
        return {a for _, word in self.terms for a in word}

    def as_dict(self) -> Dict[Path, Fraction]:
        return {word: coeff for coeff, word in self.terms}

    def __str__(self) -> str:
        return str(PathSum.from_mapping(self.as_dict()))


@dataclass(frozen=True)
class QuiverWithPotential:
    quiver: Quiver
    potential: Potential = field(default_factory=Potential.zero)

    def __post_init__(self):
        for coeff, word in self.potential.terms:
            for arrow_id in word:
                if not self.quiver.has_arrow(arrow_id):
                    raise UnknownArrowError(arrow=arrow_id)
            if not self.quiver.is_cycle(word):
                raise InvalidQuiverError(detail=f"potential term {'.'.join(word)} is not a cycle")
            if len(word) < 3:
                raise InvalidQuiverError(detail="potential terms must have length at least 3")

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    def cyclic_derivative(self, arrow_id: str) -> PathSum:
        return cyclic_derivative(self.potential, arrow_id, self.quiver)


@dataclass(frozen=True)
class GradedArrow:
    id: str
    source: str
    target: str
    degree: int


@dataclass(frozen=True)
class GradedQuiver:
    """Graded double quiver with loops and the differential on generators."""
    vertices: Tuple[str, ...]
    arrows: Tuple[GradedArrow, ...]
    differential: Tuple[Tuple[str, PathSum], ...]
    N: int

    def degree_of(self, arrow_id: str) -> int:
        for arrow in self.arrows:
            if arrow.id == arrow_id:
                return arrow.degree
        raise UnknownArrowError(arrow=arrow_id)

    def path_degree(self, path: Sequence[str]) -> int:
        return sum(self.degree_of(a) for a in path)

    def d_generator(self, arrow_id: str) -> PathSum:
        for name, value in self.differential:
            if name == arrow_id:
                return value
        raise UnknownArrowError(arrow=arrow_id)

    def d(self, combination: PathSum) -> PathSum:
        """Extend the differential by linearity and the graded Leibniz rule."""
        total = PathSum()
        for path, coeff in combination.terms:
            sign = 1
            for position, arrow_id in enumerate(path):
                image = self.d_generator(arrow_id)
                if not image.is_zero():
                    left = PathSum.single(path[:position])
                    right = PathSum.single(path[position + 1:])
                    total = total + left.times(image).times(right).scale(coeff * sign)
                if self.degree_of(arrow_id) % 2:
                    sign = -sign
        return total

    def degree_zero_relations(self) -> List[PathSum]:
        """Images under d of the degree −1 generators: the relations cut out by H⁰."""
        return [value for arrow in self.arrows if arrow.degree == -1
                for name, value in self.differential if name == arrow.id and not value.is_zero()]

    def hom_dimensions(self, i, j) -> Dict[int, int]:
        """dim Hom^k(S_i, S_j): identity in degree 0, graded arrows i→j of degree 1−k."""
        i, j = str(i), str(j)
        dims: Dict[int, int] = defaultdict(int)
        if i == j:
            dims[0] += 1
        for arrow in self.arrows:
            if arrow.source == i and arrow.target == j:
                dims[1 - arrow.degree] += 1
        return dict(dims)


# -- Cyclic calculus ---------------------------------------------------------

def cyclic_derivative(potential: Potential, arrow_id: str, quiver: Optional[Quiver] = None) -> PathSum:
    """∂_a W: every occurrence u·a·v of a in a cycle contributes coefficient·v·u."""
    if quiver is not None and not quiver.has_arrow(arrow_id):
        raise UnknownArrowError(arrow=arrow_id)
    return _derivative(potential.as_dict(), arrow_id)


def _derivative(cycles: Mapping[Path, Fraction], arrow_id: str) -> PathSum:
    result: Dict[Path, Fraction] = defaultdict(Fraction)
    for word, coeff in cycles.items():
        for position, letter in enumerate(word):
            if letter == arrow_id:
                result[word[position + 1:] + word[:position]] += coeff
    return PathSum.from_mapping(result)


def jacobian_relations(qp: QuiverWithPotential) -> List[PathSum]:
    """{∂_a W : a ∈ Q₁}, dropping zero derivatives; arrow order."""
    relations = []
    for arrow in qp.quiver.arrows:
        relation = qp.cyclic_derivative(arrow.id)
        if not relation.is_zero():
            relations.append(relation)
    return relations


def jacobian_algebra_basis(qp: QuiverWithPotential, max_length: Optional[int] = None) -> List[Tuple[str, Path]]:
    """
    Paths (start vertex, arrows) spanning kQ/∂W when every relation is a monomial.

    Lazy paths appear as (vertex, ()). Raises OutOfRangeError when paths of
    length max_length survive, i.e. the algebra looks infinite-dimensional.
    """
    relations = jacobian_relations(qp)
    monomials = []
    for relation in relations:
        if len(relation.terms) != 1:
            raise InvalidQuiverError(detail=f"relation {relation} is not a monomial")
        monomials.append(relation.terms[0][0])
    limit = max_length if max_length is not None else 2 * len(qp.quiver.arrows) + 2

    def allowed(path: Path) -> bool:
        return not any(
            path[k:k + len(m)] == m for m in monomials for k in range(len(path) - len(m) + 1)
        )

    basis: List[Tuple[str, Path]] = [(v, ()) for v in qp.vertices]
    layer = [(a.source, (a.id,)) for a in qp.quiver.arrows if allowed((a.id,))]
    length = 1
    while layer:
        if length > limit:
            raise OutOfRangeError(name="path length", value=length, low=0, high=limit)
        basis.extend(layer)
        extended = []
        for start, path in layer:
            end = qp.quiver.arrow(path[-1]).target
            for arrow in qp.quiver.outgoing(end):
                candidate = path + (arrow.id,)
                if allowed(candidate):
                    extended.append((start, candidate))
        layer = extended
        length += 1
    return basis


# -- Mutation ------------------------------------------------------------------

def _fresh(name: str, used: set) -> str:
    while name in used:
        name += "'"
    used.add(name)
    return name


def _reverse_name(arrow_id: str) -> str:
    return arrow_id[:-1] if arrow_id.endswith("*") else arrow_id + "*"


def _substitute(cycles: Mapping[Path, Fraction], replacements: Mapping[str, PathSum]) -> Dict[Path, Fraction]:
    result: Dict[Path, Fraction] = defaultdict(Fraction)
    for word, coeff in cycles.items():
        expansion = PathSum.single((), coeff)
        for letter in word:
            factor = replacements.get(letter, PathSum.single((letter,)))
            expansion = expansion.times(factor)
        for path, value in expansion.terms:
            if path:
                result[canonical_rotation(path)] += value
    return {w: c for w, c in result.items() if c != 0}


def _reduce_two_cycles(arrows: Dict[str, Tuple[str, str]], cycles: Dict[Path, Fraction]) -> None:
    """
    Cancel 2-cycles carrying a quadratic term, in place; raise if one survives.

    For W = s·cd + cX + dY + …, the arrows are shifted c ↦ c − Y/s and then
    d ↦ d − X/s until no other term mentions them, leaving s·cd − XY/s + ….
    The trivial part s·cd and both arrows are then dropped.
    """
    rounds = 0
    while True:
        quadratic = sorted(w for w, c in cycles.items() if len(w) == 2 and c != 0)
        if not quadratic:
            break
        pair = quadratic[0]
        c_id, d_id = pair
        scale = cycles[pair]
        while any(c_id in w or d_id in w for w in cycles if w != pair):
            rounds += 1
            if rounds > MAX_REDUCTION_ROUNDS:
                raise NonReducibleError(detail=f"no fixed point after {MAX_REDUCTION_ROUNDS} rounds")
            for moved, partner in ((c_id, d_id), (d_id, c_id)):
                rest = {w: v for w, v in cycles.items() if w != pair}
                shift = _derivative(rest, partner)
                if shift.is_zero():
                    continue
                substituted = _substitute(cycles, {moved: PathSum.single((moved,)) - shift.scale(1 / scale)})
                cycles.clear()
                cycles.update(substituted)
        if cycles.pop(pair, 0) != scale:
            raise NonReducibleError(detail=f"quadratic term {''.join(pair)} changed during reduction")
        del arrows[c_id]
        del arrows[d_id]
        logger.debug("Cancelled 2-cycle", arrows=[c_id, d_id], rounds=rounds)
    pairs = {(s, t) for s, t in arrows.values()}
    for source, target in sorted(pairs):
        if source == target:
            raise NonReducibleError(detail=f"loop at vertex {source}")
        if (target, source) in pairs:
            raise NonReducibleError(detail=f"2-cycle between {source} and {target} has no quadratic term")


def mutate(qp: QuiverWithPotential, vertex) -> QuiverWithPotential:
    """Mutation μ_i: composite arrows, reversal at i, new potential W′ + W″, then reduction."""
    k = str(vertex)
    if k not in qp.vertices:
        raise UnknownVertexError(vertex=vertex)
    quiver = qp.quiver
    used = {a.id for a in quiver.arrows if k not in (a.source, a.target)}
    incoming = quiver.incoming(k)
    outgoing = quiver.outgoing(k)

    arrows: Dict[str, Tuple[str, str]] = {}
    reverse: Dict[str, str] = {}
    for arrow in quiver.arrows:
        if k in (arrow.source, arrow.target):
            reverse[arrow.id] = _fresh(_reverse_name(arrow.id), used)
            arrows[reverse[arrow.id]] = (arrow.target, arrow.source)
        else:
            arrows[arrow.id] = (arrow.source, arrow.target)
    composite: Dict[Tuple[str, str], str] = {}
    for a in incoming:
        for b in outgoing:
            composite[(a.id, b.id)] = _fresh(f"[{a.id}{b.id}]", used)
            arrows[composite[(a.id, b.id)]] = (a.source, b.target)

    cycles: Dict[Path, Fraction] = defaultdict(Fraction)
    for coeff, word in qp.potential.terms:
        # rotate so the word never starts inside a composition through k
        start = next((p for p, a in enumerate(word) if quiver.arrow(a).source != k), None)
        if start is None:
            raise NonReducibleError(detail="potential term is a loop at the mutated vertex")
        word = word[start:] + word[:start]
        rewritten = []
        position = 0
        while position < len(word):
            letter = word[position]
            if quiver.arrow(letter).target == k:
                rewritten.append(composite[(letter, word[position + 1])])
                position += 2
            else:
                rewritten.append(letter)
                position += 1
        cycles[canonical_rotation(rewritten)] += coeff
    for (a_id, b_id), ab in composite.items():
        cycles[canonical_rotation((ab, reverse[b_id], reverse[a_id]))] += 1
    cycles = {w: c for w, c in cycles.items() if c != 0}

    _reduce_two_cycles(arrows, cycles)
    new_quiver = Quiver(qp.vertices, tuple(Arrow(i, s, t) for i, (s, t) in arrows.items()))
    new_potential = Potential.from_terms((c, w) for w, c in cycles.items())
    logger.debug("Mutated quiver with potential", vertex=k,
                 arrows=len(new_quiver.arrows), terms=len(new_potential.terms))
    return QuiverWithPotential(new_quiver, new_potential)


def mutate_sequence(qp: QuiverWithPotential, word: Iterable) -> QuiverWithPotential:
    for vertex in word:
        qp = mutate(qp, vertex)
    return qp


def exchange_matrix(qp: QuiverWithPotential) -> List[List[int]]:
    """b_ij = q_ij − q_ji."""
    q = qp.quiver.arrow_matrix()
    n = len(q)
    return [[q[i][j] - q[j][i] for j in range(n)] for i in range(n)]


# -- Isomorphism -------------------------------------------------------------

def _vertex_orders(quiver: Quiver) -> Iterator[Tuple[int, ...]]:
    """Vertex orderings compatible with an isomorphism-invariant grouping."""
    def signature(index: int):
        vertex = quiver.vertices[index]
        outs = sorted((len(quiver.outgoing(a.target)), len(quiver.incoming(a.target))) for a in quiver.outgoing(vertex))
        ins = sorted((len(quiver.outgoing(a.source)), len(quiver.incoming(a.source))) for a in quiver.incoming(vertex))
        return (len(outs), len(ins), tuple(outs), tuple(ins))

    groups: Dict[tuple, List[int]] = defaultdict(list)
    for index in range(len(quiver.vertices)):
        groups[signature(index)].append(index)
    ordered = [groups[key] for key in sorted(groups)]
    for choice in itertools.product(*(itertools.permutations(g) for g in ordered)):
        yield tuple(itertools.chain.from_iterable(choice))


def _labellings(quiver: Quiver) -> Iterator[Tuple[Tuple[int, ...], tuple, Dict[str, int]]]:
    """(vertex order, arrow key, arrow labels) for every candidate relabelling."""
    for order in _vertex_orders(quiver):
        position = {quiver.vertices[original]: new for new, original in enumerate(order)}
        groups: Dict[Tuple[int, int], List[str]] = defaultdict(list)
        for arrow in quiver.arrows:
            groups[(position[arrow.source], position[arrow.target])].append(arrow.id)
        pairs = sorted(groups)
        arrow_key = tuple(pair for pair in pairs for _ in groups[pair])
        for assignment in itertools.product(*(itertools.permutations(groups[p]) for p in pairs)):
            yield order, arrow_key, {arrow_id: n for n, arrow_id in enumerate(itertools.chain.from_iterable(assignment))}


def _relabelled_terms(potential: Potential, label: Mapping[str, int]) -> Dict[tuple, Fraction]:
    return {canonical_rotation(tuple(label[a] for a in word)): coeff for coeff, word in potential.terms}


def canonical_form(qp: QuiverWithPotential,
                   decorate: Optional[Callable[[Tuple[int, ...]], tuple]] = None) -> Tuple[tuple, Tuple[int, ...]]:
    """
    Minimal labelling key over vertex orderings and parallel-arrow assignments.

    Returns (key, order) where order[k] is the original index of the vertex
    placed at position k. decorate(order) appends extra data (e.g. classes).
    """
    best: Optional[Tuple[tuple, Tuple[int, ...]]] = None
    extras: Dict[Tuple[int, ...], tuple] = {}
    for order, arrow_key, label in _labellings(qp.quiver):
        if best is not None and arrow_key > best[0][1]:
            continue
        if order not in extras:
            extras[order] = decorate(order) if decorate else ()
        potential_key = tuple(sorted(_relabelled_terms(qp.potential, label).items()))
        key = (len(qp.quiver.vertices), arrow_key, potential_key, extras[order])
        if best is None or key < best[0]:
            best = (key, order)
    return best


def _rescaling_exists(reference: Mapping[tuple, Fraction], other: Mapping[tuple, Fraction], arrows: int) -> bool:
    """
    Whether scalars λ_a ∈ ℂ* on the arrows turn the coefficients of `reference`
    into those of `other` (same cycles). Every integer relation n between the
    rows of the cycle-arrow incidence matrix must give Π (other/reference)^n = 1.
    """
    words = sorted(reference)
    if not words:
        return True
    incidence = sympy.Matrix([[word.count(a) for a in range(arrows)] for word in words])
    for relation in incidence.T.nullspace():
        denominator = math.lcm(*(int(entry.q) for entry in relation))
        product = Fraction(1)
        for word, entry in zip(words, relation):
            product *= (other[word] / reference[word]) ** int(entry * denominator)
        if product != 1:
            return False
    return True


def _equivalent_up_to_rescaling(first: QuiverWithPotential, second: QuiverWithPotential) -> bool:
    reference = None
    for _, arrow_key, label in _labellings(first.quiver):
        terms = _relabelled_terms(first.potential, label)
        key = (arrow_key, tuple(sorted(terms)))
        if reference is None or key < reference[0]:
            reference = (key, terms)
    for _, arrow_key, label in _labellings(second.quiver):
        terms = _relabelled_terms(second.potential, label)
        if (arrow_key, tuple(sorted(terms))) == reference[0] and \
                _rescaling_exists(reference[1], terms, len(first.quiver.arrows)):
            return True
    return False


def is_isomorphic(first: QuiverWithPotential, second: QuiverWithPotential, rescaling: bool = False) -> bool:
    """
    Isomorphism of quivers with potential (equal reduced potentials after relabelling).

    With rescaling=True the arrows may also be multiplied by nonzero scalars,
    which is the freedom left after mutating twice at the same vertex.
    """
    if len(first.vertices) != len(second.vertices) or len(first.quiver.arrows) != len(second.quiver.arrows):
        return False
    if canonical_form(first)[0] == canonical_form(second)[0]:
        return True
    return rescaling and _equivalent_up_to_rescaling(first, second)


def is_nondegenerate_to_depth(qp: QuiverWithPotential, depth: int) -> bool:
    """Bounded certificate: every mutation word of length ≤ depth succeeds."""
    if depth < 0:
        raise OutOfRangeError(name="depth", value=depth, low=0, high="∞")
    frontier = {canonical_form(qp)[0]: qp}
    for level in range(depth):
        next_frontier = {}
        for current in frontier.values():
            for vertex in current.vertices:
                try:
                    mutated = mutate(current, vertex)
                except (NonReducibleError, InvalidQuiverError) as e:
                    logger.info("Degenerate mutation found", depth=level + 1, vertex=vertex, reason=str(e))
                    return False
                next_frontier.setdefault(canonical_form(mutated)[0], mutated)
        frontier = next_frontier
    return True


# -- Ginzburg graded quiver and Euler form ------------------------------------

def ginzburg_graded_quiver(qp: QuiverWithPotential, N: int = 3) -> GradedQuiver:
    if N < 3:
        raise GinzburgPreconditionError(detail=f"N={N} < 3")
    if N > 3 and not qp.quiver.is_acyclic():
        raise GinzburgPreconditionError(detail=f"N={N} > 3 requires an acyclic quiver")
    used = {a.id for a in qp.quiver.arrows}
    arrows: List[GradedArrow] = []
    differential: List[Tuple[str, PathSum]] = []
    star: Dict[str, str] = {}
    for arrow in qp.quiver.arrows:
        arrows.append(GradedArrow(arrow.id, arrow.source, arrow.target, 0))
        differential.append((arrow.id, PathSum()))
    for arrow in qp.quiver.arrows:
        star[arrow.id] = _fresh(arrow.id + "*", used)
        arrows.append(GradedArrow(star[arrow.id], arrow.target, arrow.source, -(N - 2)))
        differential.append((star[arrow.id], qp.cyclic_derivative(arrow.id)))
    for vertex in qp.vertices:
        loop = _fresh(f"e{vertex}", used)
        arrows.append(GradedArrow(loop, vertex, vertex, -(N - 1)))
        value: Dict[Path, Fraction] = defaultdict(Fraction)
        for arrow in qp.quiver.arrows:
            if arrow.source == vertex:
                value[(arrow.id, star[arrow.id])] += 1
            if arrow.target == vertex:
                value[(star[arrow.id], arrow.id)] -= 1
        differential.append((loop, PathSum.from_mapping(value)))
    return GradedQuiver(qp.vertices, tuple(arrows), tuple(differential), N)


def euler_form_cy3(qp: QuiverWithPotential, i, j) -> int:
    """χ(S_i, S_j) = q_ji − q_ij in the 3-Calabi–Yau category."""
    quiver = qp.quiver
    quiver.index(i)
    quiver.index(j)
    return quiver.arrow_count(j, i) - quiver.arrow_count(i, j)


def euler_matrix(qp: QuiverWithPotential) -> List[List[int]]:
    return [[euler_form_cy3(qp, i, j) for j in qp.vertices] for i in qp.vertices]


def euler_pairing(qp: QuiverWithPotential, x: Sequence[int], y: Sequence[int]) -> int:
    """Bilinear extension of χ to ℤⁿ in the simple basis of qp."""
    matrix = euler_matrix(qp)
    return sum(x[a] * matrix[a][b] * y[b] for a in range(len(x)) for b in range(len(y)))
