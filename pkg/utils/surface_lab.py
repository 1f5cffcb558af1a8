"""
Marked-surface bookkeeping and triangulations of the disc.

Boundary marked points of the disc are labelled 0..m−1 clockwise. An arc is
a pair (i, j) with i < j of non-adjacent labels. In a triangle a < b < c the
sides run clockwise as (a, b), (b, c), (c, a), and the quiver has an arrow
from one side to the next whenever both sides are arcs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .config import MAX_FLIP_GRAPH_VERTICES, MAX_POLYGON_VERTICES
from .error_handler import InvalidTriangulationError, OutOfRangeError
from .heart_graph import exchange_graph, is_intermediate, standard_heart
from .logging_handler import StructuredLogger
from .qp_core import Arrow, Potential, Quiver, QuiverWithPotential, is_isomorphic, mutate

logger = StructuredLogger(__name__)

Arc = Tuple[int, int]


@dataclass(frozen=True)
class MarkedSurfaceData:
    genus: int
    boundary: Tuple[int, ...]
    weights: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(int(m) for m in self.boundary))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if self.genus < 0:
            raise OutOfRangeError(name="genus", value=self.genus, low=0, high="∞")
        if not self.boundary:
            raise OutOfRangeError(name="boundary components", value=0, low=1, high="∞")
        if any(m < 1 for m in self.boundary):
            raise OutOfRangeError(name="marked points", value=min(self.boundary), low=1, high="∞")
        if any(w < 1 for w in self.weights):
            raise OutOfRangeError(name="weight", value=min(self.weights), low=1, high="∞")


def check_compatibility(d: MarkedSurfaceData) -> bool:
    """Σ w_i − Σ (M_j + 2) = 4g − 4."""
    return sum(d.weights) - sum(m + 2 for m in d.boundary) == 4 * d.genus - 4


def decoration_count(genus: int, boundary: Sequence[int], weight: int = 1) -> Optional[int]:
    """Number r of decorations of constant weight the compatibility condition forces, if integral."""
    MarkedSurfaceData(genus, tuple(boundary))
    total = 4 * genus - 4 + sum(m + 2 for m in boundary)
    if weight < 1 or total < 0 or total % weight:
        return None
    return total // weight


def catalan(k: int) -> int:
    """C_k by the recurrence C_{j+1} = Σ C_i C_{j−i}."""
    table = [1]
    for j in range(k):
        table.append(sum(table[i] * table[j - i] for i in range(j + 1)))
    return table[k]


def _crosses(first: Arc, second: Arc) -> bool:
    (i, j), (k, l) = first, second
    return i < k < j < l or k < i < l < j


@dataclass(frozen=True)
class DiscTriangulation:
    m: int
    arcs: Tuple[Arc, ...]

    def __post_init__(self):
        if self.m < 3:
            raise InvalidTriangulationError(detail=f"m={self.m} < 3")
        arcs = tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in self.arcs))
        object.__setattr__(self, "arcs", arcs)
        for i, j in arcs:
            if not 0 <= i < j < self.m or j - i in (1, self.m - 1):
                raise InvalidTriangulationError(detail=f"({i},{j}) is not a diagonal of the {self.m}-gon")
        if len(set(arcs)) != len(arcs):
            raise InvalidTriangulationError(detail="repeated arc")
        for first, second in combinations(arcs, 2):
            if _crosses(first, second):
                raise InvalidTriangulationError(detail=f"arcs {first} and {second} cross")
        if len(arcs) != self.m - 3:
            raise InvalidTriangulationError(detail=f"{len(arcs)} arcs, a triangulation has {self.m - 3}")

    def is_side(self, a: int, b: int) -> bool:
        a, b = sorted((a, b))
        return b - a in (1, self.m - 1) or (a, b) in self.arcs

    def faces(self) -> List[Tuple[int, int, int]]:
        return [t for t in combinations(range(self.m), 3)
                if self.is_side(t[0], t[1]) and self.is_side(t[1], t[2]) and self.is_side(t[0], t[2])]

    def internal_triangles(self) -> List[Tuple[int, int, int]]:
        return [(a, b, c) for a, b, c in self.faces()
                if {(a, b), (b, c), (a, c)} <= set(self.arcs)]


def arc_id(arc: Arc) -> str:
    return f"{arc[0]}-{arc[1]}"


def enumerate_triangulations(m: int) -> List[DiscTriangulation]:
    """All triangulations of the convex m-gon, sorted by arc list."""
    if not 3 <= m <= MAX_POLYGON_VERTICES:
        raise OutOfRangeError(name="m", value=m, low=3, high=MAX_POLYGON_VERTICES)

    def split(first: int, last: int) -> List[Tuple[Arc, ...]]:
        if last - first < 2:
            return [()]
        result = []
        for apex in range(first + 1, last):
            own = tuple(a for a in ((first, apex), (apex, last)) if a[1] - a[0] >= 2)
            for left in split(first, apex):
                for right in split(apex, last):
                    result.append(own + left + right)
        return result

    triangulations = sorted(
        (DiscTriangulation(m, arcs) for arcs in split(0, m - 1)), key=lambda t: t.arcs
    )
    logger.debug("Enumerated triangulations", m=m, count=len(triangulations))
    return triangulations


def flip(T: DiscTriangulation, arc: Sequence[int]) -> DiscTriangulation:
    """Replace arc by the other diagonal of the quadrilateral formed by its two faces."""
    arc = tuple(sorted(int(x) for x in arc))
    if arc not in T.arcs:
        raise InvalidTriangulationError(detail=f"{arc} is not an arc of the triangulation")
    apexes = [next(v for v in face if v not in arc) for face in T.faces() if set(arc) <= set(face)]
    new_arc = tuple(sorted(apexes))
    flipped = DiscTriangulation(T.m, tuple(a for a in T.arcs if a != arc) + (new_arc,))
    return flipped


def quiver_from_angulation(T: DiscTriangulation) -> QuiverWithPotential:
    arcs = set(T.arcs)
    vertices = [arc_id(a) for a in T.arcs]
    arrows: List[Arrow] = []
    potential = []
    for a, b, c in T.faces():
        sides = [(a, b), (b, c), (a, c)]
        ids = []
        for k in range(3):
            source, target = sides[k], sides[(k + 1) % 3]
            if source in arcs and target in arcs:
                arrow_id = f"{arc_id(source)}>{arc_id(target)}"
                arrows.append(Arrow(arrow_id, arc_id(source), arc_id(target)))
                ids.append(arrow_id)
        if len(ids) == 3:
            potential.append((1, ids))
    return QuiverWithPotential(Quiver(tuple(vertices), tuple(arrows)), Potential.from_terms(potential))


def flip_mutation_square(T: DiscTriangulation, arc: Sequence[int]) -> bool:
    """Does flipping arc agree with mutating the quiver at its vertex, up to isomorphism?"""
    arc = tuple(sorted(int(x) for x in arc))
    flipped = quiver_from_angulation(flip(T, arc))
    mutated = mutate(quiver_from_angulation(T), arc_id(arc))
    return is_isomorphic(flipped, mutated)


def flip_graph(m: int) -> nx.Graph:
    """Triangulations of the m-gon joined by flips; node attribute 'triangulation'."""
    if not 3 <= m <= MAX_FLIP_GRAPH_VERTICES:
        raise OutOfRangeError(name="m", value=m, low=3, high=MAX_FLIP_GRAPH_VERTICES)
    triangulations = enumerate_triangulations(m)
    position: Dict[Tuple[Arc, ...], int] = {t.arcs: n for n, t in enumerate(triangulations)}
    graph = nx.Graph()
    for n, t in enumerate(triangulations):
        graph.add_node(n, triangulation=t)
    for n, t in enumerate(triangulations):
        for arc in t.arcs:
            other = position[flip(t, arc).arcs]
            if n < other:
                graph.add_edge(n, other, arc=arc)
    return graph


def flip_graph_to_dot(graph: nx.Graph) -> str:
    lines = ["graph flip_graph {"]
    for node in sorted(graph.nodes):
        arcs = " ".join(f"{a}{b}" for a, b in graph.nodes[node]["triangulation"].arcs)
        lines.append(f'  {node} [label="{arcs}"];')
    for u, v in sorted(graph.edges):
        a, b = graph.edges[u, v]["arc"]
        lines.append(f'  {u} -- {v} [label="{a}{b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def describe_graph(graph: nx.Graph) -> str:
    n, e = graph.number_of_nodes(), graph.number_of_edges()
    if n == 1 and e == 0:
        return "single vertex"
    if n == 2 and e == 1:
        return "single edge"
    if n > 2 and nx.is_connected(graph) and all(d == 2 for _, d in graph.degree()):
        return f"{n}-cycle"
    return f"{n} vertices, {e} edges"


@dataclass(frozen=True)
class ExchangeGraphComparison:
    m: int
    isomorphic: bool
    flip_description: str
    heart_description: str

    def summary(self) -> str:
        if self.isomorphic:
            return f"isomorphic: {self.flip_description}"
        return f"not isomorphic: flips {self.flip_description}, hearts {self.heart_description}"


def compare_exchange_graphs(m: int, threads: Optional[int] = None) -> ExchangeGraphComparison:
    """Flip graph of the m-gon against the intermediate heart exchange graph of its seed quiver."""
    flips = flip_graph(m)
    seed = quiver_from_angulation(enumerate_triangulations(m)[0])
    hearts = exchange_graph(standard_heart(seed), None, is_intermediate, threads).to_networkx(directed=False)
    result = ExchangeGraphComparison(m, nx.is_isomorphic(flips, hearts), describe_graph(flips), describe_graph(hearts))
    logger.info("Compared exchange graphs", m=m, isomorphic=result.isomorphic)
    return result
