"""
Representations of Jacobian algebras over F_p and their stability.

Every stability question is answered on the finite lattice of
subrepresentations of one representation V: subquotients W'/W of V are
handled through their dimension vectors dim W' − dim W.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config import ENUMERATION_BOUND, FIELD_CHARACTERISTIC, FLOAT_TOLERANCE, SUPPORTED_CHARACTERISTICS
from .error_handler import (
    EnumerationBoundError,
    HNUniquenessError,
    InvalidCentralChargeError,
    InvalidRepresentationError,
    UnknownArrowError,
    ZeroClassError,
)
from .logging_handler import StructuredLogger
from .qp_core import QuiverWithPotential, jacobian_relations

logger = StructuredLogger(__name__)

Number = Union[Fraction, float]
ClassVector = Tuple[int, ...]


# -- Linear algebra over F_p -------------------------------------------------

def rref_mod_p(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p with zero rows dropped, plus pivot columns."""
    work = np.array(matrix, dtype=np.int64) % p
    rows, cols = work.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        candidates = np.nonzero(work[row:, col])[0]
        if candidates.size == 0:
            continue
        swap = row + int(candidates[0])
        work[[row, swap]] = work[[swap, row]]
        work[row] = (work[row] * pow(int(work[row, col]), p - 2, p)) % p
        for other in range(rows):
            if other != row and work[other, col]:
                work[other] = (work[other] - work[other, col] * work[row]) % p
        pivots.append(col)
        row += 1
    return work[:row], pivots


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    return len(rref_mod_p(matrix, p)[1])


def coefficient_mod_p(value: Fraction, p: int) -> int:
    if value.denominator % p == 0:
        raise InvalidRepresentationError(detail=f"coefficient {value} is not defined over F_{p}")
    return (value.numerator * pow(value.denominator, p - 2, p)) % p


def subspaces(dimension: int, p: int) -> List[np.ndarray]:
    """All subspaces of F_p^dimension as RREF basis matrices, smallest first."""
    result = []
    for k in range(dimension + 1):
        for pivots in itertools.combinations(range(dimension), k):
            free = [(r, c) for r, pivot in enumerate(pivots)
                    for c in range(pivot + 1, dimension) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                basis = np.zeros((k, dimension), dtype=np.int64)
                for r, pivot in enumerate(pivots):
                    basis[r, pivot] = 1
                for (r, c), value in zip(free, values):
                    basis[r, c] = value
                result.append(basis)
    return result


# -- Representations -----------------------------------------------------------

@dataclass(eq=False)
class Representation:
    """Finite-dimensional module over the Jacobian algebra of qp, over F_p"""
    qp: QuiverWithPotential
    p: int
    dim: Tuple[int, ...]
    mats: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.dim = tuple(int(d) for d in self.dim)
        quiver = self.qp.quiver
        if len(self.dim) != len(quiver.vertices) or any(d < 0 for d in self.dim):
            raise InvalidRepresentationError(detail=f"dimension vector {self.dim} does not fit the quiver")
        if self.p not in SUPPORTED_CHARACTERISTICS:
            raise InvalidRepresentationError(detail=f"p={self.p} is not one of {SUPPORTED_CHARACTERISTICS}")
        matrices = {}
        for arrow in quiver.arrows:
            shape = (self.dim[quiver.index(arrow.target)], self.dim[quiver.index(arrow.source)])
            given = self.mats.get(arrow.id)
            matrix = np.zeros(shape, dtype=np.int64) if given is None else np.array(given, dtype=np.int64)
            if matrix.size == 0 and shape[0] * shape[1] == 0:
                matrix = np.zeros(shape, dtype=np.int64)
            if matrix.shape != shape:
                raise InvalidRepresentationError(detail=f"matrix of {arrow.id} has shape {matrix.shape}, expected {shape}")
            matrices[arrow.id] = matrix % self.p
        for arrow_id in self.mats:
            if not quiver.has_arrow(arrow_id):
                raise UnknownArrowError(arrow=arrow_id)
        self.mats = matrices
        for relation in jacobian_relations(self.qp):
            if np.any(self.evaluate(relation)):
                raise InvalidRepresentationError(detail=f"relation {relation} does not vanish")

    @property
    def total_dimension(self) -> int:
        return sum(self.dim)

    def path_matrix(self, path: Sequence[str]) -> np.ndarray:
        """M_{a_k} ⋯ M_{a_1} for the path a_1 … a_k."""
        quiver = self.qp.quiver
        first = quiver.arrow(path[0])
        result = np.eye(self.dim[quiver.index(first.source)], dtype=np.int64)
        for arrow_id in path:
            result = (self.mats[arrow_id] @ result) % self.p
        return result

    def evaluate(self, relation) -> np.ndarray:
        total = None
        for path, coeff in relation.terms:
            term = (coefficient_mod_p(coeff, self.p) * self.path_matrix(path)) % self.p
            total = term if total is None else (total + term) % self.p
        return total if total is not None else np.zeros((0, 0), dtype=np.int64)

    def subrepresentations(self, proper_nonzero: bool = True,
                           bound: Optional[int] = None) -> List["Subrepresentation"]:
        return subrepresentations(self, proper_nonzero, bound)


@dataclass(eq=False)
class Subrepresentation:
    """A subrepresentation given by one RREF basis per vertex"""
    parent: Representation
    bases: Tuple[np.ndarray, ...]

    @property
    def dim(self) -> ClassVector:
        return tuple(int(b.shape[0]) for b in self.bases)

    def key(self) -> tuple:
        return (sum(self.dim), self.dim, tuple(tuple(b.flatten().tolist()) for b in self.bases))

    def contains(self, other: "Subrepresentation") -> bool:
        p = self.parent.p
        return all(
            mine.shape[0] >= theirs.shape[0]
            and rank_mod_p(np.vstack([mine, theirs]), p) == mine.shape[0]
            for mine, theirs in zip(self.bases, other.bases)
        )

    def as_representation(self) -> Representation:
        """The restricted representation, in the coordinates of the RREF bases."""
        quiver = self.parent.qp.quiver
        p = self.parent.p
        mats = {}
        for arrow in quiver.arrows:
            source = self.bases[quiver.index(arrow.source)]
            target = self.bases[quiver.index(arrow.target)]
            image = (self.parent.mats[arrow.id] @ source.T) % p
            pivots = rref_mod_p(target, p)[1]
            mats[arrow.id] = image[pivots, :] if pivots else np.zeros((0, source.shape[0]), dtype=np.int64)
        return Representation(self.parent.qp, p, self.dim, mats)


def _check_bound(total: int, bound: Optional[int]) -> None:
    bound = ENUMERATION_BOUND if bound is None else bound
    if total > bound:
        raise EnumerationBoundError(total=total, bound=bound)


def subrepresentations(V: Representation, proper_nonzero: bool = True,
                       bound: Optional[int] = None) -> List[Subrepresentation]:
    """All subspace tuples closed under the arrow maps, in deterministic order."""
    _check_bound(V.total_dimension, bound)
    quiver = V.qp.quiver
    n = len(quiver.vertices)
    candidates = [subspaces(d, V.p) for d in V.dim]
    constraints = [(quiver.index(a.source), quiver.index(a.target), V.mats[a.id]) for a in quiver.arrows]
    found: List[Subrepresentation] = []

    def closed(assigned: List[np.ndarray], source: int, target: int, matrix: np.ndarray) -> bool:
        image = (matrix @ assigned[source].T) % V.p
        if not np.any(image):
            return True
        stacked = np.vstack([assigned[target], image.T])
        return rank_mod_p(stacked, V.p) == assigned[target].shape[0]

    def extend(assigned: List[np.ndarray]) -> None:
        index = len(assigned)
        if index == n:
            found.append(Subrepresentation(V, tuple(assigned)))
            return
        for basis in candidates[index]:
            trial = assigned + [basis]
            if all(closed(trial, s, t, m) for s, t, m in constraints if max(s, t) == index):
                extend(trial)

    extend([])
    if proper_nonzero:
        found = [w for w in found if 0 < sum(w.dim) < V.total_dimension]
    found.sort(key=Subrepresentation.key)
    logger.debug("Enumerated subrepresentations", dim=V.dim, count=len(found))
    return found


def enumerate_representations(qp: QuiverWithPotential, dim: Sequence[int],
                              p: Optional[int] = None) -> Iterator[Representation]:
    """Every representation of the Jacobian algebra with dimension vector dim over F_p."""
    p = p or FIELD_CHARACTERISTIC
    quiver = qp.quiver
    shapes = [(dim[quiver.index(a.target)], dim[quiver.index(a.source)]) for a in quiver.arrows]
    sizes = [rows * cols for rows, cols in shapes]
    for entries in itertools.product(range(p), repeat=sum(sizes)):
        mats = {}
        offset = 0
        for arrow, shape, size in zip(quiver.arrows, shapes, sizes):
            mats[arrow.id] = np.array(entries[offset:offset + size], dtype=np.int64).reshape(shape)
            offset += size
        try:
            yield Representation(qp, p, tuple(dim), mats)
        except InvalidRepresentationError:
            continue


def hom_space_dimension(A: Representation, B: Representation) -> int:
    """dim_{F_p} of the intertwiners A → B."""
    quiver = A.qp.quiver
    p = A.p
    unknowns = [(i, r, c) for i in range(len(quiver.vertices))
                for r in range(B.dim[i]) for c in range(A.dim[i])]
    if not unknowns:
        return 0
    columns = []
    for vertex, r, c in unknowns:
        f = [np.zeros((B.dim[i], A.dim[i]), dtype=np.int64) for i in range(len(quiver.vertices))]
        f[vertex][r, c] = 1
        parts = []
        for arrow in quiver.arrows:
            s, t = quiver.index(arrow.source), quiver.index(arrow.target)
            parts.append(((f[t] @ A.mats[arrow.id]) - (B.mats[arrow.id] @ f[s])).flatten())
        columns.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
    system = np.stack(columns, axis=1) % p
    return len(unknowns) - (rank_mod_p(system, p) if system.size else 0)


# -- Slope (King) stability ----------------------------------------------------

class KingVerdict(str, Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable"
    UNSTABLE = "unstable"
    UNSTABLE_BY_CONVENTION = "unstable-by-convention"


def _pairing(a: Sequence[int], dim: Sequence[int]) -> int:
    return sum(int(x) * int(d) for x, d in zip(a, dim))


def slope(V: Representation, a: Sequence[int]) -> Fraction:
    if V.total_dimension == 0:
        raise InvalidRepresentationError(detail="slope of the zero representation")
    return Fraction(_pairing(a, V.dim), V.total_dimension)


def king_classify(V: Representation, a: Sequence[int], bound: Optional[int] = None) -> KingVerdict:
    if _pairing(a, V.dim) != 0:
        return KingVerdict.UNSTABLE_BY_CONVENTION
    values = [_pairing(a, W.dim) for W in subrepresentations(V, True, bound)]
    if any(v < 0 for v in values):
        return KingVerdict.UNSTABLE
    if any(v == 0 for v in values):
        return KingVerdict.SEMISTABLE
    return KingVerdict.STABLE


# -- Central charges -------------------------------------------------------------

def in_closed_upper_half_plane(re: Number, im: Number, tolerance: float = 0.0) -> bool:
    return im > tolerance or (abs(im) <= tolerance and re < -tolerance)


@dataclass(frozen=True)
class CentralChargeVector:
    """
    Values Z(S_i) as (Re, Im) pairs.

    The exact backend stores Fractions and decides every phase comparison by
    the sign of a cross product; the float backend compares with tolerance.
    With strict=False the values may leave H̄ (Z evaluated on another basis).
    """
    values: Tuple[Tuple[Number, Number], ...]
    backend: str = "exact"
    tolerance: float = field(default=FLOAT_TOLERANCE, compare=False)
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        convert = Fraction if self.backend == "exact" else float
        if self.backend not in ("exact", "float"):
            raise InvalidCentralChargeError(detail=f"unknown backend {self.backend}")
        try:
            values = tuple((convert(re), convert(im)) for re, im in self.values)
        except (TypeError, ValueError) as e:
            raise InvalidCentralChargeError(detail=str(e)) from None
        object.__setattr__(self, "values", values)
        if self.strict:
            tol = 0.0 if self.backend == "exact" else self.tolerance
            for index, (re, im) in enumerate(values):
                if not in_closed_upper_half_plane(re, im, tol):
                    raise InvalidCentralChargeError(detail=f"Z(S_{index + 1}) = {re}+{im}i is not in the closed upper half-plane")

    @classmethod
    def from_complex(cls, values: Sequence[complex], backend: str = "float", **kwargs) -> "CentralChargeVector":
        return cls(tuple((complex(z).real, complex(z).imag) for z in values), backend, **kwargs)

    def __len__(self) -> int:
        return len(self.values)

    def evaluate(self, cls_vector: Sequence[int]) -> Tuple[Number, Number]:
        if len(cls_vector) != len(self.values):
            raise ZeroClassError(cls=tuple(cls_vector))
        zero = Fraction(0) if self.backend == "exact" else 0.0
        re = sum((c * v[0] for c, v in zip(cls_vector, self.values)), zero)
        im = sum((c * v[1] for c, v in zip(cls_vector, self.values)), zero)
        return re, im

    def as_complex(self, cls_vector: Sequence[int]) -> complex:
        re, im = self.evaluate(cls_vector)
        return complex(float(re), float(im))

    def complex_values(self) -> List[complex]:
        return [complex(float(re), float(im)) for re, im in self.values]

    def phase(self, cls_vector: Sequence[int]) -> float:
        return phase(self, cls_vector)

    def compare_phases(self, first: Sequence[int], second: Sequence[int]) -> int:
        """Sign of phase(first) − phase(second) for classes with values in H̄."""
        re1, im1 = self.evaluate(first)
        re2, im2 = self.evaluate(second)
        cross = re1 * im2 - im1 * re2
        if self.backend == "float":
            scale = math.hypot(float(re1), float(im1)) * math.hypot(float(re2), float(im2))
            if abs(cross) <= self.tolerance * max(scale, 1.0):
                return 0
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    def scaled(self, t: Number) -> "CentralChargeVector":
        if not t > 0:
            raise InvalidCentralChargeError(detail=f"scale {t} is not positive")
        return CentralChargeVector(tuple((re * t, im * t) for re, im in self.values),
                                   self.backend, self.tolerance, self.strict)

    def rotated(self, lam: complex, strict: bool = False) -> "CentralChargeVector":
        """e^{−πiλ}·Z; exact for integer λ on the exact backend."""
        lam = complex(lam)
        if self.backend == "exact" and lam.imag == 0 and lam.real == int(lam.real):
            sign = -1 if int(lam.real) % 2 else 1
            return CentralChargeVector(tuple((re * sign, im * sign) for re, im in self.values),
                                       "exact", self.tolerance, strict)
        factor = cmath.exp(-1j * math.pi * lam)
        return CentralChargeVector.from_complex([factor * z for z in self.complex_values()],
                                                tolerance=self.tolerance, strict=strict)


def z_from_slope(c: Sequence, r: Sequence, backend: str = "exact") -> CentralChargeVector:
    """Z(S_i) = −c(S_i) + i·r(S_i)."""
    if len(c) != len(r):
        raise InvalidCentralChargeError(detail="c and r have different lengths")
    for index, value in enumerate(r):
        if not value > 0:
            raise InvalidCentralChargeError(detail=f"r(S_{index + 1}) = {value} is not positive")
    return CentralChargeVector(tuple((-x, y) for x, y in zip(c, r)), backend)


def phase(Z: CentralChargeVector, cls_vector: Sequence[int]) -> float:
    """(1/π)·arg Z(cls) in (0, 1] for a non-negative nonzero class."""
    cls_vector = tuple(int(c) for c in cls_vector)
    if not any(cls_vector) or any(c < 0 for c in cls_vector):
        raise ZeroClassError(cls=cls_vector)
    re, im = Z.evaluate(cls_vector)
    if re == 0 and im == 0:
        raise ZeroClassError(cls=cls_vector)
    if im == 0 and re < 0:
        return 1.0
    return math.atan2(float(im), float(re)) / math.pi


# -- Harder–Narasimhan -----------------------------------------------------------

class HNFactor(NamedTuple):
    cls: ClassVector
    phase: float


class _Lattice:
    """Subrepresentation lattice of V with containment precomputed."""

    def __init__(self, V: Representation, Z: CentralChargeVector, bound: Optional[int]):
        if len(Z) != len(V.dim):
            raise InvalidCentralChargeError(detail="central charge and representation have different ranks")
        self.V = V
        self.Z = Z
        self.members = subrepresentations(V, proper_nonzero=False, bound=bound)
        self.dims = [w.dim for w in self.members]
        size = len(self.members)
        self.below = [[False] * size for _ in range(size)]
        for i, j in itertools.product(range(size), repeat=2):
            if i == j:
                self.below[i][j] = True
            elif sum(self.dims[i]) < sum(self.dims[j]) and all(x <= y for x, y in zip(self.dims[i], self.dims[j])):
                self.below[i][j] = self.members[j].contains(self.members[i])
        self.bottom = 0
        self.top = size - 1
        self._semistable: Dict[Tuple[int, int], bool] = {}

    def quotient(self, lower: int, upper: int) -> ClassVector:
        return tuple(u - l for u, l in zip(self.dims[upper], self.dims[lower]))

    def strictly_between(self, lower: int, upper: int) -> List[int]:
        return [k for k in range(len(self.members))
                if k not in (lower, upper) and self.below[lower][k] and self.below[k][upper]]

    def is_semistable(self, lower: int, upper: int) -> bool:
        """upper/lower is semistable iff no subobject U/lower has larger phase."""
        key = (lower, upper)
        if key not in self._semistable:
            whole = self.quotient(lower, upper)
            self._semistable[key] = all(
                self.Z.compare_phases(self.quotient(lower, k), whole) <= 0
                for k in self.strictly_between(lower, upper)
            )
        return self._semistable[key]

    def factor(self, lower: int, upper: int) -> HNFactor:
        cls_vector = self.quotient(lower, upper)
        return HNFactor(cls_vector, phase(self.Z, cls_vector))


def _maximally_destabilizing(lattice: _Lattice, top: int) -> int:
    """Kernel of the maximally destabilizing quotient of the subobject `top`."""
    best = None
    for kernel in range(len(lattice.members)):
        if kernel == top or not lattice.below[kernel][top]:
            continue
        if not lattice.is_semistable(kernel, top):
            continue
        if best is None:
            best = kernel
            continue
        order = lattice.Z.compare_phases(lattice.quotient(kernel, top), lattice.quotient(best, top))
        if order < 0:
            best = kernel
        elif order == 0:
            mine, theirs = lattice.quotient(kernel, top), lattice.quotient(best, top)
            if (-sum(mine), mine) < (-sum(theirs), theirs):
                best = kernel
    return best


def maximally_destabilizing_quotient(V: Representation, Z: CentralChargeVector,
                                     bound: Optional[int] = None) -> HNFactor:
    if V.total_dimension == 0:
        raise InvalidRepresentationError(detail="zero representation")
    lattice = _Lattice(V, Z, bound)
    return lattice.factor(_maximally_destabilizing(lattice, lattice.top), lattice.top)


def is_semistable(V: Representation, Z: CentralChargeVector, bound: Optional[int] = None) -> bool:
    if V.total_dimension == 0:
        raise InvalidRepresentationError(detail="zero representation")
    lattice = _Lattice(V, Z, bound)
    return lattice.is_semistable(lattice.bottom, lattice.top)


def hn_filtration(V: Representation, Z: CentralChargeVector, bound: Optional[int] = None) -> List[HNFactor]:
    """HN factors, highest phase first, by repeatedly splitting off the maximally destabilizing quotient."""
    if V.total_dimension == 0:
        raise InvalidRepresentationError(detail="zero representation")
    lattice = _Lattice(V, Z, bound)
    factors: List[HNFactor] = []
    top = lattice.top
    while top != lattice.bottom:
        kernel = _maximally_destabilizing(lattice, top)
        factors.append(lattice.factor(kernel, top))
        top = kernel
    factors.reverse()
    logger.debug("Computed HN filtration", dim=V.dim, factors=len(factors))
    return factors


def hn_oracle(V: Representation, Z: CentralChargeVector, bound: Optional[int] = None) -> List[HNFactor]:
    """Brute force: the unique chain with semistable quotients of strictly decreasing phase."""
    if V.total_dimension == 0:
        raise InvalidRepresentationError(detail="zero representation")
    lattice = _Lattice(V, Z, bound)
    chains: List[List[int]] = []

    def walk(chain: List[int]) -> None:
        current = chain[-1]
        if current == lattice.top:
            chains.append(list(chain))
            return
        for nxt in range(len(lattice.members)):
            if nxt == current or not lattice.below[current][nxt]:
                continue
            if not lattice.is_semistable(current, nxt):
                continue
            if len(chain) > 1:
                previous = lattice.quotient(chain[-2], current)
                if lattice.Z.compare_phases(lattice.quotient(current, nxt), previous) >= 0:
                    continue
            walk(chain + [nxt])

    walk([lattice.bottom])
    if len(chains) != 1:
        raise HNUniquenessError(count=len(chains))
    chain = chains[0]
    return [lattice.factor(chain[k], chain[k + 1]) for k in range(len(chain) - 1)]


def hn_table(V: Representation, Z: CentralChargeVector, bound: Optional[int] = None) -> pd.DataFrame:
    factors = hn_filtration(V, Z, bound)
    return pd.DataFrame({
        "class": [",".join(str(c) for c in f.cls) for f in factors],
        "phase": [f.phase for f in factors],
    })
