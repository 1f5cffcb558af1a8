"""
Polynomial quadratic differentials p(z) dz⊗dz on the sphere and their periods.

Periods are integrals of √p(z) dz along straight segments (or polylines)
between simple zeroes. Straight segments stand in for saddle connections,
so every scan output carries the method "straight-segment-proxy".
"""
from __future__ import annotations

import cmath
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy
from scipy.special import roots_jacobi

from .config import (
    FLOAT_TOLERANCE,
    GENERICITY_TOLERANCE,
    QUADRATURE_MAX_NODES,
    QUADRATURE_NODES,
    QUADRATURE_TOLERANCE,
    WORKER_THREADS,
)
from .data_classes import GridAxis
from .error_handler import CollinearZeroError, DegenerateDifferentialError, FormatError, OutOfRangeError, QuadratureError
from .heart_graph import chamber_from_imaginary_parts
from .logging_handler import StructuredLogger

logger = StructuredLogger(__name__)

PROXY_METHOD = "straight-segment-proxy"
SCAN_COLUMNS = ["a_re", "a_im", "b_re", "b_im", "discriminant", "Z1_re", "Z1_im",
                "Z2_re", "Z2_im", "label", "generic_flag", "method"]
_COLLISION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PolynomialQuadDifferential:
    """p(z) with coefficients listed from the highest degree down."""
    coefficients: Tuple[complex, ...]

    def __post_init__(self):
        coefficients = tuple(complex(c) for c in self.coefficients)
        while coefficients and coefficients[0] == 0:
            coefficients = coefficients[1:]
        if len(coefficients) < 3:
            raise OutOfRangeError(name="degree", value=len(coefficients) - 1, low=2, high="∞")
        object.__setattr__(self, "coefficients", coefficients)
        centre = coefficients[1] / coefficients[0]
        if abs(centre) > _COLLISION_TOLERANCE:
            raise OutOfRangeError(name="sum of zeroes", value=-centre, low=0, high=0)

    @classmethod
    def from_ab(cls, a: complex, b: complex) -> "PolynomialQuadDifferential":
        """The A2 family z³ + a z + b."""
        return cls((1, 0, a, b))

    @classmethod
    def parse(cls, text: str) -> "PolynomialQuadDifferential":
        z = sympy.Symbol("z")
        try:
            expression = sympy.sympify(text.replace("^", "**"), locals={"z": z, "I": sympy.I, "i": sympy.I})
            poly = sympy.Poly(sympy.expand(expression), z)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as e:
            raise FormatError(path=text, detail=f"not a polynomial in z ({e})") from None
        return cls(tuple(complex(sympy.N(c)) for c in poly.all_coeffs()))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def pole_order_at_infinity(self) -> int:
        return self.degree + 4

    def zero_orders(self) -> List[int]:
        return [1] * self.degree

    def evaluate(self, z):
        return np.polyval(np.array(self.coefficients), z)

    def discriminant(self) -> complex:
        """4a³ + 27b² for the monic-normalised A2 family, c₀^{2d−2}·Π_{i<j}(u_i − u_j)² otherwise."""
        c = self.coefficients
        if self.degree == 3:
            a, b = c[2] / c[0], c[3] / c[0]
            return 4 * a ** 3 + 27 * b ** 2
        roots = np.roots(np.array(c))
        product = complex(c[0]) ** (2 * self.degree - 2)
        for u, v in combinations(roots, 2):
            product *= (u - v) ** 2
        return complex(product)

    def scaled(self, t: float) -> "PolynomialQuadDifferential":
        return PolynomialQuadDifferential(tuple(t * t * c for c in self.coefficients))

    def rotated(self, theta: float) -> "PolynomialQuadDifferential":
        factor = cmath.exp(2j * theta)
        return PolynomialQuadDifferential(tuple(factor * c for c in self.coefficients))

    def __str__(self) -> str:
        terms = []
        for power, c in zip(range(self.degree, -1, -1), self.coefficients):
            if c != 0:
                terms.append(f"({c.real:g}{c.imag:+g}j)*z^{power}")
        return " + ".join(terms)


def zeroes(p: PolynomialQuadDifferential) -> List[complex]:
    """Simple zeroes sorted by (Re, Im), polished by Newton steps."""
    coefficients = np.array(p.coefficients)
    derivative = np.polyder(coefficients)
    roots = np.roots(coefficients).astype(complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(3):
            step = np.polyval(coefficients, roots) / np.polyval(derivative, roots)
            roots = np.where(np.isfinite(step), roots - step, roots)
    scale = max(1.0, float(np.max(np.abs(roots))))
    for u, v in combinations(roots, 2):
        if abs(u - v) <= _COLLISION_TOLERANCE * scale:
            raise DegenerateDifferentialError(value=f"{p.discriminant():.3e}")
    return sorted((complex(r) for r in roots), key=lambda r: (round(r.real, 9), r.imag))


@lru_cache(maxsize=64)
def _jacobi_rule(nodes: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    return roots_jacobi(nodes, alpha, beta)


def _continuous_sqrt(values: np.ndarray) -> np.ndarray:
    """Square roots along a sampled curve, sign-flipped to stay continuous."""
    roots = np.sqrt(values.astype(complex))
    if roots.size < 2:
        return roots
    jumps = np.abs(roots[1:] - roots[:-1]) > np.abs(roots[1:] + roots[:-1])
    signs = np.concatenate([[1.0], np.cumprod(np.where(jumps, -1.0, 1.0))])
    return roots * signs


def _principal_sqrt(value: complex) -> complex:
    # a negative real with imaginary part -0.0 would take the lower root
    return cmath.sqrt(complex(value) + 0j)


def _check_clear(start: complex, end: complex, others: Sequence[complex], i, j) -> None:
    direction = end - start
    for k, u in others:
        s = (u - start) / direction
        if -_COLLISION_TOLERANCE < s.real < 1 + _COLLISION_TOLERANCE and abs(s.imag) <= _COLLISION_TOLERANCE:
            raise CollinearZeroError(i=i, j=j, k=k)


def _segment_values(p: PolynomialQuadDifferential, roots: Sequence[complex], start: complex, end: complex,
                    start_zero: Optional[int], end_zero: Optional[int], nodes: int):
    """
    Nodes, weights and the continuous factor G on [start, end] such that
    √p(z) dz = h (1−t)^α (1+t)^β G(t) dt with α, β = ½ at zero endpoints.
    """
    alpha = 0.5 if end_zero is not None else 0.0
    beta = 0.5 if start_zero is not None else 0.0
    t, w = _jacobi_rule(nodes, alpha, beta)
    mid, h = (start + end) / 2, (end - start) / 2
    samples = np.concatenate([[-1.0], t, [1.0]])
    z = mid + h * samples
    g2 = np.full(z.shape, complex(p.coefficients[0]))
    for k, u in enumerate(roots):
        if k not in (start_zero, end_zero):
            g2 = g2 * (z - u)
    if start_zero is not None:
        g2 = g2 * h
    if end_zero is not None:
        g2 = g2 * -h
    return t, w, h, alpha, beta, _continuous_sqrt(g2)


def _segment_period(p: PolynomialQuadDifferential, roots: Sequence[complex], i: int, j: int,
                    nodes: int) -> Tuple[complex, complex]:
    """
    Period on [u_i, u_j] with p = (z − u_i)(z − u_j)·r(z).

    At the midpoint the integrand is taken as √(−h²)·√r(mid), both principal
    roots, and carried along the segment by continuity.
    """
    t, w, h, _, _, g = _segment_values(p, roots, roots[i], roots[j], i, j, nodes)
    interior = g[1:-1]
    mid = (roots[i] + roots[j]) / 2
    r_mid = p.coefficients[0]
    for k, u in enumerate(roots):
        if k not in (i, j):
            r_mid *= mid - u
    principal = _principal_sqrt(-h * h) * _principal_sqrt(r_mid)
    nearest = interior[int(np.argmin(np.abs(t)))]
    if (nearest * principal.conjugate()).real < 0:
        interior = -interior
    return complex(h * np.sum(w * interior)), principal


def _converge(compute, label: str) -> Tuple[complex, object]:
    nodes = QUADRATURE_NODES
    value, datum = compute(nodes)
    change = float("inf")
    while True:
        if 2 * nodes > QUADRATURE_MAX_NODES:
            raise QuadratureError(nodes=nodes, change=change)
        refined, datum = compute(2 * nodes)
        change = abs(refined - value)
        if change <= QUADRATURE_TOLERANCE * max(1.0, abs(refined)):
            return refined, datum
        nodes *= 2
        value = refined
        logger.debug("Refining quadrature", path=label, nodes=nodes, change=change)


def period(p: PolynomialQuadDifferential, i: int, j: int) -> complex:
    """∫ √p(z) dz along the straight segment from zero i to zero j."""
    return period_with_branch(p, i, j)[0]


def period_with_branch(p: PolynomialQuadDifferential, i: int, j: int) -> Tuple[complex, complex]:
    roots = zeroes(p)
    if i == j:
        raise OutOfRangeError(name="zero pair", value=(i, j), low="distinct", high="indices")
    for index in (i, j):
        if not 0 <= index < len(roots):
            raise OutOfRangeError(name="zero index", value=index, low=0, high=len(roots) - 1)
    low, high = min(i, j), max(i, j)
    _check_clear(roots[low], roots[high], [(k, u) for k, u in enumerate(roots) if k not in (low, high)], low, high)
    value, branch = _converge(lambda n: _segment_period(p, roots, low, high, n), f"{low}-{high}")
    return (value, branch) if i < j else (-value, branch)


def period_along(p: PolynomialQuadDifferential, i: int, j: int, waypoints: Sequence[complex]) -> complex:
    """
    ∫ √p(z) dz along the polyline u_i → waypoints → u_j.

    The sheet is the principal root of p at the first waypoint and is carried
    across joints by continuity.
    """
    if not waypoints:
        return period(p, i, j)
    roots = zeroes(p)
    points = [roots[i]] + [complex(w) for w in waypoints] + [roots[j]]
    for a, b in zip(points, points[1:]):
        blocking = [(k, u) for k, u in enumerate(roots)
                    if abs(u - a) > _COLLISION_TOLERANCE and abs(u - b) > _COLLISION_TOLERANCE]
        _check_clear(a, b, blocking, i, j)

    def compute(nodes: int):
        total = 0j
        previous_end = None
        for leg, (a, b) in enumerate(zip(points, points[1:])):
            start_zero = i if leg == 0 else None
            end_zero = j if leg == len(points) - 2 else None
            t, w, h, alpha, beta, g = _segment_values(p, roots, a, b, start_zero, end_zero, nodes)
            if previous_end is None:
                target = _principal_sqrt(p.evaluate(b))
                end_value = (2 ** beta) * g[-1]
                if (end_value * target.conjugate()).real < 0:
                    g = -g
            else:
                start_value = (2 ** alpha) * g[0]
                if (start_value * previous_end.conjugate()).real < 0:
                    g = -g
            previous_end = (2 ** beta) * g[-1]
            total += h * np.sum(w * g[1:-1])
        return total, None

    return _converge(compute, f"{i}-{j} via {len(waypoints)}")[0]


def detour_waypoint(roots: Sequence[complex], i: int, j: int) -> complex:
    """Apex of a right-angled two-leg detour around the segment [u_i, u_j]."""
    mid, h = (roots[i] + roots[j]) / 2, (roots[j] - roots[i]) / 2
    return mid + 1j * h


@dataclass(frozen=True)
class PeriodEntry:
    i: int
    j: int
    value: complex
    branch: Optional[complex]
    method: str


@dataclass(frozen=True)
class PeriodTable:
    zeros: Tuple[complex, ...]
    entries: Tuple[PeriodEntry, ...]

    def period(self, i: int, j: int) -> complex:
        for entry in self.entries:
            if (entry.i, entry.j) == (i, j):
                return entry.value
            if (entry.j, entry.i) == (i, j):
                return -entry.value
        raise OutOfRangeError(name="zero pair", value=(i, j), low=0, high=len(self.zeros) - 1)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            "i": e.i, "j": e.j, "period_re": e.value.real, "period_im": e.value.imag,
            "branch_re": None if e.branch is None else e.branch.real,
            "branch_im": None if e.branch is None else e.branch.imag,
            "method": e.method,
        } for e in self.entries])


def period_table(p: PolynomialQuadDifferential) -> PeriodTable:
    """Periods for every zero pair i < j; pairs blocked by a third zero use a two-leg detour."""
    roots = zeroes(p)
    entries = []
    for i, j in combinations(range(len(roots)), 2):
        try:
            value, branch = period_with_branch(p, i, j)
            entries.append(PeriodEntry(i, j, value, branch, "segment"))
        except CollinearZeroError:
            value = period_along(p, i, j, [detour_waypoint(roots, i, j)])
            entries.append(PeriodEntry(i, j, value, None, "detour"))
    return PeriodTable(tuple(roots), tuple(entries))


def genericity_proxy(p: PolynomialQuadDifferential) -> bool:
    """No straight-segment period is real; pairs blocked by a third zero are skipped."""
    roots = zeroes(p)
    for i, j in combinations(range(len(roots)), 2):
        try:
            value = period(p, i, j)
        except CollinearZeroError:
            logger.debug("Skipping blocked pair", i=i, j=j)
            continue
        if abs(value.imag) <= GENERICITY_TOLERANCE * abs(value):
            return False
    return True


# -- Chamber scans -------------------------------------------------------------------

@dataclass
class _Cell:
    row: int
    col: int
    a: complex
    b: complex
    discriminant: complex
    roots: Optional[List[complex]] = None
    periods: Optional[Dict[Tuple[int, int], complex]] = None
    generic: Optional[bool] = None


def _evaluate_cell(cell: _Cell) -> _Cell:
    p = PolynomialQuadDifferential.from_ab(cell.a, cell.b)
    try:
        roots = zeroes(p)
    except DegenerateDifferentialError:
        return cell
    periods: Dict[Tuple[int, int], complex] = {}
    generic = True
    for i, j in combinations(range(3), 2):
        try:
            value = period(p, i, j)
            if abs(value.imag) <= GENERICITY_TOLERANCE * abs(value):
                generic = False
        except CollinearZeroError:
            value = period_along(p, i, j, [detour_waypoint(roots, i, j)])
        periods[(i, j)] = value
        periods[(j, i)] = -value
    cell.roots, cell.periods, cell.generic = roots, periods, generic
    return cell


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def reduced_period_basis(u: complex, v: complex) -> Tuple[complex, complex]:
    """Lagrange–Gauss reduction of the lattice ℤu + ℤv; the first vector is a shortest one."""
    if abs(_cross(u, v)) <= _COLLISION_TOLERANCE * abs(u) * abs(v):
        raise DegenerateDifferentialError(value=f"parallel periods {u:.3e}, {v:.3e}")
    if abs(u) > abs(v):
        u, v = v, u
    while True:
        v = v - round((v * u.conjugate()).real / abs(u) ** 2) * u
        if abs(v) >= abs(u):
            return u, v
        u, v = v, u


def nearest_lattice_point(target: complex, basis: Tuple[complex, complex]) -> complex:
    u, v = basis
    area = _cross(u, v)
    m, n = round(_cross(target, v) / area), round(_cross(u, target) / area)
    candidates = [(m + dm) * u + (n + dn) * v for dm in (-1, 0, 1) for dn in (-1, 0, 1)]
    return min(candidates, key=lambda point: abs(point - target))


def _propagation_order(rows: int, cols: int) -> List[Tuple[int, int]]:
    """Down the first column, then along every row."""
    return [(r, 0) for r in range(rows)] + [(r, c) for r in range(rows) for c in range(1, cols)]


def _reference(placed: Dict[Tuple[int, int], Tuple[complex, complex]], row: int, col: int):
    for c in range(col - 1, -1, -1):
        if (row, c) in placed:
            return placed[(row, c)]
    for r in range(row - 1, -1, -1):
        if (r, col) in placed:
            return placed[(r, col)]
    return None


def a2_chamber_scan(a_axis: GridAxis, b_axis: GridAxis, a_imag: float = 0.0, b_real: float = 0.0,
                    threads: Optional[int] = None) -> pd.DataFrame:
    """
    Chamber labels over the slice a = x + i·a_imag, b = b_real + i·y.

    At the first regular cell Z(S₁), Z(S₂) are the periods between
    consecutive zeroes, on the sheet with Im Z > 0. Every other cell takes
    the points of its own period lattice nearest to those of its left
    neighbour (the cell above, in the first column). The basis is then
    continuous everywhere except across the horizontal rays running right
    from each discriminant point in the slice. Degenerate cells are marked
    and skipped.
    """
    xs, ys = a_axis.values(), b_axis.values()
    cells = [_Cell(r, c, complex(x, a_imag), complex(b_real, y),
                   PolynomialQuadDifferential.from_ab(complex(x, a_imag), complex(b_real, y)).discriminant())
             for r, y in enumerate(ys) for c, x in enumerate(xs)]
    with ThreadPoolExecutor(max_workers=threads or WORKER_THREADS) as executor:
        cells = list(executor.map(_evaluate_cell, cells))
    grid = {(cell.row, cell.col): cell for cell in cells}

    placed: Dict[Tuple[int, int], Tuple[complex, complex]] = {}
    seams = 0
    for row, col in _propagation_order(len(ys), len(xs)):
        cell = grid[(row, col)]
        if cell.roots is None:
            continue
        reference = _reference(placed, row, col)
        if reference is None:
            z1, z2 = cell.periods[(0, 1)], cell.periods[(1, 2)]
            z1 = z1 if z1.imag > 0 or (z1.imag == 0 and z1.real < 0) else -z1
            z2 = z2 if z2.imag > 0 or (z2.imag == 0 and z2.real < 0) else -z2
        else:
            basis = reduced_period_basis(cell.periods[(0, 1)], cell.periods[(1, 2)])
            z1, z2 = nearest_lattice_point(reference[0], basis), nearest_lattice_point(reference[1], basis)
            above = placed.get((row - 1, col)) if col > 0 else None
            if above is not None and (abs(nearest_lattice_point(above[0], basis) - z1) > abs(basis[0]) / 2
                                      or abs(nearest_lattice_point(above[1], basis) - z2) > abs(basis[0]) / 2):
                seams += 1
        placed[(row, col)] = (z1, z2)

    rows = []
    for cell in cells:
        if (cell.row, cell.col) in placed:
            z1, z2 = placed[(cell.row, cell.col)]
            label = chamber_from_imaginary_parts(z1.imag, z2.imag, FLOAT_TOLERANCE * max(1.0, abs(z1), abs(z2)))
        else:
            z1, z2, label = complex("nan+nanj"), complex("nan+nanj"), "degenerate"
        rows.append({
            "a_re": cell.a.real, "a_im": cell.a.imag, "b_re": cell.b.real, "b_im": cell.b.imag,
            "discriminant": f"{cell.discriminant.real:.12g}{cell.discriminant.imag:+.12g}j",
            "Z1_re": z1.real, "Z1_im": z1.imag, "Z2_re": z2.real, "Z2_im": z2.imag,
            "label": label, "generic_flag": bool(cell.generic), "method": PROXY_METHOD,
        })
    logger.info("Finished A2 chamber scan", cells=len(rows), seams=seams,
                degenerate=sum(1 for r in rows if r["label"] == "degenerate"))
    return pd.DataFrame(rows, columns=SCAN_COLUMNS)


def imz_chamber_scan(x_axis: GridAxis, y_axis: GridAxis) -> pd.DataFrame:
    """Chamber labels of central charges with Im Z(S₁) = x and Im Z(S₂) = y."""
    rows = [{"row": r, "col": c, "im_z1": x, "im_z2": y, "label": chamber_from_imaginary_parts(x, y, FLOAT_TOLERANCE)}
            for r, y in enumerate(y_axis.values()) for c, x in enumerate(x_axis.values())]
    return pd.DataFrame(rows, columns=["row", "col", "im_z1", "im_z2", "label"])
