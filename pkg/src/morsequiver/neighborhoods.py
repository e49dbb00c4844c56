"""Discrete cylindrical Morse neighborhoods and the Morse inequalities.

A neighborhood of a critical component C at shrink level n is the
connected piece containing C of the closed star of C sliced to the
value band [c - delta(n), c + delta(n)], where delta halves with n and
starts at a quarter of the gap to the adjacent critical values.  The
band walls are assumed to be cut levels of the complex, so boundaries
split cleanly into the level parts and the lateral (perp) part.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (Simplex, Subcomplex, cell_components, face_closure,
                        relative_homology)
from .errors import InvariantError
from .fields import FieldTag
from .poly import PoincarePolynomial, divide_by_one_plus_t, poly_sum
from .scalarfield import CriticalComponent, CriticalReport, ScalarField

MINUS = "minus"
PLUS = "plus"


def band_deltas(report: CriticalReport, cid: int, n: int) -> Tuple[Fraction, Fraction]:
    """delta_-(n), delta_+(n): gap/2^(n+2) on each side of the value."""
    c = report.component(cid).value
    cv = report.critical_values
    i = cv.index(c)
    below = c - cv[i - 1] if i > 0 else None
    above = cv[i + 1] - c if i + 1 < len(cv) else None
    gap = min(x for x in (below, above) if x is not None)
    delta = gap / (2 ** (n + 2))
    return delta, delta


def band_levels(report: CriticalReport, n_max: int) -> List[Fraction]:
    """All band walls needed for neighborhoods up to level n_max + the
    sublevel midpoints."""
    levels = set(report.midpoints[1:-1])
    for c in report.components:
        for n in range(n_max + 1):
            dm, dp = band_deltas(report, c.id, n)
            levels.add(c.value - dm)
            levels.add(c.value + dp)
    return sorted(levels)


class MorseNeighborhood:
    def __init__(self, component: int, level: int, value: Fraction,
                 delta_minus: Fraction, delta_plus: Fraction,
                 cells: Subcomplex, boundary_minus: Subcomplex,
                 boundary_plus: Subcomplex, boundary_perp: Subcomplex,
                 values: Dict[int, Fraction]):
        self.component = component
        self.level = level
        self.value = value
        self.delta_minus = delta_minus
        self.delta_plus = delta_plus
        self.cells = cells
        self.boundary_minus = boundary_minus
        self.boundary_plus = boundary_plus
        self.boundary_perp = boundary_perp
        self._values = values

    def lower_wall(self) -> Fraction:
        return self.value - self.delta_minus

    def upper_wall(self) -> Fraction:
        return self.value + self.delta_plus

    def side_subcomplex(self, side: str) -> Subcomplex:
        """Outflow boundary for the chosen side: the level wall plus the
        matching half of the lateral boundary."""
        sf = self.cells.parent
        if side == MINUS:
            base = list(self.boundary_minus.all_simplices())
            extra = [s for s in self.boundary_perp.all_simplices()
                     if all(self._value(v) < self.value for v in s)]
        elif side == PLUS:
            base = list(self.boundary_plus.all_simplices())
            extra = [s for s in self.boundary_perp.all_simplices()
                     if all(self._value(v) > self.value for v in s)]
        else:
            raise ValueError(f"unknown side {side!r}")
        return Subcomplex(self.cells.parent, base + extra)

    def _value(self, v: int) -> Fraction:
        return self._values[v]


def _boundary_edges(sub: Subcomplex) -> List[Simplex]:
    """Edges of a 2-dimensional subcomplex lying in exactly one triangle."""
    count: Dict[Simplex, int] = {}
    for tri in sub.simplices(2):
        for i in range(3):
            e = tri[:i] + tri[i + 1:]
            count[e] = count.get(e, 0) + 1
    return [e for e, c in sorted(count.items()) if c == 1]


def build_neighborhood(sf: ScalarField, report: CriticalReport, cid: int,
                       n: int) -> MorseNeighborhood:
    comp = report.component(cid)
    c = comp.value
    dm, dp = band_deltas(report, cid, n)
    lo, hi = c - dm, c + dp
    star_vertices = set(comp.vertices)
    star: List[Simplex] = []
    for s in sf.complex.all_simplices():
        if any(v in star_vertices for v in s):
            star.append(s)
    star = face_closure(star)
    band = [s for s in star if all(lo <= sf.values[v] <= hi for v in s)]
    piece = None
    for comp_cells in cell_components(band):
        if any(v in star_vertices for s in comp_cells for v in s):
            if piece is None:
                piece = comp_cells
            else:
                piece = piece + comp_cells
    if piece is None:
        raise InvariantError("neighborhood-band", f"band of C{cid} is empty")
    cells = Subcomplex(sf.complex, face_closure(piece))
    for other in report.components:
        if other.id != cid and any(cells.has((v,)) for v in other.vertices):
            raise InvariantError(
                "neighborhood-isolation",
                f"neighborhood of C{cid} contains C{other.id}")
    bd_edges = _boundary_edges(cells)
    minus_cells: List[Simplex] = []
    plus_cells: List[Simplex] = []
    perp_cells: List[Simplex] = []
    for e in bd_edges:
        vals = [sf.values[v] for v in e]
        if all(x == lo for x in vals):
            minus_cells.append(e)
        elif all(x == hi for x in vals):
            plus_cells.append(e)
        else:
            perp_cells.append(e)
    return MorseNeighborhood(
        cid, n, c, dm, dp, cells,
        Subcomplex(sf.complex, face_closure(minus_cells)),
        Subcomplex(sf.complex, face_closure(plus_cells)),
        Subcomplex(sf.complex, face_closure(perp_cells)),
        sf.values)


class NeighborhoodSystem:
    def __init__(self, sf: ScalarField, report: CriticalReport, n_max: int,
                 neighborhoods: Dict[Tuple[int, int], MorseNeighborhood]):
        self.field = sf
        self.report = report
        self.n_max = n_max
        self._by_key = neighborhoods

    def neighborhood(self, cid: int, n: int) -> MorseNeighborhood:
        return self._by_key[(cid, n)]

    def levels(self, cid: int) -> List[MorseNeighborhood]:
        return [self._by_key[(cid, n)] for n in range(self.n_max + 1)]


def _worker_count() -> int:
    cap = os.environ.get("MORSEQUIVER_THREADS")
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def build_neighborhood_system(sf: ScalarField, report: CriticalReport,
                              n_max: int) -> NeighborhoodSystem:
    """Neighborhoods for every component and shrink level up to n_max.

    Per-component builds are independent; MORSEQUIVER_THREADS caps the
    worker pool.  Results are keyed, so the output is deterministic.
    """
    keys = [(c.id, n) for c in report.components for n in range(n_max + 1)]
    built: Dict[Tuple[int, int], MorseNeighborhood] = {}
    workers = _worker_count()
    if workers > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for key, nb in zip(keys, pool.map(
                    lambda k: build_neighborhood(sf, report, *k), keys)):
                built[key] = nb
    else:
        for key in keys:
            built[key] = build_neighborhood(sf, report, *key)
    system = NeighborhoodSystem(sf, report, n_max, built)
    _validate_system(system)
    return system


def _validate_system(system: NeighborhoodSystem):
    for c in system.report.components:
        levels = system.levels(c.id)
        for small, big in zip(levels[1:], levels[:-1]):
            if not big.cells.contains_subcomplex(small.cells):
                raise InvariantError("neighborhood-nesting",
                                     f"C{c.id} level {small.level}")
    for ci in system.report.components:
        for cj in system.report.components:
            if ci.id >= cj.id:
                continue
            for n in range(system.n_max + 1):
                a = set(system.neighborhood(ci.id, n).cells.all_simplices())
                b = set(system.neighborhood(cj.id, n).cells.all_simplices())
                if a & b:
                    raise InvariantError(
                        "neighborhood-disjoint",
                        f"C{ci.id} and C{cj.id} overlap at level {n}")


def relative_poincare(nb: MorseNeighborhood, side: str,
                      field: FieldTag = FieldTag.F2) -> PoincarePolynomial:
    """Relative Poincare polynomial of the neighborhood against its
    outflow (minus) or inflow (plus) boundary with the matching lateral
    half."""
    return relative_homology(nb.cells, nb.side_subcomplex(side), field)


def stability_check(system: NeighborhoodSystem,
                    field: FieldTag = FieldTag.F2) -> bool:
    """Relative polynomials must not depend on the shrink level."""
    for c in system.report.components:
        for side in (MINUS, PLUS):
            polys = {relative_poincare(nb, side, field)
                     for nb in system.levels(c.id)}
            if len(polys) != 1:
                return False
    return True


def duality_check(nb: MorseNeighborhood, dim: int,
                  field: FieldTag = FieldTag.F2) -> bool:
    """P_t(N, minus side) == t^dim * P_{1/t}(N, plus side), exactly."""
    p_minus = relative_poincare(nb, MINUS, field)
    p_plus = relative_poincare(nb, PLUS, field)
    if p_plus.degree > dim:
        return False
    return p_minus == p_plus.reversed_at(dim)


class InequalityReport:
    def __init__(self, side: str, total: PoincarePolynomial,
                 summands: List[PoincarePolynomial],
                 remainder: PoincarePolynomial):
        self.side = side  # "descending" or "ascending"
        self.total = total
        self.summands = summands
        self.remainder = remainder

    @property
    def exact(self) -> bool:
        return self.remainder == PoincarePolynomial.zero()

    def verify(self) -> bool:
        one_plus_t = PoincarePolynomial([1, 1])
        lhs = poly_sum(self.summands)
        rhs = self.total + _poly_mul(one_plus_t, self.remainder)
        return lhs == rhs


def _poly_mul(a: PoincarePolynomial, b: PoincarePolynomial) -> PoincarePolynomial:
    out = [0] * (len(a.coeffs) + len(b.coeffs))
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return PoincarePolynomial(out)


def morse_inequalities(p_total: PoincarePolynomial,
                       summands: Sequence[PoincarePolynomial],
                       side: str = "descending") -> InequalityReport:
    """R(t) = (sum of summands - P_t(M)) / (1 + t), which must divide
    exactly with nonnegative coefficients."""
    total = poly_sum(summands)
    n = max(len(total.coeffs), len(p_total.coeffs))
    diff = [total.coefficient(i) - p_total.coefficient(i) for i in range(n)]
    quotient, exact = divide_by_one_plus_t(diff)
    if not exact:
        raise InvariantError("morse-inequalities-divisible",
                             f"{side}: difference not divisible by 1+t")
    if any(q < 0 for q in quotient):
        raise InvariantError("morse-inequalities-nonnegative",
                             f"{side}: remainder {quotient} has a negative entry")
    return InequalityReport(side, p_total, list(summands),
                            PoincarePolynomial(quotient))