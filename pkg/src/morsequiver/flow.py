"""Discrete gradient flow: strata, connecting orbits, quivers, covers.

Routing is steepest descent on vertices of the cut-subdivided complex:
every non-critical vertex routes to its lowest strictly-lower neighbor
(ties broken by smallest vertex id); a cell routes with its lowest
vertex.  Ascent routing is the mirror image.  Critical clusters are
terminal in both directions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .complexes import (ChainComplex, Simplex, Subcomplex, cell_components,
                        chain_complex_of, face_closure, homology)
from .errors import ClassificationError, InvariantError
from .fields import FieldTag
from .poly import PoincarePolynomial
from .quiveralg import Quiver
from .scalarfield import (POINT_INDEX, CriticalReport, Kind, ScalarField,
                          vertex_clusters)


class DiscreteGradient:
    """Descent/ascent routing plus the induced basin assignment."""

    def __init__(self, sf: ScalarField, report: CriticalReport,
                 tie_break: str = "steepest-min-index"):
        self.field = sf
        self.report = report
        self.tie_break = tie_break
        self.desc_target: Dict[int, Optional[int]] = {}
        self.asc_target: Dict[int, Optional[int]] = {}
        self._route()
        self.desc_basin = self._basins(self.desc_target)
        self.asc_basin = self._basins(self.asc_target)
        self.cell_desc: Dict[Simplex, int] = {}
        self.cell_asc: Dict[Simplex, int] = {}
        for s in sf.complex.all_simplices():
            self.cell_desc[s] = self.desc_basin[self._extreme_vertex(s, low=True)]
            self.cell_asc[s] = self.asc_basin[self._extreme_vertex(s, low=False)]

    def _extreme_vertex(self, s: Simplex, low: bool) -> int:
        key = (lambda v: (self.field.values[v], v)) if low else \
            (lambda v: (-self.field.values[v], v))
        return min(s, key=key)

    def _route(self):
        sf, report = self.field, self.report
        adj = sf.complex.vertex_neighbors()
        critical = set(report.by_vertex)
        for v in sorted(adj):
            if v in critical:
                self.desc_target[v] = None
                self.asc_target[v] = None
                continue
            lower = [w for w in adj[v] if sf.values[w] < sf.values[v]]
            upper = [w for w in adj[v] if sf.values[w] > sf.values[v]]
            if not lower or not upper:
                raise ClassificationError(
                    f"regular vertex {v} lacks a strict descent or ascent "
                    "direction (unclassified plateau?)")
            self.desc_target[v] = min(lower, key=lambda w: (sf.values[w], w))
            self.asc_target[v] = min(upper, key=lambda w: (-sf.values[w], w))

    def _basins(self, target: Dict[int, Optional[int]]) -> Dict[int, int]:
        by_vertex = self.report.by_vertex
        basin: Dict[int, int] = {}

        def resolve(v: int) -> int:
            chain = []
            while v not in basin:
                cid = by_vertex.get(v)
                if cid is not None:
                    basin[v] = cid
                    break
                chain.append(v)
                v = target[v]
            cid = basin[v]
            for u in chain:
                basin[u] = cid
            return cid

        for v in sorted(target):
            resolve(v)
        return basin

    def chain_from(self, v: int, descending: bool = True) -> List[int]:
        """Vertex chain from v to its terminal critical cluster."""
        target = self.desc_target if descending else self.asc_target
        out = [v]
        while target[out[-1]] is not None:
            out.append(target[out[-1]])
        return out


def build_gradient(sf: ScalarField, report: CriticalReport) -> DiscreteGradient:
    return DiscreteGradient(sf, report)


class Stratum:
    def __init__(self, component: int, sign: str, cells: List[Simplex]):
        self.component = component
        self.sign = sign  # "plus" or "minus"
        self.cells = cells

    def __repr__(self):
        return f"<W{'+' if self.sign == 'plus' else '-'}_{self.component}: " \
               f"{len(self.cells)} cells>"


def strata(dg: DiscreteGradient, sign: str) -> List[Stratum]:
    """W+ strata (sign='plus', descent basins) or W- (ascent basins)."""
    assign = dg.cell_desc if sign == "plus" else dg.cell_asc
    cells: Dict[int, List[Simplex]] = {c.id: [] for c in dg.report.components}
    for s, cid in assign.items():
        cells[cid].append(s)
    out = [Stratum(cid, sign, sorted(cells[cid])) for cid in sorted(cells)]
    total = sum(len(st.cells) for st in out)
    expect = sum(len(level) for level in dg.field.complex.simplices)
    if total != expect:
        raise InvariantError("strata-partition",
                             f"{total} stratified cells of {expect}")
    return out


class ConnectingComponent:
    def __init__(self, upper: int, lower: int, cells: List[Simplex],
                 closed_in_band: bool):
        self.upper = upper
        self.lower = lower
        self.cells = cells
        self.closed_in_band = closed_in_band

    def __repr__(self):
        flag = "closed" if self.closed_in_band else "open"
        return f"<A {self.upper}->{self.lower} ({flag}, {len(self.cells)})>"


def connecting_components(dg: DiscreteGradient, upper: int,
                          lower: int) -> List[ConnectingComponent]:
    """Components of W-_upper /\\ W+_lower inside the open value band."""
    rep = dg.report
    hi = rep.component(upper).value
    lo = rep.component(lower).value
    if hi <= lo:
        raise ValueError("upper component must have the larger value")
    sf = dg.field
    band_cells = [
        s for s, cid in dg.cell_desc.items()
        if cid == lower and dg.cell_asc[s] == upper
        and all(lo < sf.values[v] < hi for v in s)]
    out = []
    for comp in cell_components(band_cells):
        members = set(comp)
        closed = True
        for s in face_closure(comp):
            if s in members:
                continue
            if all(lo < sf.values[v] < hi for v in s):
                closed = False
                break
        out.append(ConnectingComponent(upper, lower, sorted(comp), closed))
    return out


def build_quiver(dg: DiscreteGradient) -> Quiver:
    """One arrow per closed connecting component, upper to lower."""
    rep = dg.report
    labels = [f"C{c.id}" for c in rep.components]
    grading = {i: c.value for i, c in enumerate(rep.components)}
    arrows: List[Tuple[int, int]] = []
    for cu in rep.components:
        for cl in rep.components:
            if cu.value <= cl.value:
                continue
            for comp in connecting_components(dg, cu.id, cl.id):
                if comp.closed_in_band:
                    arrows.append((cu.id, cl.id))
    return Quiver(len(labels), sorted(arrows), labels=labels, grading=grading)


def build_refined_quiver(dg: DiscreteGradient) -> Quiver:
    """Refined quiver: strata components become u/w vertices.

    u vertices are components of W+_C minus C itself, w vertices the
    same for W-_C; each closed connecting orbit contributes an arrow
    from the w vertex of its upper end to the u vertex of its lower end.
    """
    rep = dg.report
    labels: List[str] = [f"C{c.id}" for c in rep.components]
    grading: Dict[int, Fraction] = {i: c.value for i, c in enumerate(rep.components)}
    index: Dict[Tuple[str, int, int], int] = {("v", c.id, 0): c.id
                                              for c in rep.components}
    u_comp_cells: Dict[int, List[List[Simplex]]] = {}
    w_comp_cells: Dict[int, List[List[Simplex]]] = {}
    arrows: List[Tuple[int, int]] = []

    def add_vertex(kind: str, cid: int, k: int, value) -> int:
        key = (kind, cid, k)
        if key not in index:
            index[key] = len(labels)
            labels.append(f"{kind}{k}_C{cid}")
            grading[index[key]] = Fraction(value)
        return index[key]

    plus = {st.component: st for st in strata(dg, "plus")}
    minus = {st.component: st for st in strata(dg, "minus")}
    for c in rep.components:
        own = set(c.cells.all_simplices())
        ucells = [s for s in plus[c.id].cells if s not in own]
        wcells = [s for s in minus[c.id].cells if s not in own]
        u_comp_cells[c.id] = cell_components(ucells)
        w_comp_cells[c.id] = cell_components(wcells)
        for k, comp in enumerate(u_comp_cells[c.id]):
            hi = max(dg.field.values[v] for s in comp for v in s)
            u = add_vertex("u", c.id, k, (c.value + hi) / 2)
            arrows.append((u, c.id))
        for k, comp in enumerate(w_comp_cells[c.id]):
            lo = min(dg.field.values[v] for s in comp for v in s)
            w = add_vertex("w", c.id, k, (c.value + lo) / 2)
            arrows.append((c.id, w))
    for cu in rep.components:
        for cl in rep.components:
            if cu.value <= cl.value:
                continue
            for comp in connecting_components(dg, cu.id, cl.id):
                if not comp.closed_in_band:
                    continue
                cells = set(comp.cells)
                h_idx = _locate(cells, w_comp_cells[cu.id])
                g_idx = _locate(cells, u_comp_cells[cl.id])
                if h_idx is None or g_idx is None:
                    raise InvariantError(
                        "refined-quiver-strata",
                        f"orbit {cu.id}->{cl.id} not inside a stratum pair")
                arrows.append((index[("w", cu.id, h_idx)],
                               index[("u", cl.id, g_idx)]))
    return Quiver(len(labels), sorted(arrows), labels=labels, grading=grading)


def _locate(cells: Set[Simplex],
            components: List[List[Simplex]]) -> Optional[int]:
    for k, comp in enumerate(components):
        if cells <= set(comp):
            return k
    return None


def _chain_meets(dg: DiscreteGradient, v: int, targets: Set[int]) -> bool:
    for u in dg.chain_from(v, descending=True):
        if u in targets:
            return True
    return False


def morse_cover(dg: DiscreteGradient, system,
                j: Dict[int, int]) -> List[Subcomplex]:
    """Reverse-flow saturations of the Morse neighborhoods N_{C,j(C)}.

    A cell joins the saturation of C when any of its vertices flows
    through N_{C,j(C)}; the result is face-closed and the union covers
    the complex.
    """
    sf = dg.field
    out = []
    hit_cache: Dict[Tuple[int, int], bool] = {}
    for c in dg.report.components:
        nb = system.neighborhood(c.id, j[c.id])
        targets = {v for (v,) in nb.cells.simplices(0)}
        cells = []
        for s in sf.complex.all_simplices():
            ok = False
            for v in s:
                key = (c.id, v)
                if key not in hit_cache:
                    hit_cache[key] = _chain_meets(dg, v, targets)
                if hit_cache[key]:
                    ok = True
                    break
            if ok:
                cells.append(s)
        out.append(Subcomplex(sf.complex, face_closure(cells)))
    union = set()
    for sub in out:
        union.update(sub.all_simplices())
    if len(union) != sum(len(lv) for lv in sf.complex.simplices):
        raise InvariantError("morse-cover-covers", "saturations miss cells")
    return out


def morse_decomposition(dg: DiscreteGradient, system,
                        j: Dict[int, int]) -> List[Subcomplex]:
    """Closed pieces: cells grouped by the highest neighborhood band
    their descent chain passes through, then face-closed."""
    sf = dg.field
    comps = dg.report.components
    by_value = sorted(comps, key=lambda c: (-c.value, c.id))
    targets = {}
    for c in comps:
        nb = system.neighborhood(c.id, j[c.id])
        targets[c.id] = {v for (v,) in nb.cells.simplices(0)}
    first_hit: Dict[int, int] = {}
    for v in sorted(sf.values):
        chain = dg.chain_from(v, descending=True)
        best = None
        for c in by_value:
            if any(u in targets[c.id] for u in chain):
                best = c.id
                break
        if best is None:
            raise InvariantError("morse-decomposition", f"vertex {v} hits no band")
        first_hit[v] = best
    pieces: Dict[int, List[Simplex]] = {c.id: [] for c in comps}
    value_of = {c.id: c.value for c in comps}
    for s in sf.complex.all_simplices():
        cid = max((first_hit[v] for v in s),
                  key=lambda i: (value_of[i], i))
        pieces[cid].append(s)
    out = [Subcomplex(sf.complex, face_closure(pieces[c.id])) for c in comps]
    return out


def decomposition_outflow(dg: DiscreteGradient, pieces: List[Subcomplex],
                          cid: int) -> Subcomplex:
    """Cells a decomposition piece shares with strictly lower pieces."""
    comps = dg.report.components
    mine = set(pieces[cid].all_simplices())
    shared: Set[Simplex] = set()
    for c in comps:
        if c.value >= comps[cid].value:
            continue
        shared.update(s for s in pieces[c.id].all_simplices() if s in mine)
    return Subcomplex(dg.field.complex, shared)


def morse_witten_complex(dg: DiscreteGradient,
                         field: FieldTag) -> ChainComplex:
    """Critical points graded by index; differential counts flow lines
    mod 2.  Rejects non-Morse-Smale input."""
    if field is not FieldTag.F2:
        raise ValueError("flow-line counts are implemented over F2 only")
    rep = dg.report
    for c in rep.components:
        if c.kind not in POINT_INDEX:
            raise ClassificationError(
                f"component C{c.id} is {c.kind.value}; Morse-Smale input "
                "requires nondegenerate critical points")
        if c.kind is Kind.SADDLE and c.multiplicity != 1:
            raise ClassificationError(f"component C{c.id} is a degenerate saddle")
    by_index: Dict[int, List[int]] = {0: [], 1: [], 2: []}
    for c in rep.components:
        by_index[POINT_INDEX[c.kind]].append(c.id)
    pos = {}
    for k, ids in by_index.items():
        for i, cid in enumerate(ids):
            pos[cid] = i
    dims = [len(by_index.get(d, [])) for d in range(3)]
    boundary: List[List[Dict[int, int]]] = [[{} for _ in range(dims[0])]]
    for d in (1, 2):
        cols = []
        for cid in by_index[d]:
            col: Dict[int, int] = {}
            for lower in by_index[d - 1]:
                if rep.component(cid).value <= rep.component(lower).value:
                    continue
                lines = [a for a in connecting_components(dg, cid, lower)
                         if a.closed_in_band]
                if len(lines) % 2:
                    col[pos[lower]] = 1
            cols.append(col)
        boundary.append(cols)
    labels = [[f"C{cid}" for cid in by_index[d]] for d in range(3)]
    return ChainComplex(field, dims, boundary, labels=labels)
