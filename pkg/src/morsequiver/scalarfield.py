"""Piecewise-linear scalar fields and critical classification.

Vertex values are exact rationals.  Plateau clusters (maximal connected
sets of equal-value vertices joined by edges) are classified as units
via the lower/upper link of the contracted cluster, which is what lets
critical circles appear as single components.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .complexes import (SimplicialComplex, Simplex, Subcomplex,
                        cell_components, simplex)
from .errors import ClassificationError, NonManifoldError


class ScalarField:
    """Exact rational vertex values on a simplicial complex."""

    def __init__(self, complex_: SimplicialComplex,
                 values: Dict[int, Fraction],
                 positions: Optional[Dict[int, Tuple[Fraction, ...]]] = None):
        self.complex = complex_
        self.values = {v: Fraction(x) for v, x in values.items()}
        self.positions = positions
        for (v,) in complex_.simplices[0]:
            if v not in self.values:
                raise ValueError(f"vertex {v} has no field value")

    def value(self, v: int) -> Fraction:
        return self.values[v]

    def value_range(self, s: Simplex) -> Tuple[Fraction, Fraction]:
        vals = [self.values[v] for v in s]
        return min(vals), max(vals)

    def min_value(self) -> Fraction:
        return min(self.values.values())

    def max_value(self) -> Fraction:
        return max(self.values.values())


class Kind(enum.Enum):
    MIN = "Min"
    MAX = "Max"
    SADDLE = "Saddle"
    DEGENERATE = "Degenerate"
    BOTT_CIRCLE_MIN = "BottCircleMin"
    BOTT_CIRCLE_MAX = "BottCircleMax"
    OTHER = "Other"


#: Morse index of a nondegenerate point kind on a surface.
POINT_INDEX = {Kind.MIN: 0, Kind.SADDLE: 1, Kind.MAX: 2}


class CriticalComponent:
    def __init__(self, cid: int, vertices: Sequence[int], value: Fraction,
                 kind: Kind, multiplicity: int, cells: Subcomplex):
        self.id = cid
        self.vertices = tuple(sorted(vertices))
        self.value = value
        self.kind = kind
        self.multiplicity = multiplicity  # m for Saddle(m); 0 otherwise
        self.cells = cells

    def is_circle(self) -> bool:
        return self.kind in (Kind.BOTT_CIRCLE_MIN, Kind.BOTT_CIRCLE_MAX)

    def __repr__(self):
        return f"<C{self.id} {self.kind.value} @ {self.value}>"


class CriticalReport:
    def __init__(self, field: ScalarField,
                 components: List[CriticalComponent],
                 regular_clusters: List[Tuple[int, ...]]):
        self.field = field
        self.components = components
        self.regular_clusters = regular_clusters
        self.critical_values: List[Fraction] = sorted(
            {c.value for c in components})
        self.by_vertex: Dict[int, int] = {}
        for c in components:
            for v in c.vertices:
                self.by_vertex[v] = c.id
        cv = self.critical_values
        mids = [cv[0] - 1]
        for a, b in zip(cv, cv[1:]):
            mids.append((a + b) / 2)
        mids.append(cv[-1] + 1)
        #: b_0 < c_1 < b_1 < ... < c_rho < b_rho
        self.midpoints: List[Fraction] = mids

    def component(self, cid: int) -> CriticalComponent:
        return self.components[cid]

    def components_at(self, value: Fraction) -> List[CriticalComponent]:
        return [c for c in self.components if c.value == value]

    def kinds(self) -> List[Kind]:
        return [c.kind for c in self.components]


def vertex_clusters(sf: ScalarField) -> List[Tuple[int, ...]]:
    """Maximal sets of equal-value vertices connected by edges."""
    parent: Dict[int, int] = {v[0]: v[0] for v in sf.complex.simplices[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    if sf.complex.dim >= 1:
        for a, b in sf.complex.simplices[1]:
            if sf.values[a] == sf.values[b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, List[int]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    return [tuple(sorted(groups[k])) for k in sorted(groups)]


def validate_closed_surface(complex_: SimplicialComplex):
    """Every edge in two triangles and every vertex link one cycle."""
    if complex_.dim != 2:
        raise ClassificationError(f"expected a 2-complex, got dim {complex_.dim}")
    cof = complex_.cofaces(1)
    for e, tris in cof.items():
        if len(tris) != 2:
            raise NonManifoldError(e[0], f"edge {e} lies in {len(tris)} triangles")
    for (v,) in complex_.simplices[0]:
        ring = _link_graph(complex_, {v})
        if len(_graph_components(ring)) != 1 or any(
                len(ns) != 2 for ns in ring.values()):
            raise NonManifoldError(v)


def _link_graph(complex_: SimplicialComplex,
                cluster: Set[int]) -> Dict[int, List[int]]:
    """Link of the contracted cluster: outside vertices and edges seen
    from triangles meeting the cluster."""
    adj: Dict[int, Set[int]] = {}
    for tri in complex_.simplices[2]:
        inside = [v for v in tri if v in cluster]
        outside = [v for v in tri if v not in cluster]
        if not inside:
            continue
        if len(outside) == 2:
            a, b = outside
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        elif len(outside) == 1:
            adj.setdefault(outside[0], set())
    if complex_.dim >= 1:
        for a, b in complex_.simplices[1]:
            if (a in cluster) != (b in cluster):
                out = b if a in cluster else a
                adj.setdefault(out, set())
    return {v: sorted(ns) for v, ns in sorted(adj.items())}


def _graph_components(adj: Dict[int, List[int]]) -> List[List[int]]:
    seen: Set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _cluster_has_cycle(sf: ScalarField, cluster: Tuple[int, ...]) -> bool:
    inside = set(cluster)
    edges = sum(1 for a, b in sf.complex.simplices[1]
                if a in inside and b in inside)
    return edges >= len(cluster)


def _classify_cluster(sf: ScalarField, cluster: Tuple[int, ...]):
    """Return (kind, multiplicity) of a plateau cluster, or None if regular."""
    inside = set(cluster)
    c = sf.values[cluster[0]]
    link = _link_graph(sf.complex, inside)
    lower = {v: [w for w in ns if sf.values[w] < c]
             for v, ns in link.items() if sf.values[v] < c}
    upper = {v: [w for w in ns if sf.values[w] > c]
             for v, ns in link.items() if sf.values[v] > c}
    if any(sf.values[v] == c for v in link):
        raise ClassificationError(
            f"cluster {cluster} has an equal-value link vertex")
    n_lower = len(_graph_components(lower)) if lower else 0
    n_upper = len(_graph_components(upper)) if upper else 0
    if _cluster_has_cycle(sf, cluster):
        if n_lower == 0:
            return Kind.BOTT_CIRCLE_MIN, 0
        if n_upper == 0:
            return Kind.BOTT_CIRCLE_MAX, 0
        if n_lower == 1 and n_upper == 1:
            return None
        return Kind.OTHER, 0
    link_comp_count = len(_graph_components(link))
    if n_lower == 0:
        return Kind.MIN, 0
    if n_upper == 0:
        return Kind.MAX, 0
    if n_lower == 1 and n_upper == 1 and link_comp_count == 1:
        return None
    m = n_lower - 1
    return (Kind.DEGENERATE if m >= 2 else Kind.SADDLE), m


def classify_vertices(sf: ScalarField) -> CriticalReport:
    """All critical components of the PL field, with kinds.

    Requires a closed surface; plateau clusters are permitted and are
    classified as units.
    """
    validate_closed_surface(sf.complex)
    clusters = vertex_clusters(sf)
    criticals = []
    regular = []
    for cluster in clusters:
        result = _classify_cluster(sf, cluster)
        if result is None:
            regular.append(cluster)
        else:
            criticals.append((cluster, result))
    criticals.sort(key=lambda item: (sf.values[item[0][0]], item[0]))
    components = []
    for cid, (cluster, (kind, mult)) in enumerate(criticals):
        inside = set(cluster)
        cells = [s for s in sf.complex.all_simplices()
                 if all(v in inside for v in s)]
        components.append(CriticalComponent(
            cid, cluster, sf.values[cluster[0]], kind, mult,
            Subcomplex(sf.complex, cells)))
    if not components:
        raise ClassificationError("field has no critical components")
    return CriticalReport(sf, components, regular)


def sublevel_complex(sf: ScalarField, a: Fraction) -> Subcomplex:
    """Largest face-closed subcomplex with all vertex values <= a."""
    a = Fraction(a)
    cells = [s for s in sf.complex.all_simplices()
             if all(sf.values[v] <= a for v in s)]
    return Subcomplex(sf.complex, cells)


def cut_subdivide(sf: ScalarField, levels: Iterable[Fraction]) -> ScalarField:
    """Split every edge strictly crossing a level at the exact point.

    After cutting, each f^{-1}(b) for a cut level b is a full
    subcomplex.  Levels that cross nothing are no-ops, so repeated cuts
    are idempotent.
    """
    tops = _top_cells(sf.complex)
    values = dict(sf.values)
    positions = dict(sf.positions) if sf.positions else None
    next_id = max(values) + 1
    for b in sorted(set(Fraction(x) for x in levels)):
        cut_points: Dict[Tuple[int, int], int] = {}
        edges = sorted({e for top in tops for e in _edges_of(top)})
        for a_, b_ in edges:
            lo, hi = sorted((a_, b_), key=lambda v: values[v])
            if values[lo] < b < values[hi]:
                cut_points[(a_, b_)] = next_id
                values[next_id] = b
                if positions is not None:
                    t = (b - values[lo]) / (values[hi] - values[lo])
                    pl, ph = positions[lo], positions[hi]
                    positions[next_id] = tuple(
                        pl[i] + t * (ph[i] - pl[i]) for i in range(len(pl)))
                next_id += 1
        if not cut_points:
            continue
        new_tops = []
        for top in tops:
            new_tops.extend(_split_cell(top, cut_points, values, b))
        tops = new_tops
    complex_ = SimplicialComplex(tops)
    kept = {v[0] for v in complex_.simplices[0]}
    return ScalarField(complex_, {v: values[v] for v in kept},
                       {v: positions[v] for v in kept} if positions else None)


def _top_cells(complex_: SimplicialComplex) -> List[Simplex]:
    tops = list(complex_.simplices[complex_.dim]) if complex_.dim >= 0 else []
    for d in range(complex_.dim - 1, -1, -1):
        cof = complex_.cofaces(d)
        tops.extend(s for s, above in cof.items() if not above)
    return tops


def _edges_of(cell: Simplex) -> List[Tuple[int, int]]:
    n = len(cell)
    return [(cell[i], cell[j]) for i in range(n) for j in range(i + 1, n)]


def _split_cell(cell: Simplex, cuts: Dict[Tuple[int, int], int],
                values: Dict[int, Fraction], b: Fraction) -> List[Simplex]:
    if len(cell) == 1:
        return [cell]
    if len(cell) == 2:
        p = cuts.get(cell)
        if p is None:
            return [cell]
        return [simplex((cell[0], p)), simplex((p, cell[1]))]
    cut_edges = [(e, cuts[e]) for e in _edges_of(cell) if e in cuts]
    if not cut_edges:
        return [cell]
    if len(cut_edges) == 1:
        (e, p) = cut_edges[0]
        (w,) = [v for v in cell if v not in e]
        assert values[w] == b, "single-edge cut with off-level apex"
        return [simplex((w, e[0], p)), simplex((w, p, e[1]))]
    assert len(cut_edges) == 2, "a linear level cannot cross three edges"
    (e1, p1), (e2, p2) = cut_edges
    (apex,) = [v for v in cell if v in e1 and v in e2]
    base1 = e1[0] if e1[1] == apex else e1[1]
    base2 = e2[0] if e2[1] == apex else e2[1]
    tris = [simplex((apex, p1, p2))]
    # quad (p1, p2, base2, base1): pick the flatter diagonal
    d1 = abs(b - values[base2])  # diagonal p1 -- base2
    d2 = abs(b - values[base1])  # diagonal p2 -- base1
    if (d1, base2, p1) <= (d2, base1, p2):
        tris.append(simplex((p1, base2, p2)))
        tris.append(simplex((p1, base1, base2)))
    else:
        tris.append(simplex((p2, base1, p1)))
        tris.append(simplex((p2, base2, base1)))
    return tris


class ReebGraph:
    def __init__(self, nodes: List[Tuple[int, int]],
                 edges: List[Tuple[Tuple[int, int], Tuple[int, int]]]):
        self.nodes = nodes
        self.edges = edges

    def first_betti(self) -> int:
        comp = _graph_components(self._adjacency())
        return len(self.edges) - len(self.nodes) + len(comp)

    def _adjacency(self) -> Dict[int, List[int]]:
        idx = {n: i for i, n in enumerate(self.nodes)}
        adj: Dict[int, Set[int]] = {i: set() for i in range(len(self.nodes))}
        for a, b in self.edges:
            adj[idx[a]].add(idx[b])
            adj[idx[b]].add(idx[a])
        return {v: sorted(ns) for v, ns in adj.items()}


def reeb_graph(sf: ScalarField,
               report: Optional[CriticalReport] = None) -> ReebGraph:
    """Reeb graph from critical-slab components and regular sheets."""
    report = report or classify_vertices(sf)
    mids = report.midpoints
    cv = report.critical_values
    # narrow slab around each critical value, cut exactly at its walls
    walls = []
    for ell, c in enumerate(cv):
        walls.append(((mids[ell] + c) / 2, (c + mids[ell + 1]) / 2))
    cut = cut_subdivide(sf, [w for pair in walls for w in pair])
    cut_report = classify_vertices(cut)
    crit_vertices = set(cut_report.by_vertex)

    def slab_cells(lo, hi):
        return [s for s in cut.complex.all_simplices()
                if all(lo <= cut.values[v] <= hi for v in s)]

    node_regions: Dict[Tuple[int, int], List[Simplex]] = {}
    node_cells: Set[Simplex] = set()
    for ell, c in enumerate(cv):
        comps = cell_components(slab_cells(*walls[ell]))
        k = 0
        for comp in comps:
            if any(v in crit_vertices for s in comp for v in s):
                node_regions[(ell, k)] = comp
                node_cells.update(comp)
                k += 1
    regular = [s for s in cut.complex.all_simplices() if s not in node_cells]
    nodes = sorted(node_regions)
    vertex_to_node: Dict[int, Tuple[int, int]] = {}
    for key, comp in node_regions.items():
        for s in comp:
            for v in s:
                vertex_to_node.setdefault(v, key)
    edges = []
    for sheet in cell_components(regular):
        contact: Dict[Tuple[int, int], List[Simplex]] = {}
        for s in sheet:
            for v in s:
                key = vertex_to_node.get(v)
                if key is not None:
                    contact.setdefault(key, []).append(s)
        ends = []
        for key in sorted(contact):
            ends.extend([key] * len(cell_components(contact[key])))
        if len(ends) != 2:
            raise ClassificationError(
                f"regular sheet touches {len(ends)} node boundaries")
        edges.append((ends[0], ends[1]))
    return ReebGraph(nodes, sorted(edges))
