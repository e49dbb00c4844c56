"""Simplicial complexes, chain complexes and exact homology.

Simplices are tuples of strictly increasing vertex ids.  A complex
stores its simplices per dimension in sorted order, so indices are
stable and every run is deterministic.  Boundary matrices use the
orientation induced by the sorted vertex order.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .fields import FieldTag
from .linalg import Col, Echelon, rank_of
from .poly import PoincarePolynomial

Simplex = Tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if not vs:
        raise ValueError("empty simplex")
    return vs


def faces(s: Simplex) -> List[Simplex]:
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


class SimplicialComplex:
    """Face-closed collection of simplices with stable per-dim indices."""

    def __init__(self, top_simplices: Iterable[Iterable[int]]):
        by_dim: Dict[int, Set[Simplex]] = {}
        stack = [simplex(s) for s in top_simplices]
        seen: Set[Simplex] = set()
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.add(s)
            by_dim.setdefault(len(s) - 1, set()).add(s)
            stack.extend(faces(s))
        self.dim = max(by_dim) if by_dim else -1
        self.simplices: List[List[Simplex]] = [
            sorted(by_dim.get(d, ())) for d in range(self.dim + 1)]
        self.index: List[Dict[Simplex, int]] = [
            {s: i for i, s in enumerate(level)} for level in self.simplices]
        self.vertex_count = len(self.simplices[0]) if self.dim >= 0 else 0

    def counts(self) -> List[int]:
        return [len(level) for level in self.simplices]

    def has(self, s: Simplex) -> bool:
        d = len(s) - 1
        return d <= self.dim and s in self.index[d]

    def all_simplices(self) -> Iterable[Simplex]:
        for level in self.simplices:
            yield from level

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level)
                   for d, level in enumerate(self.simplices))

    def vertex_neighbors(self) -> Dict[int, List[int]]:
        """Adjacency lists from the edge set, sorted."""
        adj: Dict[int, Set[int]] = {v[0]: set() for v in self.simplices[0]}
        if self.dim >= 1:
            for a, b in self.simplices[1]:
                adj[a].add(b)
                adj[b].add(a)
        return {v: sorted(ns) for v, ns in adj.items()}

    def cofaces(self, d: int) -> Dict[Simplex, List[Simplex]]:
        """Map each d-simplex to the (d+1)-simplices containing it."""
        out: Dict[Simplex, List[Simplex]] = {s: [] for s in self.simplices[d]}
        if d + 1 <= self.dim:
            for t in self.simplices[d + 1]:
                for f in faces(t):
                    out[f].append(t)
        return out

    def full_subcomplex(self) -> "Subcomplex":
        return Subcomplex(self, self.all_simplices())


class Subcomplex:
    """Face-closed subset of a parent complex (per-dim membership masks)."""

    def __init__(self, parent: SimplicialComplex, members: Iterable[Simplex],
                 close_faces: bool = False):
        self.parent = parent
        self.mask: List[List[bool]] = [
            [False] * len(level) for level in parent.simplices]
        todo = list(members)
        while todo:
            s = todo.pop()
            d = len(s) - 1
            i = parent.index[d].get(s)
            if i is None:
                raise ValueError(f"simplex {s} not in parent complex")
            if self.mask[d][i]:
                continue
            self.mask[d][i] = True
            if close_faces:
                todo.extend(faces(s))
        if not close_faces:
            self._check_face_closed()

    def _check_face_closed(self):
        for d in range(1, len(self.mask)):
            for i, present in enumerate(self.mask[d]):
                if not present:
                    continue
                s = self.parent.simplices[d][i]
                for f in faces(s):
                    if not self.mask[d - 1][self.parent.index[d - 1][f]]:
                        raise ValueError(f"subcomplex not face-closed at {s}")

    def has(self, s: Simplex) -> bool:
        d = len(s) - 1
        i = self.parent.index[d].get(s) if d < len(self.mask) else None
        return i is not None and self.mask[d][i]

    def simplices(self, d: int) -> List[Simplex]:
        if d >= len(self.mask):
            return []
        level = self.parent.simplices[d]
        return [level[i] for i, m in enumerate(self.mask[d]) if m]

    def all_simplices(self) -> Iterable[Simplex]:
        for d in range(len(self.mask)):
            yield from self.simplices(d)

    def counts(self) -> List[int]:
        return [sum(1 for m in level if m) for level in self.mask]

    def is_empty(self) -> bool:
        return all(not any(level) for level in self.mask)

    def contains_subcomplex(self, other: "Subcomplex") -> bool:
        if other.parent is not self.parent:
            raise ValueError("subcomplexes have different parents")
        for mine, theirs in zip(self.mask, other.mask):
            for m, t in zip(mine, theirs):
                if t and not m:
                    return False
        return True

    def union(self, other: "Subcomplex") -> "Subcomplex":
        merged = list(self.all_simplices()) + list(other.all_simplices())
        return Subcomplex(self.parent, merged)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts()))

    def component_count(self) -> int:
        return len(cell_components(list(self.all_simplices())))


class ChainComplex:
    """Chain complex with sparse boundary columns per degree.

    ``boundary[d][j]`` is the sparse column of the boundary of the j-th
    d-basis element, with rows indexing the (d-1)-basis.
    """

    def __init__(self, field: FieldTag, dims: Sequence[int],
                 boundary: Sequence[Sequence[Col]],
                 labels: Optional[Sequence[Sequence[object]]] = None):
        self.field = field
        self.dims = list(dims)
        self.boundary = [list(cols) for cols in boundary]
        self.labels = [list(ls) for ls in labels] if labels is not None else None
        for d, cols in enumerate(self.boundary):
            if len(cols) != self.dims[d]:
                raise ValueError(f"boundary column count mismatch in degree {d}")

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def boundary_of(self, d: int, j: int) -> Col:
        return self.boundary[d][j]

    def apply_boundary(self, d: int, col: Col) -> Col:
        """Boundary of a sparse d-chain."""
        out: Dict[int, object] = {}
        for j, coeff in col.items():
            for r, v in self.boundary[d][j].items():
                out[r] = out.get(r, 0) + coeff * v
        if self.field is FieldTag.F2:
            return {r: 1 for r, v in out.items() if int(v) % 2}
        return {r: v for r, v in out.items() if v != 0}


def boundary_column(field: FieldTag, s: Simplex,
                    row_index: Dict[Simplex, int]) -> Col:
    """Sparse boundary of one simplex; rows restricted to row_index."""
    col: Col = {}
    for i in range(len(s)):
        f = s[:i] + s[i + 1:]
        r = row_index.get(f)
        if r is None:
            continue
        col[r] = 1 if field is FieldTag.F2 else (1 if i % 2 == 0 else -1)
    return col


def chain_complex_of(sub: Subcomplex, field: FieldTag,
                     relative_to: Optional[Subcomplex] = None) -> ChainComplex:
    """Simplicial chains of a subcomplex, optionally relative to A <= X."""
    if relative_to is not None:
        if relative_to.parent is not sub.parent:
            raise ValueError("relative pair must share a parent complex")
        if not sub.contains_subcomplex(relative_to):
            raise ValueError("A is not contained in X")
    basis: List[List[Simplex]] = []
    for d in range(len(sub.mask)):
        level = [s for s in sub.simplices(d)
                 if relative_to is None or not relative_to.has(s)]
        basis.append(level)
    while basis and not basis[-1]:
        basis.pop()
    index = [{s: i for i, s in enumerate(level)} for level in basis]
    dims = [len(level) for level in basis]
    boundary: List[List[Col]] = []
    for d, level in enumerate(basis):
        if d == 0:
            boundary.append([{} for _ in level])
            continue
        boundary.append([boundary_column(field, s, index[d - 1]) for s in level])
    return ChainComplex(field, dims, boundary, labels=basis)


def validate_chain_complex(cc: ChainComplex) -> bool:
    """True iff the composite of consecutive boundaries is zero."""
    for d in range(2, len(cc.dims)):
        for j in range(cc.dims[d]):
            if not _col_zero(cc.apply_boundary(d - 1, cc.boundary[d][j])):
                return False
    return True


def _col_zero(col: Col) -> bool:
    return not any(v != 0 for v in col.values())


def homology(cc: ChainComplex, field: Optional[FieldTag] = None) -> PoincarePolynomial:
    """Betti numbers via exact rank computations on boundary columns."""
    if field is not None and field is not cc.field:
        raise ValueError("field tag does not match complex")
    betti = []
    ranks = [rank_of(cols, cc.field) for cols in cc.boundary]
    ranks.append(0)
    for d, n in enumerate(cc.dims):
        betti.append(n - ranks[d] - ranks[d + 1])
    return PoincarePolynomial(betti)


def homology_of(sub: Subcomplex, field: FieldTag) -> PoincarePolynomial:
    return homology(chain_complex_of(sub, field))


def relative_homology(X: Subcomplex, A: Optional[Subcomplex],
                      field: FieldTag) -> PoincarePolynomial:
    """Homology of C(X)/C(A) for a face-closed pair A <= X."""
    if A is None or A.is_empty():
        return homology_of(X, field)
    return homology(chain_complex_of(X, field, relative_to=A))


def euler_check(X: Subcomplex, field: FieldTag) -> bool:
    """Alternating cell count equals the alternating Betti sum."""
    return X.euler_characteristic() == homology_of(X, field).euler()


def cell_components(cells: Sequence[Simplex]) -> List[List[Simplex]]:
    """Connected components of a cell set under the face relation.

    Two cells are adjacent when one is a facet of the other; the set
    need not be face-closed.
    """
    cells = sorted(set(cells))
    pos = {s: i for i, s in enumerate(cells)}
    parent = list(range(len(cells)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for s in cells:
        i = pos[s]
        for f in faces(s):
            j = pos.get(f)
            if j is not None:
                union(i, j)
    groups: Dict[int, List[Simplex]] = {}
    for s in cells:
        groups.setdefault(find(pos[s]), []).append(s)
    return [groups[k] for k in sorted(groups)]


def face_closure(cells: Iterable[Simplex]) -> List[Simplex]:
    out: Set[Simplex] = set()
    stack = list(cells)
    while stack:
        s = stack.pop()
        if s in out:
            continue
        out.add(s)
        stack.extend(faces(s))
    return sorted(out)
