"""Acyclic quivers, path counting, final subquivers, multicomplexes.

Arrows are stored as (tail, head) pairs: the tail is the source vertex
(the upper end for flow quivers) and the head is the target.  A path
a_1...a_d requires tail(a_k) = head(a_{k+1}), i.e. composition is
written right to left; path counting only ever needs the adjacency
matrix, where this convention is invisible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import InvariantError
from .fields import FieldTag
from .complexes import ChainComplex
from .linalg import Col
from .poly import PoincarePolynomial


class Quiver:
    def __init__(self, n_vertices: int, arrows: Sequence[Tuple[int, int]],
                 labels: Optional[Sequence[str]] = None,
                 grading: Optional[Dict[int, Fraction]] = None):
        self.n = int(n_vertices)
        self.arrows = [(int(t), int(h)) for t, h in arrows]
        for t, h in self.arrows:
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ValueError(f"arrow ({t},{h}) out of range")
        self.labels = list(labels) if labels else [f"v{i}" for i in range(self.n)]
        self.grading = dict(grading) if grading else None

    def multiplicity(self) -> List[List[int]]:
        """Adjacency matrix: entry [t][h] counts arrows t -> h."""
        m = [[0] * self.n for _ in range(self.n)]
        for t, h in self.arrows:
            m[t][h] += 1
        return m

    def arrow_count(self, tail: int, head: int) -> int:
        return sum(1 for t, h in self.arrows if t == tail and h == head)

    def out_arrows(self, v: int) -> List[Tuple[int, int]]:
        return [a for a in self.arrows if a[0] == v]

    def in_arrows(self, v: int) -> List[Tuple[int, int]]:
        return [a for a in self.arrows if a[1] == v]

    def __repr__(self):
        return f"<Quiver {self.n} vertices, {len(self.arrows)} arrows>"


def validate_acyclic(q: Quiver) -> bool:
    """True iff a topological order exists."""
    indeg = [0] * q.n
    out: Dict[int, List[int]] = {v: [] for v in range(q.n)}
    for t, h in q.arrows:
        indeg[h] += 1
        out[t].append(h)
    ready = [v for v in range(q.n) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for h in out[v]:
            indeg[h] -= 1
            if indeg[h] == 0:
                ready.append(h)
    return seen == q.n


def path_count_matrix(q: Quiver, r: int) -> List[List[int]]:
    """r-th power of the arrow multiplicity matrix."""
    if r < 1:
        raise ValueError("path length must be >= 1")
    m = q.multiplicity()
    out = m
    for _ in range(r - 1):
        out = _mat_mul(out, m)
    return out


def _mat_mul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def path_count(q: Quiver, source: int, target: int, r: int) -> int:
    return path_count_matrix(q, r)[source][target]


def power_quiver(q: Quiver, r: int) -> Quiver:
    """Same vertices; one arrow per directed path of length exactly r."""
    counts = path_count_matrix(q, r)
    arrows = []
    for t in range(q.n):
        for h in range(q.n):
            arrows.extend([(t, h)] * counts[t][h])
    return Quiver(q.n, arrows, labels=q.labels, grading=q.grading)


def longest_path_length(q: Quiver) -> int:
    if not validate_acyclic(q):
        raise InvariantError("quiver-acyclic", "cycle found")
    memo: Dict[int, int] = {}
    out: Dict[int, List[int]] = {v: [] for v in range(q.n)}
    for t, h in q.arrows:
        out[t].append(h)

    def depth(v: int) -> int:
        if v not in memo:
            memo[v] = max((1 + depth(h) for h in out[v]), default=0)
        return memo[v]

    return max((depth(v) for v in range(q.n)), default=0)


def has_path(q: Quiver, source: int, target: int) -> bool:
    if source == target:
        return True
    seen = {source}
    stack = [source]
    out: Dict[int, List[int]] = {v: [] for v in range(q.n)}
    for t, h in q.arrows:
        out[t].append(h)
    while stack:
        v = stack.pop()
        for h in out[v]:
            if h == target:
                return True
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return False


class RQuiver:
    """Quiver graded by a real-valued vertex function (values drop along
    arrows), hence acyclic."""

    def __init__(self, quiver: Quiver, grading: Dict[int, Fraction]):
        self.quiver = quiver
        self.grading = {v: Fraction(x) for v, x in grading.items()}
        for t, h in quiver.arrows:
            if not self.grading[t] > self.grading[h]:
                raise InvariantError(
                    "rquiver-grading",
                    f"arrow {t}->{h} does not strictly decrease the grading")

    @classmethod
    def from_quiver(cls, q: Quiver) -> "RQuiver":
        if q.grading is None:
            raise ValueError("quiver carries no grading")
        return cls(q, q.grading)


class FinalSubquiver:
    def __init__(self, quiver: Quiver, vertex_subset: Iterable[int]):
        self.quiver = quiver
        self.vertices: Set[int] = set(int(v) for v in vertex_subset)
        for t, h in quiver.arrows:
            if t in self.vertices and h not in self.vertices:
                raise InvariantError(
                    "final-subquiver",
                    f"arrow {t}->{h} leaves the vertex subset")

    def intersection(self, other: "FinalSubquiver") -> "FinalSubquiver":
        return FinalSubquiver(self.quiver, self.vertices & other.vertices)

    def union(self, other: "FinalSubquiver") -> "FinalSubquiver":
        return FinalSubquiver(self.quiver, self.vertices | other.vertices)


def final_subquiver(rq: RQuiver, threshold: Fraction) -> FinalSubquiver:
    """Vertices with grading strictly below the threshold."""
    threshold = Fraction(threshold)
    subset = {v for v in range(rq.quiver.n) if rq.grading[v] < threshold}
    return FinalSubquiver(rq.quiver, subset)


class QuiverMulticomplex:
    """Graded spaces at quiver vertices with degree-lowering maps along
    path classes, one block per (path length r, tail, head).

    ``spaces[(v, n)]`` is a list of basis labels; ``maps[(r, t, h, n)]``
    is a dense matrix (rows x cols over the field) from (t, n) to
    (h, n-1).  The sum of all blocks must square to zero.
    """

    def __init__(self, quiver: Quiver, field: FieldTag,
                 spaces: Dict[Tuple[int, int], List[str]],
                 maps: Dict[Tuple[int, int, int, int], List[List]]):
        self.quiver = quiver
        self.field = field
        self.spaces = {k: list(v) for k, v in spaces.items() if v}
        self.maps = {}
        for (r, t, h, n), mat in maps.items():
            if _mat_is_zero(mat):
                continue
            rows = len(self.spaces.get((h, n - 1), []))
            cols = len(self.spaces.get((t, n), []))
            if len(mat) != rows or any(len(row) != cols for row in mat):
                raise ValueError(
                    f"map block {(r, t, h, n)} has shape "
                    f"{len(mat)}x{len(mat[0]) if mat else 0}, expected {rows}x{cols}")
            if r < 1:
                raise ValueError("path-class length must be >= 1")
            self.maps[(r, t, h, n)] = [list(row) for row in mat]

    def degrees(self) -> List[int]:
        return sorted({n for (_, n) in self.spaces})

    def dim(self, v: int, n: int) -> int:
        return len(self.spaces.get((v, n), []))

    def total_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (v, n), basis in self.spaces.items():
            out[n] = out.get(n, 0) + len(basis)
        return out


def _mat_is_zero(mat) -> bool:
    return all(all(x == 0 for x in row) for row in mat)


def _block_offsets(mc: QuiverMulticomplex) -> Dict[Tuple[int, int], int]:
    offsets = {}
    for n in mc.degrees():
        pos = 0
        for v in range(mc.quiver.n):
            if (v, n) in mc.spaces:
                offsets[(v, n)] = pos
                pos += mc.dim(v, n)
    return offsets


def _assemble_degree_map(mc: QuiverMulticomplex, n: int,
                         lengths: Optional[Set[int]] = None) -> Dict[Tuple[int, int], object]:
    """Entries of the total map from degree n to n-1 as {(row, col): val},
    in the block offsets order, optionally restricted to path lengths."""
    offsets = _block_offsets(mc)
    entries: Dict[Tuple[int, int], object] = {}
    for (r, t, h, nn), mat in mc.maps.items():
        if nn != n or (lengths is not None and r not in lengths):
            continue
        ro, co = offsets[(h, n - 1)], offsets[(t, n)]
        for i, row in enumerate(mat):
            for j, x in enumerate(row):
                if x != 0:
                    key = (ro + i, co + j)
                    entries[key] = entries.get(key, 0) + x
    return entries


def validate_multicomplex(mc: QuiverMulticomplex) -> Dict[str, bool]:
    """Check D^2 = 0 and the homogeneous (strict) refinement.

    Also verifies every nonzero block sits over a path class of its
    stated length in the supporting quiver.
    """
    counts_by_r: Dict[int, List[List[int]]] = {}
    for (r, t, h, n) in mc.maps:
        if r not in counts_by_r:
            counts_by_r[r] = path_count_matrix(mc.quiver, r)
        if counts_by_r[r][t][h] == 0:
            raise InvariantError(
                "multicomplex-support",
                f"block of length {r} from {t} to {h} has no such path")
    degrees = mc.degrees()
    square_zero = True
    strict = True
    max_len = max((r for (r, _, _, _) in mc.maps), default=1)
    for n in degrees:
        if _compose(mc, n, None):
            square_zero = False
        for j in range(2, 2 * max_len + 1):
            if _compose(mc, n, j):
                strict = False
    if not square_zero:
        strict = False
    return {"square_zero": square_zero, "strict": strict}


def _compose(mc: QuiverMulticomplex, n: int, total_length: Optional[int]):
    """D_m after D_r from degree n, summed over m + r = total_length
    (all pairs when total_length is None)."""
    out: Dict[Tuple[int, int], object] = {}
    offsets = _block_offsets(mc)
    for (r1, t1, h1, n1), m1 in mc.maps.items():
        if n1 != n:
            continue
        for (r2, t2, h2, n2), m2 in mc.maps.items():
            if n2 != n - 1 or t2 != h1:
                continue
            if total_length is not None and r1 + r2 != total_length:
                continue
            ro = offsets[(h2, n - 2)]
            co = offsets[(t1, n)]
            for i in range(len(m2)):
                for j in range(len(m1[0]) if m1 else 0):
                    acc = 0
                    for k in range(len(m1)):
                        acc += m2[i][k] * m1[k][j]
                    if acc != 0:
                        key = (ro + i, co + j)
                        out[key] = out.get(key, 0) + acc
    if mc.field is FieldTag.F2:
        return {k: v % 2 for k, v in out.items() if v % 2}
    return {k: v for k, v in out.items() if v != 0}


def total_complex(mc: QuiverMulticomplex) -> ChainComplex:
    """Direct sum over vertices per degree, with the summed differential."""
    report = validate_multicomplex(mc)
    if not report["square_zero"]:
        raise InvariantError("multicomplex-square-zero", "D^2 != 0")
    degrees = mc.degrees()
    if not degrees:
        return ChainComplex(mc.field, [0], [[]])
    lo, hi = min(degrees), max(degrees)
    if lo < 0:
        raise ValueError("total complex expects nonnegative degrees")
    offsets = _block_offsets(mc)
    dims = []
    for n in range(hi + 1):
        dims.append(sum(mc.dim(v, n) for v in range(mc.quiver.n)))
    labels = []
    for n in range(hi + 1):
        level = []
        for v in range(mc.quiver.n):
            level.extend(f"{mc.quiver.labels[v]}:{b}"
                         for b in mc.spaces.get((v, n), []))
        labels.append(level)
    boundary: List[List[Col]] = []
    for n in range(hi + 1):
        cols: List[Col] = [dict() for _ in range(dims[n])]
        if n > 0:
            entries = _assemble_degree_map(mc, n)
            for (i, j), x in entries.items():
                val = x % 2 if mc.field is FieldTag.F2 else Fraction(x)
                if val != 0:
                    cols[j][i] = val
        boundary.append(cols)
    return ChainComplex(mc.field, dims, boundary, labels=labels)


def to_dot(q: Quiver, value_labels: bool = True) -> str:
    """Graphviz DOT text with deterministic vertex and edge order."""
    lines = ["digraph quiver {"]
    for v in range(q.n):
        label = q.labels[v]
        if value_labels and q.grading is not None:
            label = f"{label}@{_frac_str(q.grading[v])}"
        lines.append(f'  n{v} [label="{label}"];')
    for t, h in sorted(q.arrows):
        lines.append(f"  n{t} -> n{h};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
