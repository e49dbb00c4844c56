"""Exact sparse linear algebra over GF(2) and Q.

Vectors are sparse columns ``{row_index: coefficient}`` with nonzero
coefficients only.  Internally GF(2) columns become Python int bitmasks
(row i <-> bit i), which keeps Gaussian elimination fast even for the
complexes produced by repeated cut-subdivision.  Rational columns stay
as Fraction dicts.

The two workhorses are ``kernel_combos`` (kernel of a sparse column
family, with the combinations tracked) and ``QuotientBasis`` (a basis of
span(candidates) modulo span(denominator), with coordinate lookup).
Both are used by the homology and spectral-sequence code.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

from .fields import FieldTag

Col = Dict[int, object]


def _to_mask(col: Col) -> int:
    mask = 0
    for row, val in col.items():
        if int(val) % 2:
            mask |= 1 << row
    return mask


def _from_mask(mask: int) -> Col:
    col: Col = {}
    row = 0
    while mask:
        if mask & 1:
            col[row] = 1
        mask >>= 1
        row += 1
    return col


def _q_clean(col: Col) -> Dict[int, Fraction]:
    return {r: Fraction(v) for r, v in col.items() if v != 0}


def col_is_zero(col: Col) -> bool:
    return not any(v != 0 for v in col.values())


def col_add(field: FieldTag, a: Col, b: Col, scale=1) -> Col:
    """a + scale * b as sparse columns."""
    if field is FieldTag.F2:
        return _from_mask(_to_mask(a) ^ _to_mask(b))
    out = dict(_q_clean(a))
    s = Fraction(scale)
    for r, v in b.items():
        new = out.get(r, Fraction(0)) + s * Fraction(v)
        if new == 0:
            out.pop(r, None)
        else:
            out[r] = new
    return out


class _EchelonF2:
    def __init__(self):
        self.pivots: Dict[int, List] = {}  # pivot bit -> [mask, payload]

    def reduce(self, mask: int, on_hit=None) -> int:
        while mask:
            p = mask.bit_length() - 1
            entry = self.pivots.get(p)
            if entry is None:
                return mask
            mask ^= entry[0]
            if on_hit is not None:
                on_hit(entry[1])
        return 0

    def insert(self, mask: int, payload=None) -> bool:
        mask = self.reduce(mask)
        if mask == 0:
            return False
        self.pivots[mask.bit_length() - 1] = [mask, payload]
        return True


class _EchelonQ:
    def __init__(self):
        self.pivots: Dict[int, List] = {}  # pivot row -> [col, payload]

    def reduce(self, col: Dict[int, Fraction], on_hit=None) -> Dict[int, Fraction]:
        col = dict(col)
        while col:
            p = max(col)
            entry = self.pivots.get(p)
            if entry is None:
                return col
            lead = entry[0]
            coeff = col[p] / lead[p]
            for r, v in lead.items():
                new = col.get(r, Fraction(0)) - coeff * v
                if new == 0:
                    col.pop(r, None)
                else:
                    col[r] = new
            if on_hit is not None:
                on_hit(entry[1], coeff)
        return col

    def insert(self, col: Dict[int, Fraction], payload=None) -> bool:
        col = self.reduce(col)
        if not col:
            return False
        self.pivots[max(col)] = [col, payload]
        return True


class Echelon:
    """Echelonized span of sparse columns; supports rank and membership."""

    def __init__(self, field: FieldTag, columns: Iterable[Col] = ()):
        self.field = field
        self._impl = _EchelonF2() if field is FieldTag.F2 else _EchelonQ()
        for col in columns:
            self.insert(col)

    def insert(self, col: Col) -> bool:
        if self.field is FieldTag.F2:
            return self._impl.insert(_to_mask(col))
        return self._impl.insert(_q_clean(col))

    def residual(self, col: Col) -> Col:
        if self.field is FieldTag.F2:
            return _from_mask(self._impl.reduce(_to_mask(col)))
        return self._impl.reduce(_q_clean(col))

    def contains(self, col: Col) -> bool:
        return col_is_zero(self.residual(col))

    @property
    def rank(self) -> int:
        return len(self._impl.pivots)


def rank_of(columns: Sequence[Col], field: FieldTag) -> int:
    return Echelon(field, columns).rank


def kernel_combos(columns: Sequence[Col], field: FieldTag) -> List[Col]:
    """Kernel of the map sending basis vector j to columns[j].

    Returns combinations ``{j: coeff}`` spanning the kernel, found by
    left-to-right reduction with tracking (persistence-style).
    """
    combos: List[Col] = []
    if field is FieldTag.F2:
        ech: Dict[int, List[int]] = {}  # pivot -> [mask, combo]
        for j, col in enumerate(columns):
            mask = _to_mask(col)
            combo = 1 << j
            while mask:
                p = mask.bit_length() - 1
                if p not in ech:
                    break
                mask ^= ech[p][0]
                combo ^= ech[p][1]
            if mask == 0:
                combos.append({k: 1 for k in _mask_bits(combo)})
            else:
                ech[mask.bit_length() - 1] = [mask, combo]
        return combos

    echq: Dict[int, List] = {}
    for j, col in enumerate(columns):
        cur = _q_clean(col)
        combo: Dict[int, Fraction] = {j: Fraction(1)}
        while cur:
            p = max(cur)
            if p not in echq:
                break
            lead, lead_combo = echq[p]
            coeff = cur[p] / lead[p]
            for r, v in lead.items():
                new = cur.get(r, Fraction(0)) - coeff * v
                if new == 0:
                    cur.pop(r, None)
                else:
                    cur[r] = new
            for k, v in lead_combo.items():
                new = combo.get(k, Fraction(0)) - coeff * v
                if new == 0:
                    combo.pop(k, None)
                else:
                    combo[k] = new
        if not cur:
            combos.append(combo)
        else:
            echq[max(cur)] = [cur, combo]
    return combos


def _mask_bits(mask: int) -> List[int]:
    bits = []
    i = 0
    while mask:
        if mask & 1:
            bits.append(i)
        mask >>= 1
        i += 1
    return bits


class QuotientBasis:
    """Basis of span(candidates) / span(denominator).

    Representative vectors are the echelon residuals of the candidates
    after reducing modulo the denominator span; ``coords`` expresses any
    vector of span(denominator + reps) in this representative basis.
    """

    def __init__(self, field: FieldTag, denominator: Iterable[Col]):
        self.field = field
        self.reps: List[Col] = []
        if field is FieldTag.F2:
            self._ech = _EchelonF2()
            for col in denominator:
                self._ech.insert(_to_mask(col), None)
        else:
            self._ech = _EchelonQ()
            for col in denominator:
                self._ech.insert(_q_clean(col), None)

    def add_candidate(self, col: Col) -> bool:
        if self.field is FieldTag.F2:
            mask = self._ech.reduce(_to_mask(col))
            if mask == 0:
                return False
            self.reps.append(_from_mask(mask))
            self._ech.pivots[mask.bit_length() - 1] = [mask, len(self.reps) - 1]
            return True
        cur = self._ech.reduce(_q_clean(col))
        if not cur:
            return False
        self.reps.append(dict(cur))
        self._ech.pivots[max(cur)] = [cur, len(self.reps) - 1]
        return True

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, col: Col) -> Optional[List]:
        """Coordinates of [col] in the representative basis, or None."""
        coeffs = [Fraction(0)] * len(self.reps) if self.field is FieldTag.RATIONAL \
            else [0] * len(self.reps)
        if self.field is FieldTag.F2:
            def hit(payload):
                if payload is not None:
                    coeffs[payload] ^= 1
            left = self._ech.reduce(_to_mask(col), on_hit=hit)
            if left:
                return None
            return coeffs

        def hitq(payload, coeff):
            if payload is not None:
                coeffs[payload] += coeff
        left = self._ech.reduce(_q_clean(col), on_hit=hitq)
        if left:
            return None
        return coeffs
