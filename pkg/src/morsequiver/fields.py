"""Coefficient fields for all homology computations.

Only two fields are supported: GF(2) and the rationals.  Everything is
exact; no floating point enters any homological computation.
"""

from __future__ import annotations

import enum
from fractions import Fraction


class FieldTag(enum.Enum):
    F2 = "f2"
    RATIONAL = "q"

    @classmethod
    def parse(cls, text: str) -> "FieldTag":
        key = text.strip().lower()
        for tag in cls:
            if tag.value == key:
                return tag
        raise ValueError(f"unknown field {text!r} (expected 'f2' or 'q')")


def normalize(tag: FieldTag, value):
    """Canonical scalar for the field: int 0/1 for F2, Fraction for Q."""
    if tag is FieldTag.F2:
        return int(value) % 2
    return Fraction(value)
