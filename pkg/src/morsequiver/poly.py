"""Poincare polynomials: integer coefficient vectors indexed by degree."""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple


class PoincarePolynomial:
    """Polynomial in t with nonnegative integer coefficients.

    Trailing zeros are trimmed so equality is degree-insensitive.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if any(c < 0 for c in cs):
            raise ValueError(f"negative coefficient in {cs}")
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "PoincarePolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def zero(cls) -> "PoincarePolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "PoincarePolynomial":
        return cls((1,))

    def coefficient(self, degree: int) -> int:
        return self.coeffs[degree] if 0 <= degree < len(self.coeffs) else 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __add__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return PoincarePolynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, PoincarePolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def evaluate(self, t: int) -> int:
        return sum(c * t ** i for i, c in enumerate(self.coeffs))

    def euler(self) -> int:
        """Alternating coefficient sum P(-1)."""
        return self.evaluate(-1)

    def reversed_at(self, degree: int) -> "PoincarePolynomial":
        """t^degree * P(1/t); requires deg(P) <= degree."""
        if self.degree > degree:
            raise ValueError(f"degree {self.degree} exceeds ambient {degree}")
        out = [0] * (degree + 1)
        for i, c in enumerate(self.coeffs):
            out[degree - i] = c
        return PoincarePolynomial(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("t" if c == 1 else f"{c}t")
            else:
                parts.append(f"t^{i}" if c == 1 else f"{c}t^{i}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PoincarePolynomial({list(self.coeffs)})"


def poly_sum(polys: Iterable[PoincarePolynomial]) -> PoincarePolynomial:
    total = PoincarePolynomial.zero()
    for p in polys:
        total = total + p
    return total


def divide_by_one_plus_t(diff: Sequence[int]) -> Tuple[List[int], bool]:
    """Divide a raw coefficient vector by (1 + t).

    Returns (quotient coefficients, exact flag).  Used for the Morse
    remainders R(t) = (sum of summands - P(M)) / (1 + t).
    """
    coeffs = list(diff)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    quotient: List[int] = []
    carry = 0
    for c in coeffs:
        q = c - carry
        quotient.append(q)
        carry = q
    # quotient currently one order too long: last entry must be zero
    exact = carry == 0
    while quotient and quotient[-1] == 0:
        quotient.pop()
    return quotient, exact
