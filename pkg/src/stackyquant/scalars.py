"""Exact polynomials in the deformation parameter hbar over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Scalar:
    """Element of Q[hbar]; ``coeffs[i]`` is the coefficient of hbar**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls((c,))

    @classmethod
    def hbar(cls, power: int = 1, c: Number = 1) -> "Scalar":
        return cls([0] * power + [c])

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls((x,))

    @property
    def degree(self) -> int:
        """hbar-degree; -1 for zero."""
        return len(self.coeffs) - 1

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*hbar")
            else:
                parts.append(f"{c}*hbar^{i}")
        return " + ".join(parts)

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Scalar([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar([-c for c in self.coeffs])

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Scalar()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Scalar(out)

    __rmul__ = __mul__

    def divmod(self, other: "Scalar") -> tuple["Scalar", "Scalar"]:
        """Euclidean division in Q[hbar]."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        dl = len(other.coeffs) - 1
        while len(rem) - 1 >= dl and rem:
            shift = len(rem) - 1 - dl
            factor = rem[-1] / lead
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem = list(_trim(rem))
        return Scalar(q), Scalar(rem)

    def monic(self) -> "Scalar":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Scalar([c / lead for c in self.coeffs])

    def evaluate(self, value: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def at_zero(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def to_json(self) -> list:
        return [[i, c.numerator, c.denominator] for i, c in enumerate(self.coeffs) if c]

    @classmethod
    def from_json(cls, data: list) -> "Scalar":
        out: dict[int, Fraction] = {}
        for p, num, den in data:
            out[p] = out.get(p, Fraction(0)) + Fraction(num, den)
        if not out:
            return cls()
        return cls([out.get(i, 0) for i in range(max(out) + 1)])


ZERO = Scalar()
ONE = Scalar.const(1)
HBAR = Scalar.hbar()
