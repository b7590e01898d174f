"""Exact arithmetic in L = (ℚ/ℤ)^k."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError


def _reduce(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def parse_fraction(text: str) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InvalidInputError(f"bad rational {text!r}: {exc}") from None


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class QZVector:
    """An element of (ℚ/ℤ)^k, coordinates reduced into [0, 1)."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable = ()):
        object.__setattr__(self, "coords", tuple(_reduce(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("QZVector is immutable")

    @classmethod
    def zero(cls, k: int) -> "QZVector":
        return cls((0,) * k)

    @classmethod
    def unit(cls, k: int, i: int, den: int) -> "QZVector":
        return cls(Fraction(1, den) if t == i else 0 for t in range(k))

    @classmethod
    def parse(cls, items: Sequence[str]) -> "QZVector":
        return cls(parse_fraction(s) for s in items)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "QZVector"):
        if not isinstance(other, QZVector) or other.rank != self.rank:
            raise InvalidInputError("QZVector rank mismatch")

    def __add__(self, other: "QZVector") -> "QZVector":
        self._check(other)
        return QZVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "QZVector") -> "QZVector":
        self._check(other)
        return QZVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "QZVector":
        return QZVector(-a for a in self.coords)

    def __mul__(self, n: int) -> "QZVector":
        return QZVector(int(n) * a for a in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QZVector):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"QZVector({self.to_strings()})"

    def __str__(self):
        inner = ", ".join(self.to_strings())
        return f"({inner})" if self.rank != 1 else inner

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coords)) if self.coords else 1

    def order(self) -> int:
        return self.denominator

    def root(self, n: int) -> "QZVector":
        """Canonical n-th root: a/b ↦ a/(b·n) coordinatewise."""
        if n < 1:
            raise InvalidInputError("root index must be positive")
        return QZVector(Fraction(c.numerator, c.denominator * n) for c in self.coords)

    def scaled(self, N: int) -> tuple:
        """Integer coordinates y with self = y / N; N must clear denominators."""
        out = []
        for c in self.coords:
            v = c * N
            if v.denominator != 1:
                raise InvalidInputError(f"{N} does not clear the denominator of {c}")
            out.append(int(v) % N)
        return tuple(out)

    def to_strings(self) -> list:
        return [format_fraction(c) for c in self.coords]


def common_denominator(values: Iterable[QZVector]) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d


def to_scaled_array(values: Sequence[QZVector], N: int, k: int) -> np.ndarray:
    """Stack QZVectors as integers mod N, shape (len(values), k)."""
    out = np.zeros((len(values), k), dtype=np.int64)
    for r, v in enumerate(values):
        out[r] = v.scaled(N)
    return out


def from_scaled(row: Sequence[int], N: int) -> QZVector:
    return QZVector(Fraction(int(v), N) for v in row)
