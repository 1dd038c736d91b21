"""Exact half-integer arithmetic and spin-pair bookkeeping.

Every quantum number is stored as twice its value so that all index
arithmetic stays in the integers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

from .errors import DomainError, ParseError

_INT_RE = re.compile(r"^\s*([+-]?\d+)\s*$")
_HALF_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*$")


@total_ordering
class HalfInt:
    """A number in (1/2)Z, represented by the integer ``twice``."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if isinstance(twice, bool) or not isinstance(twice, int):
            raise TypeError(f"HalfInt expects an int twice-value, got {twice!r}")
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, Fraction, float, string or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return parse_halfint(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Rational):
            tw = Fraction(value) * 2
            if tw.denominator != 1:
                raise DomainError(f"{value} is not a multiple of 1/2")
            return cls(int(tw))
        if isinstance(value, float):
            tw = value * 2
            if not tw.is_integer():
                raise DomainError(f"{value} is not a multiple of 1/2")
            return cls(int(tw))
        raise TypeError(f"cannot convert {value!r} to HalfInt")

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self) -> float:
        return self.twice / 2

    def __int__(self) -> int:
        if not self.is_integer:
            raise DomainError(f"{self} is not an integer")
        return self.twice // 2

    def __hash__(self):
        return hash(self.value)

    def __eq__(self, other):
        try:
            other = HalfInt.of(other)
        except (TypeError, DomainError, ParseError):
            return NotImplemented
        return self.twice == other.twice

    def __lt__(self, other):
        try:
            other = HalfInt.of(other)
        except (TypeError, DomainError, ParseError):
            return NotImplemented
        return self.twice < other.twice

    def __add__(self, other):
        try:
            return HalfInt(self.twice + HalfInt.of(other).twice)
        except (TypeError, DomainError):
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return HalfInt(self.twice - HalfInt.of(other).twice)
        except (TypeError, DomainError):
            return NotImplemented

    def __rsub__(self, other):
        try:
            return HalfInt(HalfInt.of(other).twice - self.twice)
        except (TypeError, DomainError):
            return NotImplemented

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def parse_halfint(text: str) -> HalfInt:
    """Parse ``"n"`` or ``"p/2"`` with odd ``p``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {text!r}")
    m = _INT_RE.match(text)
    if m:
        return HalfInt(2 * int(m.group(1)))
    m = _HALF_RE.match(text)
    if m:
        p = int(m.group(1))
        if p % 2 == 0:
            raise ParseError(f"token {text!r}: numerator over 2 must be odd")
        return HalfInt(p)
    raise ParseError(f"token {text!r} is not of the form n or p/2")


def format_halfint(x) -> str:
    return str(HalfInt.of(x))


def as_float(x) -> float:
    if isinstance(x, HalfInt):
        return x.twice / 2
    return float(x)


@dataclass(frozen=True)
class SpinPair:
    """Two spins with j1 >= j2 >= 0."""

    j1: HalfInt
    j2: HalfInt

    def __post_init__(self):
        j1 = HalfInt.of(self.j1)
        j2 = HalfInt.of(self.j2)
        object.__setattr__(self, "j1", j1)
        object.__setattr__(self, "j2", j2)
        if j2.twice < 0:
            raise DomainError(f"j2 = {j2} must be non-negative")
        if j1.twice < j2.twice:
            raise DomainError(f"j1 = {j1} must be >= j2 = {j2}")

    @classmethod
    def of(cls, j1, j2) -> "SpinPair":
        return cls(HalfInt.of(j1), HalfInt.of(j2))

    @property
    def d1(self) -> int:
        return self.j1.twice + 1

    @property
    def d2(self) -> int:
        return self.j2.twice + 1

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    @property
    def jmax(self) -> HalfInt:
        return self.j1 + self.j2

    @property
    def jmin(self) -> HalfInt:
        return self.j1 - self.j2

    def j_values(self) -> list[HalfInt]:
        """Allowed total j, descending."""
        return [HalfInt(t) for t in range(self.jmax.twice, self.jmin.twice - 1, -2)]

    def m_values(self) -> list[HalfInt]:
        """Allowed total m, descending."""
        return [HalfInt(t) for t in range(self.jmax.twice, -self.jmax.twice - 1, -2)]

    def is_valid_j(self, j) -> bool:
        j = HalfInt.of(j)
        return (self.jmin.twice <= j.twice <= self.jmax.twice
                and (j.twice - self.jmax.twice) % 2 == 0)

    def is_valid_label(self, j, m) -> bool:
        j, m = HalfInt.of(j), HalfInt.of(m)
        return self.is_valid_j(j) and abs(m.twice) <= j.twice and (j.twice - m.twice) % 2 == 0

    def is_valid_plane(self, m) -> bool:
        m = HalfInt.of(m)
        return abs(m.twice) <= self.jmax.twice and (self.jmax.twice - m.twice) % 2 == 0

    def plane_size(self, m) -> int:
        """Number of product states with m1 + m2 = m."""
        m = HalfInt.of(m)
        if not self.is_valid_plane(m):
            raise DomainError(f"m = {m} is not a plane of {self}")
        if abs(m.twice) <= self.jmin.twice:
            return self.d2
        return (self.jmax.twice - abs(m.twice)) // 2 + 1

    def __str__(self):
        return f"({self.j1}, {self.j2})"


def spin_pairs_upto(j1_max, *, j1_min=0) -> list[SpinPair]:
    """All pairs with j2 <= j1 on the half-integer grid, j1_min <= j1 <= j1_max."""
    hi = HalfInt.of(j1_max).twice
    lo = HalfInt.of(j1_min).twice
    out = []
    for t1 in range(lo, hi + 1):
        for t2 in range(0, t1 + 1):
            out.append(SpinPair(HalfInt(t1), HalfInt(t2)))
    return out
