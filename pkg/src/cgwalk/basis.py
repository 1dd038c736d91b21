"""Enumeration of the product basis along the state pyramid.

Product states are ranked by line index ``d = jmax - m`` (top plane first)
and, inside a plane, by descending ``m2``.  Encoding and decoding use only
integer arithmetic on twice-values; the square roots of the closed-form
inverse are taken with ``math.isqrt``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .errors import DomainError
from .halfint import HalfInt, SpinPair


@dataclass(frozen=True, order=True)
class ProductLabel:
    m1: HalfInt
    m2: HalfInt

    def __post_init__(self):
        object.__setattr__(self, "m1", HalfInt.of(self.m1))
        object.__setattr__(self, "m2", HalfInt.of(self.m2))

    @property
    def m(self) -> HalfInt:
        return self.m1 + self.m2

    def __str__(self):
        return f"||{self.m1},{self.m2}>>"


@dataclass(frozen=True)
class CoupledLabel:
    j: HalfInt
    m: HalfInt

    def __post_init__(self):
        object.__setattr__(self, "j", HalfInt.of(self.j))
        object.__setattr__(self, "m", HalfInt.of(self.m))

    def __str__(self):
        return f"|{self.j},{self.m}>"


@dataclass(frozen=True)
class PyramidDims:
    d1: int
    d2: int
    dim: int
    d_m: int  # number of m-planes, 2 jmax + 1


def pyramid_dims(sp: SpinPair) -> PyramidDims:
    return PyramidDims(sp.d1, sp.d2, sp.dim, sp.jmax.twice + 1)


def _line_start(sp: SpinPair, d: int) -> int:
    """Number of product states on lines above line ``d``."""
    j2x = sp.j2.twice
    dj1, dj2 = sp.d1, sp.d2
    dm = sp.jmax.twice + 1
    if d <= dj2:
        return d * (d + 1) // 2
    if d >= dj1:
        return sp.dim - (dm + 1 - d) * (dm - d) // 2
    return dj2 * (2 * d - j2x) // 2


def line_start(sp: SpinPair, d: int) -> int:
    if not 0 <= d <= sp.jmax.twice + 1:
        raise DomainError(f"line index {d} outside [0, {sp.jmax.twice + 1}]")
    return _line_start(sp, d)


def _mu_twice(sp: SpinPair, d: int) -> int:
    """Twice the largest m2 on line ``d``."""
    j1x, j2x = sp.j1.twice, sp.j2.twice
    if d <= j1x:
        return j2x
    return 2 * j1x + j2x - 2 * d


def _line_of_index(sp: SpinPair, b: int) -> int:
    dj1, dj2 = sp.d1, sp.d2
    j2x = sp.j2.twice
    dm = sp.jmax.twice + 1
    if 2 * b <= (j2x + 2) * dj2:
        return (isqrt(1 + 8 * b) - 1) // 2
    if 2 * b >= (2 * dj1 - j2x) * dj2:
        x = 1 + 8 * (sp.dim - b)
        r = isqrt(x)
        up = r // 2 if r * r == x else (r + 1) // 2
        return dm - up
    return (j2x * dj2 + 2 * b) // (2 * dj2)


def _check_product(sp: SpinPair, p: ProductLabel):
    m1, m2 = p.m1.twice, p.m2.twice
    if abs(m1) > sp.j1.twice or (sp.j1.twice - m1) % 2:
        raise DomainError(f"m1 = {p.m1} invalid for j1 = {sp.j1}")
    if abs(m2) > sp.j2.twice or (sp.j2.twice - m2) % 2:
        raise DomainError(f"m2 = {p.m2} invalid for j2 = {sp.j2}")


def encode(sp: SpinPair, p: ProductLabel) -> int:
    """Rank of the product state ``p`` in the encoded basis."""
    _check_product(sp, p)
    mx = p.m1.twice + p.m2.twice
    d = (sp.jmax.twice - mx) // 2
    k = (_mu_twice(sp, d) - p.m2.twice) // 2
    return _line_start(sp, d) + k


def decode(sp: SpinPair, index: int) -> ProductLabel:
    """Inverse of :func:`encode`."""
    if not 0 <= index < sp.dim:
        raise DomainError(f"index {index} outside [0, {sp.dim})")
    d = _line_of_index(sp, index)
    k = index - _line_start(sp, d)
    mx = sp.jmax.twice - 2 * d
    m2x = _mu_twice(sp, d) - 2 * k
    return ProductLabel(HalfInt(mx - m2x), HalfInt(m2x))


def plane_line(sp: SpinPair, m) -> int:
    m = HalfInt.of(m)
    if not sp.is_valid_plane(m):
        raise DomainError(f"m = {m} is not a plane of {sp}")
    return (sp.jmax.twice - m.twice) // 2


def plane_indices(sp: SpinPair, m) -> range:
    """Encoded indices of plane ``m``, ordered by descending m2."""
    d = plane_line(sp, m)
    return range(_line_start(sp, d), _line_start(sp, d + 1))


def enumerate_m_plane(sp: SpinPair, m) -> list[ProductLabel]:
    return [decode(sp, i) for i in plane_indices(sp, m)]


@lru_cache(maxsize=256)
def product_labels(sp: SpinPair) -> tuple[ProductLabel, ...]:
    return tuple(decode(sp, i) for i in range(sp.dim))


@lru_cache(maxsize=256)
def coupled_labels(sp: SpinPair) -> tuple[CoupledLabel, ...]:
    """Coupled labels grouped like the product basis: m descending, then j descending."""
    out = []
    for m in sp.m_values():
        for j in sp.j_values():
            if abs(m.twice) <= j.twice:
                out.append(CoupledLabel(j, m))
    return tuple(out)


@lru_cache(maxsize=256)
def coupled_index_map(sp: SpinPair) -> dict:
    return {lab: i for i, lab in enumerate(coupled_labels(sp))}


def coupled_index(sp: SpinPair, j, m) -> int:
    lab = CoupledLabel(j, m)
    try:
        return coupled_index_map(sp)[lab]
    except KeyError:
        raise DomainError(f"{lab} is not a coupled state of {sp}") from None


def kron_permutation(sp: SpinPair):
    """``perm[l]`` is the Kronecker index (m1-major, m descending) of encoded state ``l``."""
    out = []
    for lab in product_labels(sp):
        i1 = (sp.j1.twice - lab.m1.twice) // 2
        i2 = (sp.j2.twice - lab.m2.twice) // 2
        out.append(i1 * sp.d2 + i2)
    return out
