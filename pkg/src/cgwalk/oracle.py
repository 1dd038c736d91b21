"""Reference Clebsch-Gordan coefficients from the three-term recurrence.

Inside an m-plane, 2 Lambda is tridiagonal in the descending-m2 ordering
with diagonal 2 m1 m2 and off-diagonal J1+(m1) J2-(m2).  Its eigenvector
for eigenvalue 2 lambda_j is the CG column.  We solve by substitution from
both ends of the plane, and fix the sign so the largest-m1 entry is positive.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import CoupledLabel, ProductLabel, coupled_labels, encode, enumerate_m_plane, plane_indices
from .elements import j_ladder, lambda_eig
from .errors import DomainError
from .halfint import HalfInt, SpinPair, format_halfint

PIVOT_TOL = 1e-12


def plane_tridiagonal(sp: SpinPair, m) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of 2 Lambda on plane m (descending m2)."""
    labs = enumerate_m_plane(sp, m)
    diag = np.array([2 * (p.m1.twice / 2) * (p.m2.twice / 2) for p in labs])
    off = np.array([j_ladder(sp.j1, p.m1, +1) * j_ladder(sp.j2, p.m2, -1) for p in labs[:-1]])
    return diag, off


def _step_down(diag, off, ev, c, k):
    """c[k-1] from row k of (T - ev) c = 0."""
    rhs = (diag[k] - ev) * c[k]
    if k + 1 < c.size:
        rhs += off[k] * c[k + 1]
    return -rhs / off[k - 1]


def _step_up(diag, off, ev, c, k):
    """c[k+1] from row k."""
    rhs = (diag[k] - ev) * c[k]
    if k > 0:
        rhs += off[k - 1] * c[k - 1]
    return -rhs / off[k]


def _solve_substitution(diag, off, ev):
    """Two-sided substitution.

    Starting from the top-m1 end (last component 1) the recurrence is run
    while the components grow, i.e. through the exponentially small tail
    where one-sided substitution would amplify round-off.  The rest is
    filled from the other end and the halves are matched at the peak.
    """
    n = diag.size
    if n == 1:
        return np.ones(1)
    if np.any(np.abs(off) < PIVOT_TOL):
        return None
    c = np.zeros(n)
    c[-1] = 1.0
    s = n - 1
    while s > 0:
        c[s - 1] = _step_down(diag, off, ev, c, s)
        if abs(c[s - 1]) < abs(c[s]):
            c[s - 1] = 0.0
            break
        s -= 1
    if s > 0:
        f = np.zeros(s + 1)
        f[0] = 1.0
        for k in range(s):
            f[k + 1] = _step_up(diag, off, ev, f, k)
        if f[s] == 0:
            return None
        c[:s] = f[:s] * (c[s] / f[s])
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    scale = np.abs(c).max()
    if np.abs(t @ c - ev * c).max() > 1e-12 * scale * max(1.0, np.abs(diag).max(), np.abs(off).max()):
        return None
    return c


def _solve_eigh(diag, off, ev):
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    w, v = np.linalg.eigh(t)
    return v[:, int(np.argmin(np.abs(w - ev)))].copy()


def cg_column(sp: SpinPair, j, m, *, method: str = "auto") -> np.ndarray:
    """CG column C^{j,m}_{m1,m2} over plane m, ordered by descending m2."""
    j, m = HalfInt.of(j), HalfInt.of(m)
    if not sp.is_valid_label(j, m):
        raise DomainError(f"|{j},{m}> is not a state of {sp}")
    diag, off = plane_tridiagonal(sp, m)
    ev = 2 * lambda_eig(sp, j)
    c = None
    if method in ("auto", "substitution"):
        c = _solve_substitution(diag, off, ev)
    if c is None:
        if method == "substitution":
            raise DomainError("pivot underflow in substitution")
        c = _solve_eigh(diag, off, ev)
    c = c / np.linalg.norm(c)
    if c[-1] < 0:
        c = -c
    return c


@dataclass(frozen=True)
class CGEntry:
    j: HalfInt
    m: HalfInt
    m1: HalfInt
    m2: HalfInt
    value: float


@dataclass
class CGTable:
    sp: SpinPair
    entries: list = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {(e.j, e.m, e.m1, e.m2): e.value for e in self.entries}

    def value(self, j, m, m1, m2) -> float:
        key = tuple(HalfInt.of(x) for x in (j, m, m1, m2))
        return self._index.get(key, 0.0)

    def sorted_entries(self) -> list:
        return sorted(self.entries, key=lambda e: (-e.j.twice, -e.m.twice, -e.m1.twice))

    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.sorted_entries()])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "m", "m1", "m2", "value"])
        for e in self.sorted_entries():
            w.writerow([format_halfint(e.j), format_halfint(e.m), format_halfint(e.m1),
                        format_halfint(e.m2), repr(float(e.value))])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "j1": format_halfint(self.sp.j1),
            "j2": format_halfint(self.sp.j2),
            "entries": [
                {"j": format_halfint(e.j), "m": format_halfint(e.m), "m1": format_halfint(e.m1),
                 "m2": format_halfint(e.m2), "value": float(e.value)}
                for e in self.sorted_entries()
            ],
        }

    def __len__(self):
        return len(self.entries)


def table_from_columns(sp: SpinPair, columns: dict) -> CGTable:
    """Build a table from {(j, m): amplitudes over plane m}."""
    ents = []
    for (j, m), col in columns.items():
        for p, v in zip(enumerate_m_plane(sp, m), col):
            ents.append(CGEntry(HalfInt.of(j), HalfInt.of(m), p.m1, p.m2, float(v)))
    return CGTable(sp, ents)


@lru_cache(maxsize=128)
def _full_table(sp: SpinPair) -> CGTable:
    cols = {}
    for lab in coupled_labels(sp):
        cols[(lab.j, lab.m)] = cg_column(sp, lab.j, lab.m)
    return table_from_columns(sp, cols)


def cg_full_table(sp: SpinPair) -> CGTable:
    return _full_table(sp)


def expected_entry_count(sp: SpinPair) -> int:
    """(2j1+1)(2j2+1)^2 - (4/3) j2 (j2+1)(2j2+1), in exact integers."""
    j2x = sp.j2.twice
    num = 3 * sp.d1 * sp.d2 ** 2 - j2x * (j2x + 2) * sp.d2
    assert num % 3 == 0
    return num // 3


@lru_cache(maxsize=128)
def _unitary(sp: SpinPair) -> np.ndarray:
    u = np.zeros((sp.dim, sp.dim))
    for col, lab in enumerate(coupled_labels(sp)):
        idx = plane_indices(sp, lab.m)
        u[idx.start:idx.stop, col] = cg_column(sp, lab.j, lab.m)
    u.setflags(write=False)
    return u


def cg_unitary(sp: SpinPair) -> np.ndarray:
    """Real orthogonal matrix: rows are encoded product states, columns coupled states."""
    return _unitary(sp)


def coupled_state(sp: SpinPair, j, m) -> np.ndarray:
    """Full-length product-basis vector of |j, m>."""
    j, m = HalfInt.of(j), HalfInt.of(m)
    vec = np.zeros(sp.dim)
    idx = plane_indices(sp, m)
    vec[idx.start:idx.stop] = cg_column(sp, j, m)
    return vec


def cg_value(sp: SpinPair, j, m, m1, m2) -> float:
    """Single coefficient <j1 m1; j2 m2 | j m>."""
    j, m, m1, m2 = (HalfInt.of(x) for x in (j, m, m1, m2))
    if m1 + m2 != m:
        return 0.0
    col = cg_column(sp, j, m)
    start = plane_indices(sp, m).start
    return float(col[encode(sp, ProductLabel(m1, m2)) - start])


__all__ = [
    "CGEntry", "CGTable", "CoupledLabel", "cg_column", "cg_full_table", "cg_unitary",
    "cg_value", "coupled_state", "expected_entry_count", "plane_tridiagonal", "table_from_columns",
]
