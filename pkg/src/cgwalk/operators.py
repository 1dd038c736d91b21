"""Sparse Hermitian generators assembled in the encoded product basis.

Single-spin ladder matrices are tensored, permuted into the pyramid
ordering and combined by sparse products.  Walk Hamiltonians are linear
combinations of three cached Hermitian blocks followed by a projection
onto two adjacent m-planes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sps

from .basis import plane_indices
from .elements import j_ladder, s_const, walk_coefficients
from .errors import DomainError
from .halfint import HalfInt, SpinPair

DROP_TOL = 1e-13
HERMITIAN_TOL = 1e-12


class SparseHermitian:
    """A Hermitian matrix stored as CSR with entries sorted by (row, col)."""

    def __init__(self, matrix, *, drop_tol: float = DROP_TOL, check: bool = True):
        m = sps.csr_array(matrix, dtype=complex)
        m.sum_duplicates()
        if drop_tol:
            m.data[np.abs(m.data) <= drop_tol] = 0
        m.eliminate_zeros()
        m.sort_indices()
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got {m.shape}")
        self._m = m
        if check:
            dev = self.hermiticity_defect()
            if dev > HERMITIAN_TOL * max(1.0, self.max_abs()):
                raise ValueError(f"matrix is not Hermitian (defect {dev:.3e})")

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def nnz(self) -> int:
        return self._m.nnz

    @property
    def csr(self) -> sps.csr_array:
        return self._m

    def dense(self) -> np.ndarray:
        return self._m.toarray()

    def max_abs(self) -> float:
        return float(np.abs(self._m.data).max()) if self._m.nnz else 0.0

    def hermiticity_defect(self) -> float:
        d = self._m - self._m.conj().T
        return float(np.abs(d.data).max()) if d.nnz else 0.0

    def entries(self):
        coo = self._m.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[i]), int(coo.col[i]), complex(coo.data[i])) for i in order]

    def support(self) -> np.ndarray:
        """Indices that carry a nonzero row (equivalently column)."""
        rows = np.unique(self._m.tocoo().row)
        return rows.astype(int)

    def row_nnz(self) -> np.ndarray:
        return np.diff(self._m.indptr)

    def __matmul__(self, vec):
        return self._m @ vec

    def __add__(self, other):
        return SparseHermitian(self._m + other.csr)

    def __sub__(self, other):
        return SparseHermitian(self._m - other.csr)

    def __mul__(self, c):
        if np.iscomplexobj(c) and np.imag(c) != 0:
            raise ValueError("scaling by a non-real number breaks Hermiticity")
        return SparseHermitian(self._m * float(np.real(c)))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[r, c, v.real, v.imag] for r, c, v in self.entries()],
        }

    @classmethod
    def from_json(cls, obj) -> "SparseHermitian":
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["dim"])
        ents = obj["entries"]
        if not ents:
            return cls(sps.csr_array((n, n), dtype=complex))
        r = [e[0] for e in ents]
        c = [e[1] for e in ents]
        v = [complex(e[2], e[3]) for e in ents]
        return cls(sps.coo_array((v, (r, c)), shape=(n, n)))

    def __repr__(self):
        return f"SparseHermitian(dim={self.dim}, nnz={self.nnz})"


def _ladder_1(j: HalfInt):
    """J+, J-, Jz for one spin, rows ordered by descending m."""
    n = j.twice + 1
    ms = [HalfInt(j.twice - 2 * i) for i in range(n)]
    jp = np.zeros((n, n))
    for i in range(1, n):
        jp[i - 1, i] = j_ladder(j, ms[i], +1)
    jz = np.diag([m.twice / 2 for m in ms])
    return jp, jp.T.copy(), jz


@dataclass(frozen=True)
class Generators:
    """Spin components in the encoded basis (CSR, complex)."""

    j1p: sps.csr_array
    j1m: sps.csr_array
    j1z: sps.csr_array
    j2p: sps.csr_array
    j2m: sps.csr_array
    j2z: sps.csr_array

    @property
    def jp(self):
        return self.j1p + self.j2p

    @property
    def jm(self):
        return self.j1m + self.j2m

    @property
    def jz(self):
        return self.j1z + self.j2z


@lru_cache(maxsize=64)
def generators(sp: SpinPair) -> Generators:
    from .basis import kron_permutation

    a_p, a_m, a_z = _ladder_1(sp.j1)
    b_p, b_m, b_z = _ladder_1(sp.j2)
    i1, i2 = np.eye(sp.d1), np.eye(sp.d2)
    perm = np.asarray(kron_permutation(sp))

    def enc(x):
        x = sps.csr_array(x, dtype=complex)
        return sps.csr_array(x[perm][:, perm])

    return Generators(
        enc(sps.kron(a_p, i2)), enc(sps.kron(a_m, i2)), enc(sps.kron(a_z, i2)),
        enc(sps.kron(i1, b_p)), enc(sps.kron(i1, b_m)), enc(sps.kron(i1, b_z)),
    )


@dataclass(frozen=True)
class VectorOps:
    """Sparse building operators: Lambda, A_z, A_+, A_- and J_+."""

    lam: sps.csr_array
    az: sps.csr_array
    ap: sps.csr_array
    am: sps.csr_array
    jp: sps.csr_array
    jm: sps.csr_array
    jz: sps.csr_array


@lru_cache(maxsize=64)
def vector_ops(sp: SpinPair) -> VectorOps:
    g = generators(sp)
    lam = g.j1z @ g.j2z + 0.5 * (g.j1p @ g.j2m + g.j1m @ g.j2p)
    az = 0.5j * (g.j1p @ g.j2m - g.j1m @ g.j2p)
    ap = 1j * (g.j1z @ g.j2p - g.j1p @ g.j2z)
    am = -1j * (g.j1z @ g.j2m - g.j1m @ g.j2z)
    return VectorOps(*(sps.csr_array(x) for x in (lam, az, ap, am, g.jp, g.jm, g.jz)))


def _herm(x):
    x = sps.csr_array(x)
    return x + x.conj().T


@dataclass(frozen=True)
class Blocks:
    azjp: sps.csr_array  # A_z J_+ + h.c.
    ap: sps.csr_array  # A_+ + h.c.
    lap: sps.csr_array  # {Lambda, A_+} + h.c.
    jx2: sps.csr_array  # J_+ + J_-


@lru_cache(maxsize=64)
def blocks(sp: SpinPair) -> Blocks:
    v = vector_ops(sp)
    return Blocks(
        _herm(v.az @ v.jp),
        _herm(v.ap),
        _herm(v.lam @ v.ap + v.ap @ v.lam),
        sps.csr_array(v.jp + v.jm),
    )


def _center_planes(sp: SpinPair, center) -> list[HalfInt]:
    c = HalfInt.of(center)
    if (sp.jmax.twice - c.twice) % 2 == 0:
        planes = [c]
    else:
        planes = [c + HalfInt(1), c - HalfInt(1)]
    for p in planes:
        if not sp.is_valid_plane(p):
            raise DomainError(f"plane m = {p} lies outside the pyramid of {sp}")
    return planes


def projector_indices(sp: SpinPair, center) -> np.ndarray:
    """Encoded indices kept by P_c; c is a plane or a half-way point between two."""
    idx = []
    for p in _center_planes(sp, center):
        idx.extend(plane_indices(sp, p))
    return np.asarray(sorted(idx), dtype=int)


def _projector_diag(sp, center):
    d = np.zeros(sp.dim)
    d[projector_indices(sp, center)] = 1.0
    return sps.diags_array(d).tocsr()


def build_projector(sp: SpinPair, center) -> SparseHermitian:
    return SparseHermitian(_projector_diag(sp, center))


def _project(sp, mat, upper_m):
    m = HalfInt.of(upper_m)
    pd = _projector_diag(sp, m - HalfInt(1))
    return SparseHermitian(pd @ mat @ pd)


def _check_pair_planes(sp, m):
    m = HalfInt.of(m)
    for p in (m, m - HalfInt(2)):
        if not sp.is_valid_plane(p):
            raise DomainError(f"plane m = {p} lies outside the pyramid of {sp}")
    return m


def build_M(sp: SpinPair, m) -> SparseHermitian:
    """Total-spin walk between planes m and m - 1."""
    m = _check_pair_planes(sp, m)
    return _project(sp, blocks(sp).jx2, m)


def build_block_AzJp(sp: SpinPair, m=None) -> SparseHermitian:
    b = blocks(sp).azjp
    return SparseHermitian(b) if m is None else _project(sp, b, _check_pair_planes(sp, m))


def build_block_Ap(sp: SpinPair, m=None) -> SparseHermitian:
    b = blocks(sp).ap
    return SparseHermitian(b) if m is None else _project(sp, b, _check_pair_planes(sp, m))


def build_block_LambdaAp(sp: SpinPair, m=None) -> SparseHermitian:
    b = blocks(sp).lap
    return SparseHermitian(b) if m is None else _project(sp, b, _check_pair_planes(sp, m))


def build_general_H(sp: SpinPair, p, q, u, v) -> SparseHermitian:
    """p J_+A_z + q A_zJ_+ + u Lambda A_+ + v A_+ Lambda + h.c."""
    o = vector_ops(sp)
    k = p * (o.jp @ o.az) + q * (o.az @ o.jp) + u * (o.lam @ o.ap) + v * (o.ap @ o.lam)
    return SparseHermitian(_herm(k))


def _walk_matrix(sp, kind, j, m):
    j = HalfInt.of(j)
    if not sp.is_valid_j(j):
        raise DomainError(f"j = {j} is not an allowed total spin of {sp}")
    m = _check_pair_planes(sp, m)
    p, _, u, _ = walk_coefficients(kind, sp, j, m)
    b = blocks(sp)
    jf = j.twice / 2
    # A_z J_+ and J_+ A_z differ by -A_+, so only three blocks are needed
    mat = 2 * jf * b.azjp - p * b.ap + u * b.lap
    return _project(sp, mat, m)


def build_L(sp: SpinPair, j, m) -> SparseHermitian:
    """Double-pinch walk coupling |j,m> and |j-1,m-1>."""
    return _walk_matrix(sp, "L", j, m)


def build_R(sp: SpinPair, j, m) -> SparseHermitian:
    """Mirror walk coupling |j,m-1> and |j-1,m>."""
    return _walk_matrix(sp, "R", j, m)


def walk_hamiltonian(kind: str, sp: SpinPair, j, m) -> SparseHermitian:
    if kind == "M":
        return build_M(sp, m)
    if kind == "L":
        return build_L(sp, j, m)
    if kind == "R":
        return build_R(sp, j, m)
    raise ValueError(f"unknown walk kind {kind!r}")


def dense_components(sp: SpinPair) -> dict:
    """Dense x, y, z components of J1 and J2 (keys 'J1', 'J2': lists of arrays)."""
    g = generators(sp)
    out = {}
    for name, (p, mm, z) in {"J1": (g.j1p, g.j1m, g.j1z), "J2": (g.j2p, g.j2m, g.j2z)}.items():
        p, mm, z = p.toarray(), mm.toarray(), z.toarray()
        out[name] = [(p + mm) / 2, (p - mm) / 2j, z]
    return out
