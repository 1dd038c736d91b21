"""Time evolution under a Hermitian generator, exp(-i H t), via eigh.

Walk Hamiltonians vanish outside two m-planes, so the exponential is taken
on the support of ``H`` only and is the identity elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import HERMITIAN_TOL, SparseHermitian


@dataclass
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray
    support: np.ndarray
    dim: int

    def unitary(self, t: float) -> np.ndarray:
        u = np.eye(self.dim, dtype=complex)
        if self.support.size:
            s = self.support
            phase = np.exp(-1j * self.values * t)
            u[np.ix_(s, s)] = (self.vectors * phase) @ self.vectors.conj().T
        return u

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        out = np.array(psi, dtype=complex, copy=True)
        if self.support.size:
            s = self.support
            v = self.vectors
            out[s] = v @ (np.exp(-1j * self.values * t) * (v.conj().T @ out[s]))
        return out


def _as_dense(h):
    if isinstance(h, SparseHermitian):
        return h.dense()
    return np.asarray(h, dtype=complex)


def eigh(h, *, restrict: bool = True) -> EigenSystem:
    """Eigen-decomposition of ``h`` on its support (or the full space)."""
    if isinstance(h, SparseHermitian):
        n = h.dim
        s = h.support() if restrict else np.arange(n)
        sub = h.csr[s][:, s].toarray() if s.size else np.zeros((0, 0), complex)
    else:
        a = np.asarray(h, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        dev = np.abs(a - a.conj().T).max() if a.size else 0.0
        if dev > HERMITIAN_TOL * max(1.0, np.abs(a).max()):
            raise ValueError(f"matrix is not Hermitian (defect {dev:.3e})")
        n = a.shape[0]
        if restrict:
            s = np.flatnonzero((np.abs(a) > 0).any(axis=1) | (np.abs(a) > 0).any(axis=0))
        else:
            s = np.arange(n)
        sub = a[np.ix_(s, s)]
    if s.size:
        w, v = np.linalg.eigh(0.5 * (sub + sub.conj().T))
    else:
        w, v = np.zeros(0), np.zeros((0, 0), complex)
    return EigenSystem(w, v, np.asarray(s, dtype=int), n)


def unitary_of(h, t: float) -> np.ndarray:
    return eigh(h).unitary(t)


def evolve(h, t: float, psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    es = eigh(h)
    if psi.shape != (es.dim,):
        raise ValueError(f"state of shape {psi.shape} does not match dim {es.dim}")
    return es.apply(t, psi)


def tau(h, t: float) -> float:
    """Dimensionless pulse length t * max |H_ij|."""
    if isinstance(h, SparseHermitian):
        return t * h.max_abs()
    return t * float(np.abs(_as_dense(h)).max())
