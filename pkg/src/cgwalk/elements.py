"""Closed-form matrix elements in the coupled basis.

Scalar coefficients (ladder factors, Lambda eigenvalues, the A-vector
reduced element alpha_j) plus the action of every operator family on a
single coupled state.  Nothing here touches the product basis, so these
formulas can be checked against the operator builders rotated by the
Clebsch-Gordan unitary.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .basis import CoupledLabel, coupled_index, coupled_labels
from .errors import DomainError
from .halfint import HalfInt, SpinPair, as_float


def _tw(x) -> int:
    return HalfInt.of(x).twice


def j_ladder(j, m, sign: int) -> float:
    """sqrt((j + 1 +/- m)(j -/+ m)), the J+/J- coefficient on |j, m>."""
    jx, mx = _tw(j), _tw(m)
    if jx < 0 or abs(mx) > jx or (jx - mx) % 2:
        raise DomainError(f"|m| <= j violated: j = {HalfInt(jx)}, m = {HalfInt(mx)}")
    if sign > 0:
        return sqrt((jx + 2 + mx) * (jx - mx)) / 2
    if sign < 0:
        return sqrt((jx + 2 - mx) * (jx + mx)) / 2
    raise ValueError("sign must be +1 or -1")


def j0(j, m) -> float:
    """sqrt((j + 1 + m)(j + m)); defined for j + m >= -1."""
    jx, mx = _tw(j), _tw(m)
    if jx + mx < -2:
        raise DomainError(f"j + m = {HalfInt(jx + mx)} below -1")
    return sqrt((jx + 2 + mx) * (jx + mx)) / 2


def zeta(j, m) -> float:
    """sqrt(j^2 - m^2)."""
    jx, mx = _tw(j), _tw(m)
    if abs(mx) > abs(jx):
        raise DomainError(f"|m| > |j|: j = {HalfInt(jx)}, m = {HalfInt(mx)}")
    return sqrt(jx * jx - mx * mx) / 2


def lambda_eig(sp: SpinPair, j) -> float:
    """Eigenvalue of J1.J2 on total angular momentum j."""
    return float(lambda_eig_exact(sp, j))


def lambda_eig_exact(sp: SpinPair, j) -> Fraction:
    jx, ax, bx = _tw(j), sp.j1.twice, sp.j2.twice
    return Fraction(jx * (jx + 2) - ax * (ax + 2) - bx * (bx + 2), 8)


def alpha(sp: SpinPair, j) -> float:
    """Reduced element alpha_j of A = J1 x J2 between j and j - 1.

    Defined on jmin <= j <= jmax + 1 and zero at both ends.  The 0/0 at
    j = 1/2 is resolved by cancelling the common factor.
    """
    jx = _tw(j)
    top, bot = sp.jmax.twice, sp.jmin.twice
    if jx < bot or jx > top + 2 or (jx - top) % 2:
        raise DomainError(f"alpha_j undefined at j = {HalfInt(jx)} for {sp}")
    if jx == bot or jx == top + 2:
        return 0.0
    outer = Fraction((top + 2) ** 2 - jx * jx, 16)
    if bot == 1:
        # (j^2 - 1/4) / (4 j^2 - 1) == 1/4 identically
        val = outer
    else:
        val = outer * Fraction(jx * jx - bot * bot, jx * jx - 1)
    if val < 0:
        raise DomainError(f"negative radicand for alpha at j = {HalfInt(jx)}")
    return sqrt(val)


def s_const(sp: SpinPair) -> float:
    """j1(j1+1) + j2(j2+1) - 1."""
    ax, bx = sp.j1.twice, sp.j2.twice
    return (ax * (ax + 2) + bx * (bx + 2)) / 4 - 1


@dataclass(frozen=True)
class CoupledAction:
    """``op |source> = sum_k coeff_k |label_k>``."""

    source: CoupledLabel
    terms: tuple  # ((CoupledLabel, complex), ...)

    def as_dict(self) -> dict:
        out: dict = {}
        for lab, c in self.terms:
            out[lab] = out.get(lab, 0) + c
        return out


def _push(sp, terms, j, m, c):
    if c == 0:
        return
    if not sp.is_valid_label(j, m):
        if abs(c) > 1e-12:
            raise AssertionError(f"nonzero weight {c} on invalid label ({j}, {m})")
        return
    terms.append((CoupledLabel(j, m), complex(c)))


def _a(sp, j):
    # alpha outside the physical window vanishes (used at the pyramid edges)
    jx = _tw(j)
    if jx < sp.jmin.twice or jx > sp.jmax.twice + 2:
        return 0.0
    return alpha(sp, j)


def _j0s(j, m):
    jx, mx = _tw(j), _tw(m)
    if jx + mx < -2:
        return 0.0
    return j0(j, m)


def _shifted(sp, J, M):
    """The four diagonal neighbours with their amplitudes."""
    one = HalfInt(2)
    return {
        "++": (J + one, M + one, _a(sp, J + one) * _j0s(J + one, M)),
        "+-": (J + one, M - one, _a(sp, J + one) * _j0s(J + one, -M)),
        "-+": (J - one, M + one, _a(sp, J) * _j0s(J - one, -M) if J.twice >= 2 else 0.0),
        "--": (J - one, M - one, _a(sp, J) * _j0s(J - one, M) if J.twice >= 2 else 0.0),
    }


def _general_terms(sp, src, p, q, u, v):
    J, M = src.j, src.m
    jf, mf = as_float(J), as_float(M)
    one = HalfInt(2)
    lam = lambda x: lambda_eig(sp, x) if x.twice >= 0 else 0.0
    lm, l0, lp = lam(J - one), lam(J), lam(J + one)
    nb = _shifted(sp, J, M)
    pc, qc, uc, vc = np.conj(p), np.conj(q), np.conj(u), np.conj(v)
    coef = {
        "-+": p * (jf + mf) + q * (jf + 1 + mf) + u * lm + v * l0,
        "++": -(p * (jf + 1 - mf) + q * (jf - mf) - u * lp - v * l0),
        "+-": -(pc * (jf + mf) + qc * (jf + 1 + mf) + uc * l0 + vc * lp),
        "--": pc * (jf + 1 - mf) + qc * (jf - mf) - uc * l0 - vc * lm,
    }
    out = []
    for key, (jj, mm, amp) in nb.items():
        out.append((jj, mm, 0.5j * coef[key] * amp))
    return out


KINDS = ("Az", "A+", "A-", "Sz", "S+", "S-", "Lambda", "J+", "J-", "Jz", "M", "L", "R", "H")


def coupled_action(kind: str, sp: SpinPair, src: CoupledLabel, **params) -> CoupledAction:
    """Closed-form action of an operator family on ``|src>``.

    ``M`` takes ``m`` (upper plane); ``L`` and ``R`` take ``j`` and ``m``;
    ``H`` takes complex ``p, q, u, v``.
    """
    src = CoupledLabel(src.j, src.m)
    if not sp.is_valid_label(src.j, src.m):
        raise DomainError(f"{src} is not a state of {sp}")
    J, M = src.j, src.m
    one = HalfInt(2)
    jf = as_float(J)
    terms: list = []
    if kind == "Lambda":
        _push(sp, terms, J, M, lambda_eig(sp, J))
    elif kind == "Jz":
        _push(sp, terms, J, M, as_float(M))
    elif kind in ("J+", "J-"):
        s = 1 if kind == "J+" else -1
        if abs((M + HalfInt(2 * s)).twice) <= J.twice:
            _push(sp, terms, J, M + HalfInt(2 * s), j_ladder(J, M, s))
    elif kind in ("Az", "Sz"):
        lo = _a(sp, J) * zeta(J, M)
        hi = _a(sp, J + one) * zeta(J + one, M)
        if kind == "Az":
            _push(sp, terms, J - one, M, 0.5j * lo)
            _push(sp, terms, J + one, M, -0.5j * hi)
        else:
            _push(sp, terms, J - one, M, -0.5 * jf * lo)
            _push(sp, terms, J + one, M, -0.5 * (jf + 1) * hi)
    elif kind in ("A+", "A-", "S+", "S-"):
        nb = _shifted(sp, J, M)
        if kind == "A+":
            _push(sp, terms, *nb["-+"][:2], 0.5j * nb["-+"][2])
            _push(sp, terms, *nb["++"][:2], 0.5j * nb["++"][2])
        elif kind == "A-":
            _push(sp, terms, *nb["--"][:2], -0.5j * nb["--"][2])
            _push(sp, terms, *nb["+-"][:2], -0.5j * nb["+-"][2])
        elif kind == "S+":
            _push(sp, terms, *nb["-+"][:2], -0.5 * jf * nb["-+"][2])
            _push(sp, terms, *nb["++"][:2], 0.5 * (jf + 1) * nb["++"][2])
        else:
            _push(sp, terms, *nb["--"][:2], 0.5 * jf * nb["--"][2])
            _push(sp, terms, *nb["+-"][:2], -0.5 * (jf + 1) * nb["+-"][2])
    elif kind == "M":
        m = HalfInt.of(params["m"])
        if M == m and abs((m - one).twice) <= J.twice:
            _push(sp, terms, J, m - one, j_ladder(J, m, -1))
        elif M == m - one and m.twice <= J.twice:
            _push(sp, terms, J, m, j_ladder(J, m - one, +1))
    elif kind in ("L", "R", "H"):
        if kind == "H":
            p, q, u, v = (complex(params[k]) for k in "pquv")
            planes = None
        else:
            j = HalfInt.of(params["j"])
            m = HalfInt.of(params["m"])
            p, q, u, v = walk_coefficients(kind, sp, j, m)
            planes = {m.twice, m.twice - 2}
        if planes is None or M.twice in planes:
            for jj, mm, c in _general_terms(sp, src, p, q, u, v):
                if planes is not None and mm.twice not in planes:
                    continue
                _push(sp, terms, jj, mm, c)
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return CoupledAction(src, tuple(terms))


def walk_coefficients(kind: str, sp: SpinPair, j, m):
    """(p, q, u, v) of the double-pinch (L) or reverse (R) Hamiltonian."""
    jf, mf = as_float(j), as_float(m)
    sc = s_const(sp)
    if kind == "L":
        p = jf * jf + 2 * jf * mf + sc
        return p, 2 * jf - p, -1.0, -1.0
    if kind == "R":
        p = -jf * jf + 2 * jf * mf - sc
        return p, 2 * jf - p, 1.0, 1.0
    raise ValueError(f"no (p, q, u, v) for kind {kind!r}")


def coupled_matrix(kind: str, sp: SpinPair, **params) -> np.ndarray:
    """Dense matrix of ``kind`` in the coupled ordering of :func:`coupled_labels`."""
    labels = coupled_labels(sp)
    out = np.zeros((sp.dim, sp.dim), dtype=complex)
    for col, lab in enumerate(labels):
        for tgt, c in coupled_action(kind, sp, lab, **params).terms:
            out[coupled_index(sp, tgt.j, tgt.m), col] += c
    return out


def blocked_conditions(kind: str, sp: SpinPair, j, m, u, v):
    """(p, q) that cancel the unwanted neighbours for a given (u, v).

    For ``L`` the pair is |j,m> <-> |j-1,m-1>; for ``R`` it is
    |j,m-1> <-> |j-1,m>.
    """
    jf, mf = as_float(j), as_float(m)
    one = HalfInt(2)
    j = HalfInt.of(j)
    lam = lambda x: lambda_eig(sp, x)
    if kind == "L":
        k = jf + mf
        p = (lam(j) - (k + 1) * (jf - 0.5)) * u + (lam(j + one) - (k + 1) * (jf + 0.5)) * v
        q = (k * (jf - 0.5) - lam(j)) * u + (k * (jf + 0.5) - lam(j + one)) * v
        return p, q
    if kind == "R":
        el = jf - mf
        p = (lam(j - one) - (el - 1) * (jf + 0.5)) * u + (lam(j) - (el + 1) * (jf - 0.5)) * v
        q = (el * (jf + 0.5) - lam(j - one)) * u + ((el + 2) * (jf - 0.5) - lam(j)) * v
        return p, q
    raise ValueError(kind)
