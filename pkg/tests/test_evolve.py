from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cgwalk.evolve import eigh, evolve, tau, unitary_of
from cgwalk.halfint import HalfInt, SpinPair, spin_pairs_upto
from cgwalk.operators import SparseHermitian, build_L, build_M, build_R
from cgwalk.planner import pulse_time

import reference_values as ref

HH = SpinPair.of("1/2", "1/2")
OH = SpinPair.of(1, "1/2")


def e(n, i):
    v = np.zeros(n, dtype=complex)
    v[i] = 1
    return v


def test_pauli_x_spectrum():
    es = eigh(np.array([[0, 1], [1, 0]]))
    assert np.allclose(es.values, [-1, 1])


def test_diagonal_spectrum():
    es = eigh(np.diag([3.0, -2.0]), restrict=False)
    assert np.allclose(sorted(es.values), [-2, 3])
    assert np.allclose(np.abs(es.vectors), [[0, 1], [1, 0]]) or np.allclose(np.abs(es.vectors), np.eye(2))


def test_M_half_spectrum_against_characteristic_polynomial():
    es = eigh(build_M(HH, 1), restrict=False)
    assert np.allclose(es.values, [-sqrt(2), 0, 0, sqrt(2)], atol=1e-14)
    # det(x I - M) = x^2 (x^2 - 2)
    for x in es.values:
        assert abs(np.linalg.det(x * np.eye(4) - ref.M_HALF)) < 1e-12


def test_reconstruction_and_orthonormality():
    for sp in spin_pairs_upto(2):
        for m in sp.m_values()[:-1]:
            h = build_M(sp, m)
            es = eigh(h, restrict=False)
            v = es.vectors
            assert np.abs(v.conj().T @ v - np.eye(sp.dim)).max() < 1e-11
            recon = (v * es.values) @ v.conj().T
            assert np.abs(recon - h.dense()).max() < 1e-10 * max(1, h.max_abs())


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigh(np.array([[0, 1], [2, 0]]))


def test_evolution_examples():
    out = evolve(build_M(HH, 1), pi / (2 * sqrt(2)), e(4, 0))
    assert np.allclose(out, -1j / sqrt(2) * (e(4, 1) + e(4, 2)), atol=1e-14)
    out = evolve(build_L(HH, 1, 1), pi / (3 * sqrt(2)), e(4, 0))
    assert np.allclose(out, (e(4, 2) - e(4, 1)) / sqrt(2), atol=1e-14)
    psi = np.array([0.6, 0.8j, 0, 0])
    assert np.abs(evolve(build_M(HH, 1), 0.0, psi) - psi).max() < 1e-15
    with pytest.raises(ValueError):
        evolve(build_M(HH, 1), 1.0, np.ones(3))


class TestDisplayedUnitaries:
    def test_U_M_half(self):
        assert np.abs(unitary_of(build_M(HH, 1), ref.T_M_HALF) - ref.U_M_HALF).max() < 1e-12

    def test_U_L_half(self):
        assert np.abs(unitary_of(build_L(HH, 1, 1), ref.T_L_HALF) - ref.U_L_HALF).max() < 1e-12

    def test_U_M_one(self):
        u = unitary_of(build_M(OH, "3/2"), ref.T_M_ONE)
        assert np.abs(u - ref.U_M_ONE).max() < 1e-12

    def test_U_M_zero_half(self):
        u = unitary_of(build_M(OH, "1/2"), ref.T_M_ZERO_12)
        assert np.abs(u - ref.U_M_ZERO_12).max() < 1e-12

    def test_U_M_zero_three_halves(self):
        u = unitary_of(build_M(OH, "1/2"), ref.T_M_ZERO_32)
        assert np.abs(u - ref.U_M_ZERO_32).max() < 1e-12


def test_zero_time_identity():
    assert np.abs(unitary_of(build_L(OH, "3/2", "1/2"), 0.0) - np.eye(6)).max() < 1e-15


def test_unitarity_at_pulse_times():
    from cgwalk.errors import BlockedTransitionError, DomainError
    one = HalfInt(2)
    worst = 0.0
    for sp in spin_pairs_upto(4):
        for j in sp.j_values():
            for m in sp.m_values():
                for kind, build in (("M", lambda: build_M(sp, m)), ("L", lambda: build_L(sp, j, m)),
                                    ("R", lambda: build_R(sp, j, m))):
                    try:
                        t = pulse_time(kind, sp, j, m)
                    except (BlockedTransitionError, DomainError):
                        continue
                    u = unitary_of(build(), t)
                    worst = max(worst, np.abs(u.conj().T @ u - np.eye(sp.dim)).max())
    assert worst < 1e-11


hermitian = st.integers(2, 7).flatmap(
    lambda n: st.lists(st.floats(-2, 2), min_size=2 * n * n, max_size=2 * n * n).map(
        lambda xs: (lambda a: 0.5 * (a + a.conj().T))(
            (np.array(xs[: n * n]) + 1j * np.array(xs[n * n:])).reshape(n, n))))


@settings(max_examples=60, deadline=None)
@given(hermitian, st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2 ** 31))
def test_group_law_and_energy(h, t1, t2, seed):
    rng = np.random.default_rng(seed)
    n = h.shape[0]
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi /= np.linalg.norm(psi)
    a = evolve(h, t1, evolve(h, t2, psi))
    b = evolve(h, t1 + t2, psi)
    assert np.abs(a - b).max() < 1e-10
    assert abs(np.linalg.norm(b) - 1) < 1e-11
    e0 = np.vdot(psi, h @ psi).real
    assert abs(np.vdot(b, h @ b).real - e0) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.floats(-3, 3), st.integers(0, 2 ** 31))
def test_degenerate_spectra(n, k, t, seed):
    # projector-like generator with a k-fold degenerate top eigenvalue
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    w = np.zeros(n)
    w[: min(k, n)] = 1.5
    h = (q * w) @ q.conj().T
    h = 0.5 * (h + h.conj().T)
    u = unitary_of(h, t)
    expected = (q * np.exp(-1j * w * t)) @ q.conj().T
    assert np.abs(u - expected).max() < 1e-10
    assert np.abs(u.conj().T @ u - np.eye(n)).max() < 1e-11


def test_restricted_matches_full():
    h = build_L(OH, "3/2", "1/2")
    a = eigh(h).unitary(0.7)
    b = eigh(h, restrict=False).unitary(0.7)
    assert np.abs(a - b).max() < 1e-12


def test_tau_single_step():
    h = build_M(HH, 1)
    assert abs(tau(h, pulse_time("M", HH, 1, 1)) - pi / (2 * sqrt(2))) < 1e-15
    assert tau(SparseHermitian(np.diag([0.0, -3.0])), 2.0) == 6.0
