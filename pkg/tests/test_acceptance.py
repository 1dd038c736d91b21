"""End-to-end acceptance checks, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
even when output is captured) or directly with ``python3 tests/test_acceptance.py``.
"""
import sys
import time
from functools import reduce

import numpy as np
import pytest

import reference_values as ref
from cgwalk.basis import CoupledLabel, decode, encode, product_labels
from cgwalk.engine import decomposition, diagonal_slope, initial_state
from cgwalk.evolve import unitary_of
from cgwalk.halfint import SpinPair, spin_pairs_upto
from cgwalk.operators import build_L, build_M
from cgwalk.oracle import coupled_state
from cgwalk.planner import path_plan, plan
from cgwalk.tomography import (
    all_axes, density_tomography, fidelity, fix_global_phase, pad_state, pure_tomography,
    random_pure, reconstruct_density, simulate_shots,
)
from cgwalk.engine import walk_states
from cgwalk.verify import (
    algebra_suite, epsilon_table, noise_growth, polynomial_growth, selection_rule_audit,
    transfer_audit,
)

# tolerances pinned per criterion
DISPLAY_TOL, DISPLAY_SECONDS = 1e-12, 1.0
TABLE_TOL, TABLE_J1, TABLE_SECONDS = 1e-10, 6, 300.0
OCC_TOL, LEAK_TOL, BLOCKED_TOL, TRANSFER_J1 = 1e-10, 1e-10, 1e-12, 4
ALGEBRA_TOL, SELECTION_TOL, ALGEBRA_J1 = 1e-10, 1e-12, 3
L_BAND, M_BAND, SLOPE_SECONDS = (2.5, 3.5), (0.7, 1.3), 120.0
DECOMP_TOL, DECOMP_TARGETS, DECOMP_J1 = 1e-10, 20, 4
ENCODE_J1 = 10
RHO_TOL, RHO_N = 1e-10, 3
SHOTS, SHOT_SEEDS, MEDIAN_FIDELITY = 2 ** 14, 20, 0.99
PURE_TOL, PURE_J1 = 1e-6, 4
NOISE_DELTA, NOISE_MARGIN, NOISE_STEPS = 1e-3, 1e-2, 40

HH = SpinPair.of("1/2", "1/2")
OH = SpinPair.of(1, "1/2")


def report(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} | {detail}"
    capman = _CAPTURE.get("manager")
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
    assert ok, line


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _capture_manager(request):
    _CAPTURE["manager"] = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _CAPTURE.pop("manager", None)


def test_criterion_1_displayed_matrices():
    t0 = time.perf_counter()
    checks = {
        "M_1/2": (build_M(HH, 1).dense(), ref.M_HALF),
        "L_1/2": (build_L(HH, 1, 1).dense(), ref.L_HALF),
        "M_1": (build_M(OH, "3/2").dense(), ref.M_ONE),
        "M_0": (build_M(OH, "1/2").dense(), ref.M_ZERO),
        "L_1^1": (build_L(OH, "3/2", "3/2").dense(), ref.L_ONE_ONE),
        "L_0^1": (build_L(OH, "3/2", "1/2").dense(), ref.L_ZERO_ONE),
        "U_M_1/2": (unitary_of(build_M(HH, 1), ref.T_M_HALF), ref.U_M_HALF),
        "U_M_1": (unitary_of(build_M(OH, "3/2"), ref.T_M_ONE), ref.U_M_ONE),
        "U_M_0": (unitary_of(build_M(OH, "1/2"), ref.T_M_ZERO_12), ref.U_M_ZERO_12),
    }
    worst = max(float(np.abs(a - b).max()) for a, b in checks.values())
    dt = time.perf_counter() - t0
    report(1, "displayed Hamiltonians and unitaries", worst < DISPLAY_TOL and dt < DISPLAY_SECONDS,
           f"{len(checks)} matrices, max dev {worst:.2e} < {DISPLAY_TOL:g}, {dt:.3f}s < {DISPLAY_SECONDS:g}s")


def test_criterion_2_oracle_equivalence():
    t0 = time.perf_counter()
    pairs = spin_pairs_upto(TABLE_J1)
    worst, at = 0.0, None
    for sp in pairs:
        e = epsilon_table(sp).raw
        if e >= worst:
            worst, at = e, sp
    dt = time.perf_counter() - t0
    report(2, "walk vs recurrence CG tables", worst < TABLE_TOL and dt < TABLE_SECONDS,
           f"{len(pairs)} pairs j1<={TABLE_J1}, max eps {worst:.2e} at {at} < {TABLE_TOL:g}, "
           f"{dt:.1f}s < {TABLE_SECONDS:g}s")


def test_criterion_3_double_pinch():
    occ, leak, blocked, n = 1.0, 0.0, 0.0, 0
    for sp in spin_pairs_upto(TRANSFER_J1):
        for r in transfer_audit(sp):
            occ, leak, blocked = min(occ, r.occupancy), max(leak, r.leakage), max(blocked, r.blocked)
            n += 1
    ok = occ >= 1 - OCC_TOL and leak < LEAK_TOL and blocked < BLOCKED_TOL
    report(3, "canonical steps transfer cleanly", ok,
           f"{n} steps j1<={TRANSFER_J1}, min occupancy 1-{1 - occ:.1e}, max leakage {leak:.1e}, "
           f"max blocked element {blocked:.1e} (< {BLOCKED_TOL:g})")


def test_criterion_4_algebra():
    worst, sel = 0.0, 0.0
    for sp in spin_pairs_upto(ALGEBRA_J1):
        worst = max(worst, max(i.relative for i in algebra_suite(sp)))
        sel = max(sel, selection_rule_audit(sp))
    report(4, "operator identities and selection rules", worst < ALGEBRA_TOL and sel < SELECTION_TOL,
           f"j1<={ALGEBRA_J1}, worst residual/(1+|LHS|) {worst:.1e} < {ALGEBRA_TOL:g}, "
           f"selection {sel:.1e} < {SELECTION_TOL:g}")


def test_criterion_5_scaling_slopes():
    t0 = time.perf_counter()
    sl, _, _ = diagonal_slope("L")
    sm, _, _ = diagonal_slope("M")
    dt = time.perf_counter() - t0
    ok = L_BAND[0] <= sl <= L_BAND[1] and M_BAND[0] <= sm <= M_BAND[1] and dt < SLOPE_SECONDS
    report(5, "max pulse length slopes along j1=j2", ok,
           f"L slope {sl:.3f} in {list(L_BAND)}, M slope {sm:.3f} in {list(M_BAND)}, {dt:.1f}s")


def test_criterion_6_decomposition():
    rng = np.random.default_rng(2024)
    pairs = spin_pairs_upto(DECOMP_J1)
    worst = 0.0
    for _ in range(DECOMP_TARGETS):
        sp = pairs[rng.integers(len(pairs))]
        j = sp.j_values()[rng.integers(len(sp.j_values()))]
        ms = [m for m in sp.m_values() if abs(m.twice) <= j.twice]
        m = ms[rng.integers(len(ms))]
        p = plan(sp, CoupledLabel(j, m))
        psi = reduce(lambda v, u: u @ v, decomposition(p), initial_state(sp, p.start))
        worst = max(worst, float(np.abs(psi - coupled_state(sp, j, m)).max()))
    report(6, "product of exported step unitaries", worst < DECOMP_TOL,
           f"{DECOMP_TARGETS} seeded targets j1<={DECOMP_J1}, max dev {worst:.1e} < {DECOMP_TOL:g}")


def test_criterion_7_encoding():
    states = mismatches = 0
    for sp in spin_pairs_upto(ENCODE_J1):
        for i, lab in enumerate(product_labels(sp)):
            states += 1
            if encode(sp, lab) != i or decode(sp, i) != lab:
                mismatches += 1
    report(7, "encoding bijection", mismatches == 0,
           f"{states} states j1<={ENCODE_J1}, {mismatches} mismatches")


def test_criterion_8_tomography():
    rng = np.random.default_rng(8)
    rho_dev = 0.0
    for n in range(1, RHO_N + 1):
        for _ in range(5):
            x = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
            rho = x @ x.conj().T
            rho /= np.trace(rho).real
            recs = {ax: simulate_shots(rho, ax, 0, exact=True) for ax in all_axes(n)}
            rho_dev = max(rho_dev, float(np.abs(reconstruct_density(recs, n) - rho).max()))
    fids = []
    for seed in range(SHOT_SEEDS):
        psi = random_pure(2, np.random.default_rng(seed))
        est, _ = density_tomography(psi, SHOTS, seed)
        fids.append(fidelity(est, psi))
    med = float(np.median(fids))
    over, pure_dev, walked = 0, 0.0, 0
    for sp in spin_pairs_upto(PURE_J1):
        for psi in walk_states(sp).values():
            psi = pad_state(psi)
            n = int(np.log2(psi.size))
            est, recs = pure_tomography(psi, 0, exact=True)
            over += len(recs) > 2 * n + 1
            pure_dev = max(pure_dev, float(np.abs(est - fix_global_phase(psi)).max()))
            walked += 1
    ok = rho_dev < RHO_TOL and med >= MEDIAN_FIDELITY and over == 0 and pure_dev < PURE_TOL
    report(8, "tomography", ok,
           f"rho dev {rho_dev:.1e} < {RHO_TOL:g} (n<={RHO_N}); median fidelity {med:.4f} >= "
           f"{MEDIAN_FIDELITY} over {SHOT_SEEDS} seeds at {SHOTS} shots; {walked} walk states, "
           f"{over} over 2n+1 settings, max dev {pure_dev:.1e} < {PURE_TOL:g}")


def test_criterion_9_noise_growth():
    worst_ratio, longest = 0.0, 0
    for sp, path in ((SpinPair.of(10, 10), "edge"), (SpinPair.of(6, 4), "side"),
                     (SpinPair.of(6, 4), "edge"), (SpinPair.of(3, 2), "edge")):
        p = path_plan(sp, path)
        assert len(p) <= NOISE_STEPS
        run = noise_growth(sp, p, NOISE_DELTA, seed=9)
        worst_ratio = max(worst_ratio, float(run.ratio.max()))
        if len(p) > longest:
            longest, longest_run = len(p), run
    r_poly, r_exp = polynomial_growth(longest_run.observed)
    ok = worst_ratio <= 1 + NOISE_MARGIN and r_poly < r_exp
    report(9, "noise growth bound", ok,
           f"delta {NOISE_DELTA:g}, max observed/bound {worst_ratio:.3f} <= {1 + NOISE_MARGIN:g}; "
           f"{longest}-step fit residual poly {r_poly:.2e} < exp {r_exp:.2e}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
