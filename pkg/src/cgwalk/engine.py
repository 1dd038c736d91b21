"""Execution of walk plans on state vectors in the encoded product basis."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import CoupledLabel, plane_indices
from .evolve import eigh, tau
from .halfint import SpinPair
from .operators import SparseHermitian, walk_hamiltonian
from .oracle import CGTable, table_from_columns
from .planner import WalkPlan, WalkStep, origin_label, plan, pulse_time


@dataclass(frozen=True)
class StepDiagnostics:
    tau: float
    leakage: float  # probability outside the arrival m-plane before clamping
    norm_dev: float


@dataclass
class Trajectory:
    plan: WalkPlan
    states: list = field(default_factory=list)  # states[0] is the initial vector
    diagnostics: list = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def step_hamiltonian(sp: SpinPair, step: WalkStep) -> SparseHermitian:
    j, m = step.labels
    return walk_hamiltonian(step.kind, sp, j, m)


def initial_state(sp: SpinPair, label: CoupledLabel) -> np.ndarray:
    """Basis vector of an extremal state; only the two product corners qualify."""
    psi = np.zeros(sp.dim, dtype=complex)
    if label == origin_label(sp, "top"):
        psi[0] = 1
    elif label == origin_label(sp, "bottom"):
        psi[-1] = 1
    else:
        raise ValueError(f"{label} is not a product state; pass an explicit initial vector")
    return psi


def apply_step(sp: SpinPair, step: WalkStep, psi: np.ndarray, *, clamp: bool = False):
    h = step_hamiltonian(sp, step)
    out = step.phase_fix * eigh(h).apply(step.t, psi)
    idx = plane_indices(sp, step.dst.m)
    inside = np.zeros(sp.dim, dtype=bool)
    inside[idx.start:idx.stop] = True
    leak = float(np.sum(np.abs(out[~inside]) ** 2))
    if clamp:
        out[~inside] = 0
    diag = StepDiagnostics(tau(h, step.t), leak, abs(float(np.linalg.norm(out)) - 1.0))
    return out, diag


def execute(p: WalkPlan, *, clamp: bool = False, initial=None) -> Trajectory:
    sp = p.sp
    psi = initial_state(sp, p.start) if initial is None else np.array(initial, dtype=complex)
    if psi.shape != (sp.dim,):
        raise ValueError(f"initial state has shape {psi.shape}, expected ({sp.dim},)")
    traj = Trajectory(p, [psi.copy()])
    for s in p.steps:
        psi, d = apply_step(sp, s, psi, clamp=clamp)
        traj.states.append(psi)
        traj.diagnostics.append(d)
    return traj


def decomposition(p: WalkPlan) -> list[np.ndarray]:
    """Dense step unitaries phase_fix * exp(-i H_k t_k), applied in list order."""
    return [s.phase_fix * eigh(step_hamiltonian(p.sp, s)).unitary(s.t) for s in p.steps]


def _canonical_prefixes(sp: SpinPair):
    """Yield (label, state) for every coupled state using its canonical plan.

    Plans sharing a prefix are walked once; the floating-point operations
    applied to each state are the same as executing its plan alone.
    """
    for j in sp.j_values():
        ms = [m for m in sp.m_values() if abs(m.twice) <= j.twice]
        for origin, branch in (("top", [m for m in ms if m.twice >= 0]),
                               ("bottom", [m for m in reversed(ms) if m.twice < 0])):
            if not branch:
                continue
            p = plan(sp, CoupledLabel(j, branch[-1]), origin)
            psi = initial_state(sp, p.start)
            if p.start.j == j:
                yield p.start, psi
            for s in p.steps:
                psi, _ = apply_step(sp, s, psi)
                if s.dst.j == j:
                    yield s.dst, psi


def walk_states(sp: SpinPair) -> dict:
    """Walk-prepared vector for every coupled label (canonical origin)."""
    return dict(_canonical_prefixes(sp))


def cg_table_via_walks(sp: SpinPair) -> CGTable:
    cols = {}
    for lab, psi in _canonical_prefixes(sp):
        idx = plane_indices(sp, lab.m)
        col = psi[idx.start:idx.stop]
        cols[(lab.j, lab.m)] = col.real
    return table_from_columns(sp, cols)


def scaling_scan(sp: SpinPair, kind: str) -> dict:
    """tau for every non-blocked transition of the given kind, keyed by Hamiltonian (j, m)."""
    from .errors import BlockedTransitionError, DomainError

    out = {}
    for j in sp.j_values():
        for m in sp.m_values():
            try:
                t = pulse_time(kind, sp, j, m)
            except (BlockedTransitionError, DomainError):
                continue
            h = walk_hamiltonian(kind, sp, j, m)
            out[(j, m)] = tau(h, t)
    return out


def max_tau(sp: SpinPair, kind: str) -> float:
    return max(scaling_scan(sp, kind).values())


def loglog_slope(xs, ys) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def diagonal_slope(kind: str, j_values=range(2, 11)) -> tuple[float, list, list]:
    """Fit log max tau against log j1 along j1 = j2."""
    xs, ys = [], []
    for j in j_values:
        sp = SpinPair.of(j, j)
        xs.append(float(j))
        ys.append(max_tau(sp, kind))
    return loglog_slope(xs, ys), xs, ys
