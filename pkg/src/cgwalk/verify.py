"""Cross-checks between the walk engine, the classical oracle and the
operator algebra, plus the random-noise error model."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .basis import CoupledLabel, coupled_index, coupled_labels
from .engine import cg_table_via_walks, execute, step_hamiltonian, walk_states
from .evolve import eigh
from .halfint import SpinPair
from .operators import dense_components
from .oracle import cg_full_table, cg_unitary, coupled_state
from .planner import WalkPlan, path_plan, plan


@dataclass(frozen=True)
class Tolerances:
    table: float = 1e-10
    algebra: float = 1e-10  # scaled by 1 + max|LHS|
    selection: float = 1e-12
    occupancy: float = 1e-10
    leakage: float = 1e-10
    blocked: float = 1e-12


@dataclass
class PathErrors:
    raw: np.ndarray
    aligned: np.ndarray
    labels: list


def epsilon_path(sp: SpinPair, target: CoupledLabel | None = None, origin: str = "auto",
                 *, walk: WalkPlan | None = None) -> PathErrors:
    """Per-step RMS deviation sqrt(|C_k - c_k|^2 / D) from the oracle states."""
    p = walk if walk is not None else plan(sp, target, origin)
    traj = execute(p)
    raw, aligned = [], []
    labels = p.labels()
    for lab, c in zip(labels, traj.states):
        ref = coupled_state(sp, lab.j, lab.m)
        plus = np.linalg.norm(ref - c) / np.sqrt(sp.dim)
        minus = np.linalg.norm(ref + c) / np.sqrt(sp.dim)
        raw.append(plus)
        aligned.append(min(plus, minus))
    return PathErrors(np.array(raw), np.array(aligned), labels)


@dataclass
class TableError:
    raw: float
    aligned: float
    max_imag: float
    count: int


def epsilon_table(sp: SpinPair) -> TableError:
    """RMS difference between walk-derived and oracle tables over all entries."""
    ref = cg_full_table(sp)
    walk = cg_table_via_walks(sp)
    cols: dict = {}
    for e in ref.sorted_entries():
        cols.setdefault((e.j, e.m), []).append((e.value, walk.value(e.j, e.m, e.m1, e.m2)))
    # both sums share the same terms, so aligned <= raw holds exactly
    sq_raw = sq_aligned = 0.0
    for vals in cols.values():
        x = np.array(vals)
        plus = float(np.sum((x[:, 0] - x[:, 1]) ** 2))
        minus = float(np.sum((x[:, 0] + x[:, 1]) ** 2))
        sq_raw += plus
        sq_aligned += min(plus, minus)
    n = len(ref)
    raw = float(np.sqrt(sq_raw / n))
    imag = max(float(np.abs(v.imag).max()) for v in walk_states(sp).values())
    return TableError(raw, float(np.sqrt(sq_aligned / n)), imag, n)


# --- algebra identities -------------------------------------------------------

_EPS = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_a, _b, _c] = 1
    _EPS[_a, _c, _b] = -1


def _comm(x, y):
    return x @ y - y @ x


def _cross(x, y):
    return [sum(_EPS[a, b, c] * (x[b] @ y[c]) for b in range(3) for c in range(3)) for a in range(3)]


def _dot(x, y):
    return sum(x[a] @ y[a] for a in range(3))


@dataclass
class Identity:
    name: str
    residual: float
    scale: float

    @property
    def relative(self) -> float:
        return self.residual / (1.0 + self.scale)


def algebra_suite(sp: SpinPair) -> list[Identity]:
    """Residuals of the angular-momentum / A / S / Lambda identities."""
    comp = dense_components(sp)
    j1, j2 = comp["J1"], comp["J2"]
    n = sp.dim
    eye = np.eye(n)
    J = [j1[a] + j2[a] for a in range(3)]
    lam = _dot(j1, j2)
    A = _cross(j1, j2)
    J2 = _dot(J, J)
    J1sq, J2sq = _dot(j1, j1), _dot(j2, j2)
    S = [0.5 * (x - y) for x, y in zip(_cross(A, J), _cross(J, A))]
    A2 = _dot(A, A)
    AS = _dot(A, S)
    out: list[Identity] = []

    def add(name, lhs, rhs):
        out.append(Identity(name, float(np.abs(lhs - rhs).max()), float(np.abs(lhs).max())))

    for a, b in product(range(3), repeat=2):
        c_terms = lambda V: sum(_EPS[a, b, c] * V[c] for c in range(3))
        tag = f"{'xyz'[a]}{'xyz'[b]}"
        add(f"[J,J]_{tag}", _comm(J[a], J[b]), 1j * c_terms(J))
        add(f"[A,J]_{tag}", _comm(A[a], J[b]), 1j * c_terms(A))
        add(f"[A,A]_{tag}", _comm(A[a], A[b]), 1j * c_terms([lam @ x for x in J]))
        add(f"[J,S]_{tag}", _comm(J[a], S[b]), 1j * c_terms(S))
        delta = eye if a == b else 0 * eye
        add(f"[A,S]_{tag}", _comm(A[a], S[b]),
            1j * ((lam @ J2 - A2) @ delta + (A[a] @ A[b] - lam @ J[a] @ J[b])))
        add(f"[A,S]=(i/2)[A,[A,J2]]_{tag}", _comm(A[a], S[b]), 0.5j * _comm(A[a], _comm(A[b], J2)))
        add(f"[S,S]_{tag}", _comm(S[a], S[b]), c_terms([AS @ x for x in J]))
    for a in range(3):
        ax = "xyz"[a]
        add(f"S=(i/2)[A,J2]_{ax}", S[a], 0.5j * _comm(A[a], J2))
        add(f"[Lambda,A]=iS_{ax}", _comm(lam, A[a]), 1j * S[a])
        add(f"[S,Lambda]_{ax}", _comm(S[a], lam), 0.5j * (A[a] @ J2 + J2 @ A[a]))
    zero = 0 * eye
    add("A.J", _dot(A, J), zero)
    add("J.A", _dot(J, A), zero)
    add("S.J", _dot(S, J), zero)
    add("J.S", _dot(J, S), zero)
    add("A.S", AS, 1j * (lam @ J2 - A2))
    add("S.A", _dot(S, A), -AS)
    add("A^2", A2, J1sq @ J2sq - lam - lam @ lam)
    add("S^2", _dot(S, S), A2 + A2 @ J2 - J2 @ lam)
    sxa, axs = _cross(S, A), _cross(A, S)
    jxs, sxj = _cross(J, S), _cross(S, J)
    for a in range(3):
        ax = "xyz"[a]
        add(f"SxA_{ax}", sxa[a], A2 @ J[a])
        add(f"AxS_{ax}", axs[a], -A2 @ J[a])
        add(f"JxS_{ax}", jxs[a], J2 @ A[a])
        add(f"SxJ_{ax}", sxj[a], -A[a] @ J2)
    return out


def selection_rule_audit(sp: SpinPair) -> float:
    """Largest coupled-basis element of A_z, A_+, A_- off the allowed (j +- 1) pattern."""
    from .operators import vector_ops

    v = vector_ops(sp)
    u = cg_unitary(sp)
    labels = coupled_labels(sp)
    worst = 0.0
    for op, dm in ((v.az, 0), (v.ap, 2), (v.am, -2)):
        c = u.T @ op.toarray() @ u
        for r, lr in enumerate(labels):
            for k, lc in enumerate(labels):
                ok = abs(lr.j.twice - lc.j.twice) == 2 and lr.m.twice - lc.m.twice == dm
                if not ok:
                    worst = max(worst, abs(c[r, k]))
    return worst


@dataclass
class TransferRecord:
    kind: str
    src: CoupledLabel
    dst: CoupledLabel
    occupancy: float
    leakage: float
    blocked: float  # largest coupling from the pair to any other coupled state


def transfer_audit(sp: SpinPair) -> list[TransferRecord]:
    """Every distinct step of every canonical plan, checked in the coupled basis."""
    u = cg_unitary(sp)
    seen = {}
    for lab in coupled_labels(sp):
        for s in plan(sp, lab).steps:
            key = (s.kind, s.src, s.dst)
            if key in seen:
                continue
            h = step_hamiltonian(sp, s)
            hc = u.T @ h.dense() @ u
            i_src = coupled_index(sp, s.src.j, s.src.m)
            i_dst = coupled_index(sp, s.dst.j, s.dst.m)
            mask = np.ones(sp.dim, dtype=bool)
            mask[[i_src, i_dst]] = False
            blocked = float(max(np.abs(hc[mask, i_src]).max(initial=0.0),
                                np.abs(hc[mask, i_dst]).max(initial=0.0)))
            psi = coupled_state(sp, s.src.j, s.src.m).astype(complex)
            out = s.phase_fix * eigh(h).apply(s.t, psi)
            amp_dst = coupled_state(sp, s.dst.j, s.dst.m) @ out
            amp_src = coupled_state(sp, s.src.j, s.src.m) @ out
            occ = abs(amp_dst) ** 2
            leak = max(0.0, float(np.linalg.norm(out) ** 2 - occ - abs(amp_src) ** 2))
            seen[key] = TransferRecord(s.kind, s.src, s.dst, float(occ), leak, blocked)
    return list(seen.values())


@dataclass
class NoiseRun:
    observed: np.ndarray  # |c_k - c~_k|^2 after each step
    bound: np.ndarray  # 2 (1 - prod cos|lambda_k|)
    delta: float

    @property
    def ratio(self) -> np.ndarray:
        return self.observed / self.bound


def random_hermitian(n: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix rescaled so its largest |eigenvalue| is delta."""
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (x + x.conj().T)
    return h * (delta / np.abs(np.linalg.eigvalsh(h)).max())


def noise_growth(sp: SpinPair, path="edge", delta: float = 1e-3, seed: int = 0) -> NoiseRun:
    """Perturb each step unitary as U_k exp(i Delta_k) and compare with the exact path."""
    p = path_plan(sp, path) if isinstance(path, str) else path
    rng = np.random.default_rng(seed)
    exact = execute(p).states
    c = exact[0].copy()
    obs, bnd = [], []
    cos_prod = 1.0
    for k, s in enumerate(p.steps):
        delta_k = random_hermitian(sp.dim, delta, rng)
        w, v = np.linalg.eigh(delta_k)
        noisy = (v * np.exp(1j * w)) @ v.conj().T
        h = step_hamiltonian(sp, s)
        c = s.phase_fix * eigh(h).apply(s.t, noisy @ c)
        cos_prod *= np.cos(np.abs(w).max())
        obs.append(float(np.sum(np.abs(exact[k + 1] - c) ** 2)))
        bnd.append(2 * (1 - cos_prod))
    return NoiseRun(np.array(obs), np.array(bnd), delta)


def polynomial_growth(observed, degree: int = 3) -> tuple[float, float]:
    """Relative RMS residuals of a degree-<=3 polynomial fit and of an exponential fit."""
    y = np.asarray(observed, float)
    k = np.arange(1, y.size + 1, dtype=float)
    poly = np.polyval(np.polyfit(k, y, degree), k)
    r_poly = float(np.sqrt(np.mean((poly - y) ** 2)) / np.sqrt(np.mean(y ** 2)))
    b, a = np.polyfit(k, np.log(y), 1)
    expo = np.exp(a + b * k)
    r_exp = float(np.sqrt(np.mean((expo - y) ** 2)) / np.sqrt(np.mean(y ** 2)))
    return r_poly, r_exp


@dataclass
class VerificationReport:
    sp: SpinPair
    table: TableError
    selection: float
    algebra_worst: float = field(default=float("nan"))

    def to_json(self) -> dict:
        return {
            "j1": str(self.sp.j1), "j2": str(self.sp.j2),
            "eps": self.table.raw, "eps_aligned": self.table.aligned,
            "max_imag": self.table.max_imag, "entries": self.table.count,
            "selection": self.selection, "algebra_worst_relative": self.algebra_worst,
        }


def verify_pair(sp: SpinPair, *, algebra: bool = False) -> VerificationReport:
    rep = VerificationReport(sp, epsilon_table(sp), selection_rule_audit(sp))
    if algebra:
        rep.algebra_worst = max(i.relative for i in algebra_suite(sp))
    return rep


__all__ = [
    "Tolerances", "algebra_suite", "epsilon_path", "epsilon_table", "noise_growth",
    "polynomial_growth", "random_hermitian", "selection_rule_audit", "transfer_audit",
    "verify_pair",
]
