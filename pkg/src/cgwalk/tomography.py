"""Qubit-state tomography: full Pauli reconstruction and an adaptive
pure-state method that needs at most 2n + 1 measurement settings.

Qubit 1 is the most significant bit of a basis index.  A measurement
setting is a string over {X, Y, Z}; X is read out after exp(+i pi/4 Y) and
Y after exp(-i pi/4 X), both of which rotate the chosen axis onto Z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import TomographyError

_PAULI = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}
_AXIS = {"X": 1, "Y": 2, "Z": 3}
_U_X = (np.eye(2) - 1j * _PAULI[1]) / np.sqrt(2)  # exp(-i pi/4 X): Y -> Z
_U_Y = (np.eye(2) + 1j * _PAULI[2]) / np.sqrt(2)  # exp(+i pi/4 Y): X -> Z
_ROT = {"X": _U_Y, "Y": _U_X, "Z": np.eye(2, dtype=complex)}


def n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise TomographyError(f"dimension {dim} is not a power of two")
    return n


def bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def pauli_string(k: tuple) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for d in k:
        out = np.kron(out, _PAULI[d])
    return out


def rotation(axes: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for a in axes:
        out = np.kron(out, _ROT[a])
    return out


@dataclass
class ShotRecord:
    axes: str
    shots: int
    counts: dict = field(default_factory=dict)
    probs: np.ndarray | None = None  # set in exact mode instead of counts

    def frequencies(self) -> np.ndarray:
        n = len(self.axes)
        if self.probs is not None:
            return np.asarray(self.probs, float)
        f = np.zeros(1 << n)
        for b, c in self.counts.items():
            f[int(b, 2)] = c
        return f / self.shots

    def to_json(self) -> dict:
        out = {"axes": self.axes, "shots": self.shots, "counts": dict(sorted(self.counts.items()))}
        if self.probs is not None:
            out["probs"] = [float(x) for x in self.probs]
        return out

    @classmethod
    def from_json(cls, obj) -> "ShotRecord":
        probs = obj.get("probs")
        return cls(obj["axes"], int(obj["shots"]), {k: int(v) for k, v in obj["counts"].items()},
                   None if probs is None else np.asarray(probs, float))


def _axis_id(axes: str) -> int:
    return int("".join(str(_AXIS[a] - 1) for a in axes), 3)


def simulate_shots(state, axes: str, shots: int, seed: int = 0, *, exact: bool = False) -> ShotRecord:
    """Measure a pure state or density matrix after rotating ``axes`` onto Z."""
    a = np.asarray(state, dtype=complex)
    n = n_qubits(a.shape[0])
    if len(axes) != n or any(c not in _AXIS for c in axes):
        raise TomographyError(f"axes {axes!r} must be {n} letters from XYZ")
    u = rotation(axes)
    if a.ndim == 1:
        probs = np.abs(u @ a) ** 2
    else:
        probs = np.real(np.diag(u @ a @ u.conj().T))
    probs = np.clip(probs, 0, None)
    probs = probs / probs.sum()
    if exact:
        return ShotRecord(axes, 0, {}, probs)
    if shots <= 0:
        raise TomographyError("shots must be positive")
    rng = np.random.default_rng([seed, _axis_id(axes)])
    draws = rng.multinomial(shots, probs)
    counts = {bitstring(i, n): int(c) for i, c in enumerate(draws) if c}
    return ShotRecord(axes, shots, counts)


def all_axes(n: int) -> list[str]:
    return ["".join(t) for t in product("XYZ", repeat=n)]


@lru_cache(maxsize=16)
def g_matrix(n: int) -> np.ndarray:
    """G[q, b-1] = prod_i (-1)^(b_i q_i) for q = 0..N-2, b = 1..N-1."""
    size = (1 << n) - 1
    g = np.empty((size, size))
    for q in range(size):
        for b in range(1, size + 1):
            g[q, b - 1] = -1.0 if bin(q & b).count("1") % 2 else 1.0
    g.setflags(write=False)
    return g


def _digits(b: int, n: int) -> list[int]:
    return [(b >> (n - 1 - i)) & 1 for i in range(n)]


def pauli_coefficients(records: dict, n: int) -> dict:
    """Average R_k over every setting that measures it."""
    sums: dict = {}
    counts: dict = {}
    g = g_matrix(n)
    size = (1 << n) - 1
    for axes, rec in records.items():
        if len(axes) != n:
            raise TomographyError(f"setting {axes!r} has the wrong length")
        p = rec.frequencies()[:size]
        r = np.linalg.solve(g, p - 2.0 ** -n)
        av = [_AXIS[c] for c in axes]
        for b in range(1, size + 1):
            mu = tuple(a * d for a, d in zip(av, _digits(b, n)))
            sums[mu] = sums.get(mu, 0.0) + r[b - 1]
            counts[mu] = counts.get(mu, 0) + 1
    return {k: sums[k] / counts[k] for k in sums}


def reconstruct_density(records: dict, n: int) -> np.ndarray:
    """rho = I / 2^n + sum_k R_k sigma_k from measurement records."""
    coeffs = pauli_coefficients(records, n)
    missing = [k for k in product(range(4), repeat=n) if any(k) and k not in coeffs]
    if missing:
        raise TomographyError(f"settings do not cover Pauli strings {missing[:4]}...")
    rho = np.eye(1 << n, dtype=complex) / (1 << n)
    for k, r in coeffs.items():
        rho += r * pauli_string(k)
    return rho


def density_tomography(state, shots: int, seed: int = 0, *, exact: bool = False):
    a = np.asarray(state, dtype=complex)
    n = n_qubits(a.shape[0])
    recs = {ax: simulate_shots(a, ax, shots, seed, exact=exact) for ax in all_axes(n)}
    return reconstruct_density(recs, n), recs


def _psd_part(rho, tol):
    rho = 0.5 * (rho + rho.conj().T)
    w, v = np.linalg.eigh(rho)
    if w.min() < -tol:
        raise TomographyError(f"density matrix has eigenvalue {w.min():.3e} below -{tol}")
    w = np.clip(w, 0, None)
    if w.sum() <= 0:
        raise TomographyError("density matrix has no positive part")
    w = w / w.sum()
    return w, v


def clipped(rho, tol: float = 0.05) -> np.ndarray:
    w, v = _psd_part(rho, tol)
    return (v * w) @ v.conj().T


def purity(rho, tol: float = 0.05) -> float:
    w, _ = _psd_part(rho, tol)
    return float(np.sum(w ** 2))


def _sqrtm_psd(rho):
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(rho, sigma, tol: float = 0.05) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(sigma) rho sqrt(sigma)); vectors are accepted."""
    def as_rho(x):
        x = np.asarray(x, dtype=complex)
        return np.outer(x, x.conj()) if x.ndim == 1 else clipped(x, tol)

    r, s = as_rho(rho), as_rho(sigma)
    rs = _sqrtm_psd(s)
    inner = rs @ r @ rs
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(w, 0, None))))


def fix_global_phase(psi, tol: float = 1e-12) -> np.ndarray:
    """Make the lowest-index occupied amplitude real and positive."""
    psi = np.asarray(psi, dtype=complex)
    occ = np.flatnonzero(np.abs(psi) > tol)
    if not occ.size:
        raise TomographyError("state has no occupied amplitude")
    ph = psi[occ[0]] / abs(psi[occ[0]])
    return psi / ph


def dominant_pure(rho, gap: float = 1e-10) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if w.size > 1 and w[-1] - w[-2] < gap:
        raise TomographyError("leading eigenvalue is degenerate")
    return fix_global_phase(v[:, -1])


# --- pure-state method --------------------------------------------------------

@dataclass(frozen=True)
class Link:
    """Phase link between occupied indices ``a`` (already phased) and ``b``."""

    a: int
    b: int
    measure_at: int  # index whose probability is read out

    @property
    def flipped(self) -> list[int]:
        return [i for i in range(64) if (self.a ^ self.b) >> i & 1]


def _settings_for(link: Link, n: int) -> tuple[str, str]:
    """Two settings: U_X on all flipped qubits, then U_Y on the highest-numbered one."""
    qubits = sorted(n - 1 - bit for bit in link.flipped)
    base = ["Z"] * n
    for q in qubits:
        base[q] = "Y"
    first = "".join(base)
    base[qubits[-1]] = "X"
    return first, "".join(base)


def _threshold(p, shots):
    if shots <= 0:
        return 1e-9
    return max(1e-9, 5 * np.sqrt(p * (1 - p) / shots))


def occupied_indices(z_record: ShotRecord, threshold=None) -> list[int]:
    f = z_record.frequencies()
    if threshold is not None:
        return [i for i, p in enumerate(f) if p > threshold]
    return [i for i, p in enumerate(f) if p > _threshold(p, z_record.shots)]


def _sphere_clear(occ: set, at: int, other: int) -> int | None:
    """Return an occupied vertex blocking the interference of ``at`` and ``other``."""
    diff = at ^ other
    sub = (diff - 1) & diff
    while sub:
        if (at ^ sub) in occ and sub != diff:
            return at ^ sub
        sub = (sub - 1) & diff
    return None


def link_between(occupied, a: int, b: int) -> Link:
    """Interference link from phased vertex ``a`` to ``b``.

    The readout vertex must have no occupied vertex strictly inside the
    subcube spanned by the flipped qubits; ``a`` is tried first, then ``b``.
    """
    occ = set(occupied)
    blocker = None
    for at in (a, b):
        blk = _sphere_clear(occ, at, a ^ b ^ at)
        if blk is None:
            return Link(a, b, at)
        blocker = blk if blocker is None else blocker
    raise TomographyError(f"no interference link between {a} and {b}: occupied vertex {blocker} "
                          f"lies inside the Hamming sphere")


def plan_links(occupied: list[int], n: int) -> list[Link]:
    """Spanning tree over occupied indices: Hamming-1 BFS inside components,
    then minimum-distance links between components (lowest indices on ties)."""
    occ = sorted(occupied)
    if not occ:
        raise TomographyError("no occupied basis states")
    occ_set = set(occ)
    done = {occ[0]}
    links: list[Link] = []
    frontier = [occ[0]]
    while True:
        while frontier:
            nxt = []
            for a in frontier:
                for bit in reversed(range(n)):
                    b = a ^ (1 << bit)
                    if b in occ_set and b not in done:
                        done.add(b)
                        links.append(Link(a, b, a))
                        nxt.append(b)
            frontier = sorted(nxt)
        if len(done) == len(occ):
            return links
        # a minimum-distance pair always has an empty sphere between them
        _, a, b = min((bin(a ^ b).count("1"), a, b)
                      for a in done for b in occ if b not in done)
        links.append(link_between(occ_set, a, b))
        done.add(b)
        frontier = [b]


def pure_settings(links: list[Link], n: int) -> list[str]:
    out = ["Z" * n]
    for ln in links:
        for s in _settings_for(ln, n):
            if s not in out:
                out.append(s)
    return out


def _link_phase(link: Link, n: int, r, records) -> float:
    """theta_b - theta_a from the two interference settings."""
    s1, s2 = _settings_for(link, n)
    at, other = link.measure_at, link.a ^ link.b ^ link.measure_at
    m = len(link.flipped)
    y_qubit = max(n - 1 - bit for bit in link.flipped)
    q_j = (at >> (n - 1 - y_qubit)) & 1
    phi1 = (-1j) ** m
    sgn = -1.0 if q_j else 1.0
    ra, rb = r[at], r[other]
    x1 = records[s1].frequencies()[at] * 2 ** m - ra ** 2 - rb ** 2
    x2 = records[s2].frequencies()[at] * 2 ** m - ra ** 2 - rb ** 2
    # x1 = 2 ra rb Re(phi1 e^{i D}),  x2 = 2 ra rb Re(i sgn phi1 e^{i D})
    z = complex(x1, -x2 * sgn)
    if abs(z) < 1e-3 * 2 * ra * rb:
        raise TomographyError(f"interference between {at} and {other} vanishes")
    delta = np.angle(z / phi1)  # theta_other - theta_at
    return delta if at == link.a else -delta


def reconstruct_pure(records: dict, n: int, threshold=None) -> np.ndarray:
    """Pure state from a Z record plus the interference settings of :func:`pure_settings`."""
    z = "Z" * n
    if z not in records:
        raise TomographyError("the computational-basis record is required")
    f = records[z].frequencies()
    occ = occupied_indices(records[z], threshold)
    links = plan_links(occ, n)
    need = pure_settings(links, n)
    missing = [s for s in need if s not in records]
    if missing:
        raise TomographyError(f"missing settings {missing}")
    r = np.zeros(1 << n)
    r[occ] = np.sqrt(f[occ])
    theta = {occ[0]: 0.0}
    for ln in links:
        theta[ln.b] = theta[ln.a] + _link_phase(ln, n, r, records)
    psi = np.zeros(1 << n, dtype=complex)
    for i in occ:
        psi[i] = r[i] * np.exp(1j * theta[i])
    return fix_global_phase(psi / np.linalg.norm(psi))


def pure_tomography(state, shots: int, seed: int = 0, *, exact: bool = False, threshold=None):
    """Adaptive run: Z first, then only the settings the link tree needs."""
    a = np.asarray(state, dtype=complex)
    n = n_qubits(a.shape[0])
    recs = {"Z" * n: simulate_shots(a, "Z" * n, shots, seed, exact=exact)}
    links = plan_links(occupied_indices(recs["Z" * n], threshold), n)
    for s in pure_settings(links, n)[1:]:
        recs[s] = simulate_shots(a, s, shots, seed, exact=exact)
    return reconstruct_pure(recs, n, threshold), recs


def pad_state(psi) -> np.ndarray:
    """Zero-pad a state vector to the next power-of-two length."""
    psi = np.asarray(psi, dtype=complex)
    n = max(1, int(np.ceil(np.log2(max(psi.size, 2)))))
    out = np.zeros(1 << n, dtype=complex)
    out[:psi.size] = psi
    return out


def random_pure(n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return x / np.linalg.norm(x)
