"""Walk plans: sequences of pi-pulses that carry an extremal product state
to a target coupled state |j, m>.

From the top state ||j1,j2>> the plan descends the right edge of the
pyramid with L steps to |j, j> and then lowers m with M steps.  From the
bottom state ||-j1,-j2>> it climbs with R steps to |j, -j> and raises m
with M steps.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import pi

from .basis import CoupledLabel
from .elements import alpha, j0, j_ladder
from .errors import BlockedTransitionError, DomainError
from .halfint import HalfInt, SpinPair, as_float, format_halfint

ONE = HalfInt(2)
BLOCK_TOL = 1e-14


def pulse_time(kind: str, sp: SpinPair, j, m) -> float:
    """Pi-pulse duration for the walk Hamiltonian labelled (j, m).

    M couples |j,m> and |j,m-1>; L couples |j,m> and |j-1,m-1>;
    R couples |j,m-1> and |j-1,m>.
    """
    j, m = HalfInt.of(j), HalfInt.of(m)
    jf = as_float(j)
    if kind == "M":
        if not (sp.is_valid_label(j, m) and sp.is_valid_label(j, m - ONE)):
            raise DomainError(f"M step |{j},{m}> -> |{j},{m - ONE}> leaves the pyramid")
        g = 2 * j_ladder(j, m, -1)
    elif kind == "L":
        if not (sp.is_valid_label(j, m) and sp.is_valid_label(j - ONE, m - ONE)):
            raise DomainError(f"L step |{j},{m}> -> |{j - ONE},{m - ONE}> leaves the pyramid")
        g = (4 * jf * jf - 1) * alpha(sp, j) * j0(j - ONE, m)
    elif kind == "R":
        if not (sp.is_valid_label(j, m - ONE) and sp.is_valid_label(j - ONE, m)):
            raise DomainError(f"R step |{j},{m - ONE}> -> |{j - ONE},{m}> leaves the pyramid")
        g = (4 * jf * jf - 1) * alpha(sp, j) * j0(j, -m)
    else:
        raise ValueError(f"unknown walk kind {kind!r}")
    if abs(g) < BLOCK_TOL:
        raise BlockedTransitionError(f"{kind} coupling vanishes at j = {j}, m = {m}")
    return pi / g


@dataclass(frozen=True)
class WalkStep:
    """One pi-pulse moving ``src`` to ``dst`` (up to ``sign``)."""

    kind: str
    src: CoupledLabel
    dst: CoupledLabel
    t: float
    phase_fix: complex

    def __post_init__(self):
        if self.kind not in ("M", "L", "R"):
            raise ValueError(f"unknown walk kind {self.kind!r}")
        if not self.t > 0:
            raise ValueError("pulse time must be positive")
        if self.phase_fix not in (1, 1j):
            raise ValueError("phase_fix must be 1 or i")

    @property
    def j(self) -> HalfInt:
        return self.src.j

    @property
    def m(self) -> HalfInt:
        return self.src.m

    @property
    def labels(self) -> tuple[HalfInt, HalfInt]:
        """(j, m) labels of the Hamiltonian driving this step."""
        if self.kind == "M":
            return self.src.j, max(self.src.m, self.dst.m)
        return max(self.src.j, self.dst.j), max(self.src.m, self.dst.m)

    @property
    def sign(self) -> int:
        """Phase of phase_fix * U on |src> relative to |dst>.

        Going up in j (the reverse of an L or R step) flips the sign.
        """
        if self.kind != "M" and self.dst.j > self.src.j:
            return -1
        return 1

    def reversed(self) -> "WalkStep":
        return replace(self, src=self.dst, dst=self.src)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "j": format_halfint(self.src.j),
            "m": format_halfint(self.src.m),
            "to": {"j": format_halfint(self.dst.j), "m": format_halfint(self.dst.m)},
            "t": self.t,
            "phase": [float(complex(self.phase_fix).real), float(complex(self.phase_fix).imag)],
        }


def origin_label(sp: SpinPair, origin: str) -> CoupledLabel:
    if origin == "top":
        return CoupledLabel(sp.jmax, sp.jmax)
    if origin == "bottom":
        return CoupledLabel(sp.jmax, -sp.jmax)
    raise ValueError(f"origin must be 'top' or 'bottom', got {origin!r}")


@dataclass(frozen=True)
class WalkPlan:
    sp: SpinPair
    origin: str
    target: CoupledLabel
    steps: tuple = field(default_factory=tuple)
    inverted: bool = False

    @property
    def start(self) -> CoupledLabel:
        return self.target if self.inverted else origin_label(self.sp, self.origin)

    @property
    def end(self) -> CoupledLabel:
        return origin_label(self.sp, self.origin) if self.inverted else self.target

    @property
    def global_phase(self) -> int:
        """Product of step signs: the executed state equals global_phase * |end>."""
        g = 1
        for s in self.steps:
            g *= s.sign
        return g

    def labels(self) -> list[CoupledLabel]:
        """Visited coupled labels, start first."""
        return [self.start] + [s.dst for s in self.steps]

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        out = {
            "j1": format_halfint(self.sp.j1),
            "j2": format_halfint(self.sp.j2),
            "origin": self.origin,
            "target": {"j": format_halfint(self.target.j), "m": format_halfint(self.target.m)},
            "steps": [s.to_json() for s in self.steps],
        }
        if self.inverted:
            out["reversed"] = True
            out["global_phase"] = self.global_phase
        return out


def make_step(kind: str, sp: SpinPair, src: CoupledLabel, dst: CoupledLabel) -> WalkStep:
    step = WalkStep(kind, src, dst, 1.0, 1j if kind == "M" else 1)
    j, m = step.labels
    return replace(step, t=pulse_time(kind, sp, j, m))


def plan(sp: SpinPair, target: CoupledLabel, origin: str = "auto") -> WalkPlan:
    """Canonical plan from ``origin`` ('top', 'bottom' or 'auto') to ``target``."""
    target = CoupledLabel(target.j, target.m)
    if not sp.is_valid_label(target.j, target.m):
        raise DomainError(f"{target} is not a state of {sp}")
    if origin == "auto":
        origin = "top" if target.m.twice >= 0 else "bottom"
    j, m = target.j, target.m
    steps = []
    cur = origin_label(sp, origin)
    if origin == "top":
        while cur.j > j:
            nxt = CoupledLabel(cur.j - ONE, cur.m - ONE)
            steps.append(make_step("L", sp, cur, nxt))
            cur = nxt
        while cur.m > m:
            nxt = CoupledLabel(cur.j, cur.m - ONE)
            steps.append(make_step("M", sp, cur, nxt))
            cur = nxt
    elif origin == "bottom":
        while cur.j > j:
            nxt = CoupledLabel(cur.j - ONE, cur.m + ONE)
            steps.append(make_step("R", sp, cur, nxt))
            cur = nxt
        while cur.m < m:
            nxt = CoupledLabel(cur.j, cur.m + ONE)
            steps.append(make_step("M", sp, cur, nxt))
            cur = nxt
    else:
        raise ValueError(f"origin must be 'top', 'bottom' or 'auto', got {origin!r}")
    assert cur == target
    return WalkPlan(sp, origin, target, tuple(steps))


def reverse(p: WalkPlan) -> WalkPlan:
    """Undo ``p``: same pulses in reverse order, src and dst swapped."""
    return replace(p, steps=tuple(s.reversed() for s in reversed(p.steps)), inverted=not p.inverted)


def plan_from_json(obj: dict) -> WalkPlan:
    sp = SpinPair.of(obj["j1"], obj["j2"])
    target = CoupledLabel(HalfInt.of(obj["target"]["j"]), HalfInt.of(obj["target"]["m"]))
    steps = []
    for s in obj["steps"]:
        src = CoupledLabel(HalfInt.of(s["j"]), HalfInt.of(s["m"]))
        dst = CoupledLabel(HalfInt.of(s["to"]["j"]), HalfInt.of(s["to"]["m"]))
        ph = complex(*s["phase"])
        steps.append(WalkStep(s["kind"], src, dst, float(s["t"]), 1j if ph == 1j else 1))
    return WalkPlan(sp, obj["origin"], target, tuple(steps), bool(obj.get("reversed", False)))


def path_plan(sp: SpinPair, path: str) -> WalkPlan:
    """Named long paths: 'edge' runs M steps along j = jmax to the bottom
    state, 'side' runs L steps down the right edge to |jmin, jmin>."""
    if path == "edge":
        return plan(sp, CoupledLabel(sp.jmax, -sp.jmax), "top")
    if path == "side":
        return plan(sp, CoupledLabel(sp.jmin, sp.jmin), "top")
    raise ValueError(f"unknown path {path!r}")
