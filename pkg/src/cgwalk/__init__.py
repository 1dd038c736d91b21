"""Clebsch-Gordan coefficients from Hamiltonian walks on the state pyramid."""
from .basis import CoupledLabel, ProductLabel, decode, encode, enumerate_m_plane, line_start
from .engine import cg_table_via_walks, decomposition, execute, scaling_scan
from .errors import BlockedTransitionError, DomainError, ParseError, TomographyError
from .evolve import eigh, evolve, unitary_of
from .halfint import HalfInt, SpinPair, parse_halfint
from .operators import (SparseHermitian, build_L, build_M, build_R, build_general_H,
                        build_projector)
from .oracle import cg_column, cg_full_table, cg_unitary, coupled_state
from .planner import WalkPlan, WalkStep, plan, pulse_time, reverse

__all__ = [
    "BlockedTransitionError", "CoupledLabel", "DomainError", "HalfInt", "ParseError",
    "ProductLabel", "SparseHermitian", "SpinPair", "TomographyError", "WalkPlan", "WalkStep",
    "build_L", "build_M", "build_R", "build_general_H", "build_projector", "cg_column",
    "cg_full_table", "cg_table_via_walks", "cg_unitary", "coupled_state", "decode",
    "decomposition", "eigh", "encode", "enumerate_m_plane", "evolve", "execute", "line_start",
    "parse_halfint", "plan", "pulse_time", "reverse", "scaling_scan", "unitary_of",
]
