"""Serialisation of states, unitaries and run artefacts."""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

OUTDIR_ENV = "CGWALK_OUTDIR"


def output_dir(default: str | os.PathLike, override: str | None = None) -> Path:
    """Resolve the output directory: explicit flag, then environment, then default."""
    path = Path(override or os.environ.get(OUTDIR_ENV) or default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def complex_list(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex).ravel()]


def state_to_json(vec, **meta) -> dict:
    vec = np.asarray(vec, dtype=complex)
    return {**meta, "dim": int(vec.size), "amplitudes": complex_list(vec)}


def state_from_json(obj) -> np.ndarray:
    if isinstance(obj, (str, os.PathLike)) and Path(obj).exists():
        obj = json.loads(Path(obj).read_text())
    amps = obj["amplitudes"]
    return np.array([complex(a, b) for a, b in amps])


def unitary_to_json(u) -> dict:
    u = np.asarray(u, dtype=complex)
    return {"dim": int(u.shape[0]), "rows": [complex_list(row) for row in u]}


def unitary_from_json(obj) -> np.ndarray:
    return np.array([[complex(a, b) for a, b in row] for row in obj["rows"]])
