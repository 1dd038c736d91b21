"""Command-line entry point.

    cgwalk cg-table --j1 1 --j2 1/2 --both
    cgwalk prepare  --j1 2 --j2 2 --j 2 --m 1 --emit-unitaries
    cgwalk verify   --jmax 4
    cgwalk scaling  --walk L --diag --jmax 10
    cgwalk tomo     --n 2 --state bell.json --shots 16384 --seed 7

Every run writes its artefacts plus ``summary.json`` into the output
directory (``--out``, else $CGWALK_OUTDIR, else ./out/<command>).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .basis import CoupledLabel
from .errors import DomainError, ParseError, TomographyError
from .halfint import HalfInt, SpinPair, parse_halfint, spin_pairs_upto

log = logging.getLogger("cgwalk")


@dataclass(frozen=True)
class TableConfig:
    j1: str
    j2: str
    both: bool = False
    fmt: str = "csv"


@dataclass(frozen=True)
class PrepareConfig:
    j1: str
    j2: str
    j: str
    m: str
    origin: str = "auto"
    emit_unitaries: bool = False
    clamp: bool = False


@dataclass(frozen=True)
class VerifyConfig:
    jmax: str = "4"
    algebra: bool = False
    tol: float = 1e-10


@dataclass(frozen=True)
class ScalingConfig:
    walk: str = "L"
    diag: bool = False
    jmax: int = 10
    j1: str | None = None
    j2: str | None = None


@dataclass(frozen=True)
class TomoConfig:
    state: str
    shots: int = 16384
    seed: int = 0
    mode: str = "both"
    exact: bool = False
    n: int | None = None
    min_fidelity: float | None = None


def _pair(j1: str, j2: str, swap: bool) -> SpinPair:
    a, b = parse_halfint(j1), parse_halfint(j2)
    if a < b:
        if not swap:
            raise DomainError(f"j1 = {a} < j2 = {b}; pass --swap to exchange them")
        log.warning("swapping j1 and j2 so that j1 >= j2")
        a, b = b, a
    return SpinPair(a, b)


def _out(args, name):
    from .io import output_dir

    return output_dir(Path("out") / name, args.out)


def _finish(out: Path, command: str, config, results: dict, ok: bool) -> int:
    from .io import write_json

    ok = bool(ok)
    write_json(out / "summary.json", {"command": command, "config": asdict(config),
                                      "ok": ok, "results": results})
    line = {"command": command, "ok": ok, "out": str(out)}
    if hasattr(config, "seed"):
        line["seed"] = config.seed
    print(json.dumps(line))
    if not ok:
        print("failed: " + ", ".join(results.get("failed", [command])), file=sys.stderr)
    return 0 if ok else 1


def cmd_cg_table(args) -> int:
    from .io import write_json
    from .oracle import cg_full_table, expected_entry_count

    cfg = TableConfig(args.j1, args.j2, args.both, args.format)
    sp = _pair(cfg.j1, cfg.j2, args.swap)
    out = _out(args, "cg-table")
    table = cg_full_table(sp)
    results = {"j1": str(sp.j1), "j2": str(sp.j2), "entries": len(table),
               "expected_entries": expected_entry_count(sp)}
    ok = len(table) == expected_entry_count(sp)

    def emit(t, stem):
        if cfg.fmt == "csv":
            (out / f"{stem}.csv").write_text(t.to_csv())
        else:
            write_json(out / f"{stem}.json", t.to_json())

    emit(table, "cg_oracle")
    if cfg.both:
        from .verify import epsilon_table
        from .engine import cg_table_via_walks

        emit(cg_table_via_walks(sp), "cg_walks")
        err = epsilon_table(sp)
        results.update(eps=err.raw, eps_aligned=err.aligned, max_imag=err.max_imag)
        ok = ok and err.raw < 1e-10
    return _finish(out, "cg-table", cfg, results, ok)


def cmd_prepare(args) -> int:
    from .engine import decomposition, execute
    from .io import state_to_json, unitary_to_json, write_json
    from .oracle import coupled_state
    from .planner import plan

    cfg = PrepareConfig(args.j1, args.j2, args.j, args.m, args.origin,
                        args.emit_unitaries, args.clamp)
    sp = _pair(cfg.j1, cfg.j2, args.swap)
    target = CoupledLabel(parse_halfint(cfg.j), parse_halfint(cfg.m))
    out = _out(args, "prepare")
    p = plan(sp, target, cfg.origin)
    traj = execute(p, clamp=cfg.clamp)
    write_json(out / "plan.json", p.to_json())
    write_json(out / "state.json", state_to_json(traj.final, j1=str(sp.j1), j2=str(sp.j2),
                                                 j=str(target.j), m=str(target.m)))
    with open(out / "diagnostics.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "kind", "j", "m", "tau", "leakage", "norm_dev"])
        for k, (s, d) in enumerate(zip(p.steps, traj.diagnostics)):
            w.writerow([k, s.kind, str(s.j), str(s.m), repr(d.tau), repr(d.leakage), repr(d.norm_dev)])
    if cfg.emit_unitaries:
        for k, u in enumerate(decomposition(p)):
            write_json(out / f"unitary_{k:03d}.json", unitary_to_json(u))
    ref = coupled_state(sp, target.j, target.m)
    err = float(np.linalg.norm(traj.final - ref) / np.sqrt(sp.dim))
    results = {"steps": len(p), "kinds": "".join(s.kind for s in p.steps), "eps": err,
               "max_leakage": max((d.leakage for d in traj.diagnostics), default=0.0)}
    return _finish(out, "prepare", cfg, results, err < 1e-10)


def cmd_verify(args) -> int:
    from .verify import verify_pair

    cfg = VerifyConfig(args.jmax, args.algebra, args.tol)
    out = _out(args, "verify")
    rows, failed = [], []
    for sp in spin_pairs_upto(parse_halfint(cfg.jmax)):
        rep = verify_pair(sp, algebra=cfg.algebra)
        rows.append(rep.to_json())
        tag = f"({sp.j1},{sp.j2})"
        if not rep.table.raw < cfg.tol:
            failed.append(f"eps{tag}")
        if not rep.selection < 1e-12:
            failed.append(f"selection{tag}")
        if cfg.algebra and not rep.algebra_worst < cfg.tol:
            failed.append(f"algebra{tag}")
    ok = not failed
    with open(out / "eps.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j1", "j2", "eps"])
        for r in rows:
            w.writerow([r["j1"], r["j2"], repr(r["eps"])])
    worst = max(r["eps"] for r in rows)
    results = {"pairs": len(rows), "max_eps": worst, "failed": failed, "rows": rows}
    return _finish(out, "verify", cfg, results, ok)


SLOPE_BANDS = {"L": (2.5, 3.5), "R": (2.5, 3.5), "M": (0.7, 1.3)}


def cmd_scaling(args) -> int:
    from .engine import diagonal_slope, scaling_scan

    cfg = ScalingConfig(args.walk, args.diag, args.jmax, args.j1, args.j2)
    out = _out(args, "scaling")
    results: dict = {}
    ok = True
    if cfg.diag:
        slope, xs, ys = diagonal_slope(cfg.walk, range(2, cfg.jmax + 1))
        lo, hi = SLOPE_BANDS[cfg.walk]
        ok = lo <= slope <= hi
        results.update(slope=slope, band=[lo, hi], j1=xs, max_tau=ys)
        with open(out / "max_tau.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["j1", "j2", "max_tau"])
            for x, y in zip(xs, ys):
                w.writerow([x, x, repr(y)])
    else:
        if cfg.j1 is None or cfg.j2 is None:
            raise DomainError("give --diag or both --j1 and --j2")
        sp = _pair(cfg.j1, cfg.j2, args.swap)
        scan = scaling_scan(sp, cfg.walk)
        with open(out / "tau.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["j", "m", "tau"])
            for (j, m), t in sorted(scan.items(), key=lambda kv: (-kv[0][0].twice, -kv[0][1].twice)):
                w.writerow([str(j), str(m), repr(t)])
        results.update(transitions=len(scan), max_tau=max(scan.values()) if scan else None)
    return _finish(out, "scaling", cfg, results, ok)


def cmd_tomo(args) -> int:
    from .io import state_from_json, state_to_json, write_json
    from .tomography import density_tomography, fidelity, pad_state, pure_tomography, purity

    cfg = TomoConfig(args.state, args.shots, args.seed, args.mode, args.exact, args.n,
                     args.min_fidelity)
    out = _out(args, "tomo")
    raw = state_from_json(json.loads(Path(cfg.state).read_text()))
    psi = pad_state(raw)
    if cfg.n is not None:
        if raw.size > 1 << cfg.n:
            raise TomographyError(f"state of length {raw.size} does not fit in {cfg.n} qubits")
        psi = np.zeros(1 << cfg.n, dtype=complex)
        psi[:raw.size] = raw
    if np.linalg.norm(psi) == 0:
        raise TomographyError("state has zero norm")
    psi = psi / np.linalg.norm(psi)
    results: dict = {"qubits": int(np.log2(psi.size))}
    records = {}
    if cfg.mode in ("density", "both"):
        rho, recs = density_tomography(psi, cfg.shots, cfg.seed, exact=cfg.exact)
        records.update(recs)
        results["density"] = {"settings": len(recs), "purity": purity(rho),
                              "fidelity": fidelity(rho, psi)}
        write_json(out / "rho.json", {"dim": rho.shape[0],
                                      "rows": [[[z.real, z.imag] for z in row] for row in rho]})
    if cfg.mode in ("pure", "both"):
        est, recs = pure_tomography(psi, cfg.shots, cfg.seed, exact=cfg.exact)
        records.update(recs)
        results["pure"] = {"settings": len(recs), "fidelity": fidelity(est, psi)}
        write_json(out / "pure_state.json", state_to_json(est))
    write_json(out / "records.json", [records[k].to_json() for k in sorted(records)])
    ok = True
    if cfg.min_fidelity is not None:
        fids = [v["fidelity"] for k, v in results.items() if isinstance(v, dict)]
        ok = all(f >= cfg.min_fidelity for f in fids)
    return _finish(out, "tomo", cfg, results, ok)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cgwalk", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, pair=True):
        p.add_argument("--out", default=None, help="output directory")
        if pair:
            p.add_argument("--swap", action="store_true", help="accept j1 < j2 by exchanging them")

    p = sub.add_parser("cg-table", help="Clebsch-Gordan table from the oracle (and walks)")
    p.add_argument("--j1", required=True)
    p.add_argument("--j2", required=True)
    p.add_argument("--both", action="store_true", help="also derive the table from walks")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_cg_table)

    p = sub.add_parser("prepare", help="plan and execute a walk to |j, m>")
    for k in ("j1", "j2", "j", "m"):
        p.add_argument(f"--{k}", required=True)
    p.add_argument("--origin", choices=("auto", "top", "bottom"), default="auto")
    p.add_argument("--emit-unitaries", action="store_true")
    p.add_argument("--clamp", action="store_true")
    common(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("verify", help="walk-vs-oracle sweep over all pairs with j1 <= jmax")
    p.add_argument("--jmax", default="4")
    p.add_argument("--algebra", action="store_true", help="also run the operator identities")
    p.add_argument("--tol", type=float, default=1e-10)
    common(p, pair=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", help="pulse-length scan")
    p.add_argument("--walk", choices=("L", "M", "R"), default="L")
    p.add_argument("--diag", action="store_true", help="fit max tau along j1 = j2 = 2..jmax")
    p.add_argument("--jmax", type=int, default=10)
    p.add_argument("--j1")
    p.add_argument("--j2")
    common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("tomo", help="simulate tomography of a state file")
    p.add_argument("--state", required=True, help="JSON file with an 'amplitudes' list")
    p.add_argument("--shots", type=int, default=16384)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("density", "pure", "both"), default="both")
    p.add_argument("--exact", action="store_true", help="use exact probabilities")
    p.add_argument("--n", type=int, default=None, help="qubit count (zero-pads the state)")
    p.add_argument("--min-fidelity", type=float, default=None,
                   help="exit nonzero if any reconstruction falls below this fidelity")
    common(p, pair=False)
    p.set_defaults(func=cmd_tomo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DomainError, ParseError, TomographyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
