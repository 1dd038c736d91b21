"""Shot-noise tomography of random and walk-prepared states.

    python3 scripts/tomography_demo.py --shots 16384 --seeds 20
"""
import argparse

import numpy as np

from cgwalk.basis import CoupledLabel
from cgwalk.engine import execute
from cgwalk.halfint import SpinPair
from cgwalk.planner import plan
from cgwalk.tomography import (
    density_tomography, fidelity, pad_state, pure_tomography, purity, random_pure,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--shots", type=int, default=2 ** 14)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()

    fd, fp = [], []
    for seed in range(args.seeds):
        psi = random_pure(args.n, np.random.default_rng(seed))
        rho, _ = density_tomography(psi, args.shots, seed)
        est, _ = pure_tomography(psi, args.shots, seed)
        fd.append(fidelity(rho, psi))
        fp.append(fidelity(est, psi))
    print(f"random {args.n}-qubit states, {args.shots} shots: median fidelity "
          f"density {np.median(fd):.4f}, pure {np.median(fp):.4f}")

    # the singlet-like |1/2, 1/2> state of (1, 1/2), padded to 3 qubits
    sp = SpinPair.of(1, "1/2")
    psi = pad_state(execute(plan(sp, CoupledLabel("1/2", "1/2"))).final)
    rho, recs = density_tomography(psi, args.shots, 0)
    est, prec = pure_tomography(psi, args.shots, 0)
    print(f"walk state |1/2,1/2> of (1,1/2): density purity {purity(rho):.4f} fidelity "
          f"{fidelity(rho, psi):.4f} with {len(recs)} settings; pure fidelity "
          f"{fidelity(est, psi):.4f} with {len(prec)} settings")


if __name__ == "__main__":
    main()
