"""Per-transition pulse lengths and the max-tau slope along j1 = j2.

    python3 scripts/scaling_scan.py --jmax 10
"""
import argparse
import csv
from pathlib import Path

from cgwalk.engine import diagonal_slope, scaling_scan
from cgwalk.halfint import SpinPair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jmax", type=int, default=10)
    ap.add_argument("--grid", type=int, default=6, help="full (j1, j2) grid for the tau maps")
    ap.add_argument("--out", default="out/scaling")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "tau_maps.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "j1", "j2", "j", "m", "tau"])
        for kind in ("L", "M", "R"):
            for j1 in range(1, args.grid + 1):
                for j2 in range(1, j1 + 1):
                    sp = SpinPair.of(j1, j2)
                    for (j, m), t in sorted(scaling_scan(sp, kind).items(),
                                            key=lambda kv: (-kv[0][0].twice, -kv[0][1].twice)):
                        w.writerow([kind, j1, j2, str(j), str(m), repr(t)])

    for kind in ("L", "M"):
        slope, xs, ys = diagonal_slope(kind, range(2, args.jmax + 1))
        print(f"{kind}: slope {slope:.3f}  " + "  ".join(f"{x:g}:{y:.3g}" for x, y in zip(xs, ys)))


if __name__ == "__main__":
    main()
