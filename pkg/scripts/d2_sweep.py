"""Solve the d = 2 system over random lattices and type vectors.

Writes one CSV row per solve: lattice, alpha, pair count, worst residual, time.

    python3 scripts/d2_sweep.py --lattices 10 --alphas 5 --seed 0 > sweep.csv
"""

import argparse
import csv
import random
import sys
import time

from finitegap import dg_solver as dg
from finitegap.elliptic_core import lattice_from_periods


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lattices", type=int, default=10)
    ap.add_argument("--alphas", type=int, default=5)
    ap.add_argument("--max-entry", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = csv.writer(sys.stdout)
    out.writerow(["omega_a", "omega_b", "alpha", "count", "max_residual", "seconds", "warnings"])
    for _ in range(args.lattices):
        a = complex(rng.uniform(0.8, 2.0), rng.uniform(-0.3, 0.3))
        b = a * complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
        L = lattice_from_periods(a, b)
        for _ in range(args.alphas):
            alpha = tuple(rng.randint(0, args.max_entry) for _ in range(4))
            t0 = time.perf_counter()
            rep = dg.solve(alpha, L, 2)
            dt = time.perf_counter() - t0
            worst = max((max(s.residuals) for s in rep.solutions if s.residuals), default=float("nan"))
            out.writerow([f"{a:.6g}", f"{b:.6g}", " ".join(map(str, alpha)), rep.count,
                          f"{worst:.2e}", f"{dt:.2f}", len(rep.warnings)])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
