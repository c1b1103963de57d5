"""Count tables over all types with entries <= N.

Prints the node / cusp budget per (I0, I1) with the number of types realising
it (formal genus is 1 - I0 and goes negative once the dual curve splits), then the genus profile of the spectral strata for the eight C^{j,k} maps.
"""

import argparse
from collections import Counter, defaultdict

from finitegap import plane_geometry as pg
from finitegap import type_arith as ta


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-entry", type=int, default=6)
    args = ap.parse_args()
    types = ta.t0_types(args.max_entry)

    by_pair = Counter((ta.mu_stats(mu).I0, ta.mu_stats(mu).I1) for mu in types)
    print(f"{'I0':>3} {'I1':>3} {'types':>6} {'#SV(mu,2)':>10} {'dual deg':>9} {'cusps':>6} {'formal genus':>13}")
    for I0, I1 in sorted(by_pair):
        b = pg.dual_budget(I0, I1)
        print(f"{I0:>3} {I1:>3} {by_pair[I0, I1]:>6} {b.nodes:>10} {b.dual_degree:>9} {b.cusps:>6} {b.genus:>13}")

    # strata profile: how the 27 split across genera g_alpha, g_alpha + 1, g_alpha + 2
    profiles = defaultdict(Counter)
    for mu in types:
        for j, k in ta.JK_PAIRS:
            alpha = ta.c_map(j, k, mu)
            ga = ta.g_alpha(alpha)
            split = [0, 0, 0]
            for s in ta.spectral_enumeration(alpha):
                split[int(s.genus_g - ga)] += s.count
            profiles[(j, k)][tuple(split)] += 1
    print()
    print("genus split of the 27 strata (g_alpha, +1, +2): number of types")
    for jk in sorted(profiles):
        row = ", ".join(f"{p}: {n}" for p, n in sorted(profiles[jk].items(), reverse=True))
        print(f"  C^{jk}: {row}")


if __name__ == "__main__":
    main()
