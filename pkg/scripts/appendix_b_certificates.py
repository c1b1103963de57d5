"""Tangency certificates for the two explicit conic families.

For rational parameters everything is exact; pass --complex to add a few
complex parameters as well.
"""

import argparse
import random
from fractions import Fraction

from finitegap import plane_geometry as pg


def c0_point(t):
    # rational parameterisation of the base conic
    return (t * t - 2 * t - 1, -t * t - 2 * t + 1, t * t + 1)


def show(label, certs):
    status = "ok" if all(c.ok for c in certs) else "FAILED"
    print(f"{label}: {status}")
    for c in certs:
        print(f"    {c.name:<14} expected {c.expected!s:<6} observed {c.observed}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--complex", action="store_true")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    ts = [Fraction(rng.randint(1, 30), rng.randint(1, 9)) for _ in range(args.n)]
    cs = [Fraction(rng.randint(2, 30), rng.randint(1, 9)) for _ in range(args.n)]
    if args.complex:
        ts += [complex(rng.uniform(-2, 2), rng.uniform(0.2, 2)) for _ in range(2)]
        cs += [complex(rng.uniform(-3, 3), rng.uniform(0.1, 2)) for _ in range(2)]
    for t in ts:
        q = c0_point(t)
        show(f"C^(4,1,1) at q = {q}", pg.c411_certificates(q))
    for c in cs:
        show(f"C^(2,2,2) at c = {c}", pg.c222_certificates(c))


if __name__ == "__main__":
    main()
