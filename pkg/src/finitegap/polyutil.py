"""Dense polynomial helpers over any numeric field (Fraction, complex, ...).

Univariate polynomials are lists of coefficients, lowest degree first.
Bivariate polynomials are dicts {(i, j): c} for the monomial x^i y^j.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

Poly = list
BiPoly = dict


def trim(p: Sequence) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    zero = 0
    return trim([(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n)])


def scale(p: Sequence, c) -> Poly:
    return trim([c * a for a in p])


def sub(p: Sequence, q: Sequence) -> Poly:
    return add(p, scale(q, -1))


def mul(p: Sequence, q: Sequence) -> Poly:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p: Sequence, k: int) -> Poly:
    out: Poly = [1]
    for _ in range(k):
        out = mul(out, p)
    return out


def from_roots(roots: Sequence) -> Poly:
    out: Poly = [1]
    for r in roots:
        out = mul(out, [-r, 1])
    return out


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> Poly:
    if len(p) <= 1:
        return [0]
    return trim([i * p[i] for i in range(1, len(p))])


def degree(p: Sequence) -> int:
    p = trim(p)
    return -1 if p == [0] else len(p) - 1


def taylor_shift(p: Sequence, a) -> Poly:
    """Coefficients of p(a + t) in t."""
    n = len(p)
    return trim([sum(comb(k, i) * p[k] * a ** (k - i) for k in range(i, n)) for i in range(n)])


# bivariate ---------------------------------------------------------------

def bi_trim(f: BiPoly) -> BiPoly:
    return {k: v for k, v in f.items() if v != 0}


def bi_add(f: BiPoly, g: BiPoly) -> BiPoly:
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, 0) + v
    return bi_trim(out)


def bi_mul(f: BiPoly, g: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (i1, j1), a in f.items():
        for (i2, j2), b in g.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + a * b
    return bi_trim(out)


def bi_scale(f: BiPoly, c) -> BiPoly:
    return bi_trim({k: c * v for k, v in f.items()})


def in_x(p: Sequence) -> BiPoly:
    return bi_trim({(i, 0): c for i, c in enumerate(p)})


def in_y(p: Sequence) -> BiPoly:
    return bi_trim({(0, j): c for j, c in enumerate(p)})


def bi_swap(f: BiPoly) -> BiPoly:
    return {(j, i): v for (i, j), v in f.items()}


def bi_eval(f: BiPoly, x, y):
    return sum(c * x**i * y**j for (i, j), c in f.items())


def bi_diagonal(f: BiPoly) -> Poly:
    """Univariate polynomial t -> f(t, t)."""
    n = max((i + j for i, j in f), default=0)
    out = [0] * (n + 1)
    for (i, j), c in f.items():
        out[i + j] += c
    return trim(out)


def bi_shift(f: BiPoly, a, b) -> BiPoly:
    """Coefficients of f(a + s, b + t) as a polynomial in (s, t)."""
    out: BiPoly = {}
    for (i, j), c in f.items():
        for p in range(i + 1):
            cx = comb(i, p) * a ** (i - p)
            for q in range(j + 1):
                k = (p, q)
                out[k] = out.get(k, 0) + c * cx * comb(j, q) * b ** (j - q)
    return out


def bi_degrees(f: BiPoly) -> tuple[int, int]:
    return max(i for i, _ in f), max(j for _, j in f)


def as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)
