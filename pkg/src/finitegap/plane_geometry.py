"""Plane curves, parameterized branches and the Plücker bookkeeping of the dual sextic.

Curves are homogeneous polynomials in (x, y, z) stored as {(i, j, k): c}.
Intersection multiplicities are computed only against branches given by a
polynomial parameterization t -> (X(t), Y(t), Z(t)): compose and read off the
order of vanishing.  With Fraction inputs the result is exact; with complex
inputs coefficients below a relative tolerance count as zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polyutil as pu
from .type_arith import InvariantViolation, as_t0, mu_stats, t0_types

INFINITE = math.inf
CERT_TOL = 1e-9

Point = tuple


def _exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def _is_zero(v, scale: float, tol: float) -> bool:
    if _exact(v):
        return v == 0
    return abs(v) <= tol * max(scale, 1e-300)


@dataclass(frozen=True)
class PlaneCurve:
    coeffs: dict
    degree: int

    def __post_init__(self):
        c = {tuple(k): v for k, v in self.coeffs.items() if v != 0}
        if not c:
            raise ValueError("zero polynomial")
        for k in c:
            if len(k) != 3 or sum(k) != self.degree:
                raise ValueError(f"monomial {k} is not of degree {self.degree}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(cls, terms: dict) -> "PlaneCurve":
        return cls(terms, sum(next(iter(terms))))

    def __call__(self, p: Point):
        x, y, z = p
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.coeffs.items())

    def gradient(self, p: Point) -> tuple:
        x, y, z = p
        gx = gy = gz = 0
        for (i, j, k), c in self.coeffs.items():
            if i:
                gx += c * i * x ** (i - 1) * y**j * z**k
            if j:
                gy += c * j * x**i * y ** (j - 1) * z**k
            if k:
                gz += c * k * x**i * y**j * z ** (k - 1)
        return gx, gy, gz

    def norm(self) -> float:
        return sum(abs(v) for v in self.coeffs.values())

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v
        return {"degree": self.degree, "terms": {f"{i},{j},{k}": enc(v) for (i, j, k), v in self.coeffs.items()}}


def cross(a: Point, b: Point) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def same_point(a: Point, b: Point, tol: float = CERT_TOL) -> bool:
    scale = max(abs(v) for v in a) * max(abs(v) for v in b)
    return all(_is_zero(v, scale, tol) for v in cross(a, b))


def on_curve(C: PlaneCurve, p: Point, tol: float = CERT_TOL) -> bool:
    return _is_zero(C(p), C.norm() * max(abs(v) for v in p) ** C.degree, tol)


def gradients_proportional(C: PlaneCurve, D: PlaneCurve, p: Point, tol: float = CERT_TOL) -> bool:
    """Common tangent line at a shared smooth point."""
    return same_point(C.gradient(p), D.gradient(p), tol)


# branches ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    """Polynomial parameterization t -> (X(t), Y(t), Z(t)) and the parameter t0 of the marked point."""

    X: tuple
    Y: tuple
    Z: tuple
    t0: object = 0
    kind: str = ""

    def at(self, t) -> tuple:
        return tuple(pu.evaluate(list(P), t) for P in (self.X, self.Y, self.Z))


def line_branch(p: Point, direction: Point) -> Branch:
    """p + t * direction, marked at t = 0."""
    return Branch(*((a, b) for a, b in zip(p, direction)), t0=0, kind="line")


def line_through(p: Point, q: Point) -> Branch:
    return line_branch(p, q)


def _bilinear(Q: PlaneCurve, a: Point, b: Point):
    """B(a, b) with Q(v) = B(v, v) for a quadratic form."""
    s = sum(g * v for g, v in zip(Q.gradient(a), b))
    return Fraction(s, 2) if isinstance(s, int) else s / 2


def conic_branch(Q: PlaneCurve, p: Point) -> Branch:
    """Rational parameterization of a smooth conic by the lines through p.

    A direction v(t) = a + t b gives the second intersection Q(v) p - 2 B(p, v) v;
    the marked point p is reached where v(t) is tangent, B(p, v(t)) = 0.
    """
    if Q.degree != 2:
        raise ValueError("conic_branch needs a conic")
    if not on_curve(Q, p):
        raise ValueError("point is not on the conic")
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    # a, b must span a pencil together with p, and B(p, b) != 0 keeps the tangency parameter finite
    best = None
    for a in basis:
        for b in basis:
            det = sum(x * y for x, y in zip(p, cross(a, b)))
            if a == b or _is_zero(det, max(abs(v) for v in p), CERT_TOL):
                continue
            bpb = _bilinear(Q, p, b)
            if not _is_zero(bpb, Q.norm() * max(abs(v) for v in p), CERT_TOL):
                if best is None or abs(bpb) > abs(best[2]):
                    best = (a, b, bpb)
    if best is None:
        raise ValueError("conic is singular at the point")
    a, b, bpb = best
    bpa = _bilinear(Q, p, a)
    # coordinates as polynomials in t
    v = [[a[i], b[i]] for i in range(3)]
    qv = _quad_along(Q, a, b)
    bp = [bpa, bpb]
    comps = []
    for i in range(3):
        term1 = pu.scale(qv, p[i])
        term2 = pu.scale(pu.mul(bp, v[i]), 2)
        comps.append(tuple(pu.sub(term1, term2)))
    t0 = Fraction(-bpa) / bpb if _exact(bpa) and _exact(bpb) else -bpa / bpb
    return Branch(*comps, t0=t0, kind="conic")


def _quad_along(Q: PlaneCurve, a: Point, b: Point) -> list:
    """Coefficients of Q(a + t b) in t."""
    out = [0]
    for (i, j, k), c in Q.coeffs.items():
        term = [c]
        for e, idx in ((i, 0), (j, 1), (k, 2)):
            term = pu.mul(term, pu.power([a[idx], b[idx]], e))
        out = pu.add(out, term)
    return out


def nodal_cubic() -> PlaneCurve:
    """x y z - x^3 - y^3."""
    return PlaneCurve({(1, 1, 1): 1, (3, 0, 0): -1, (0, 3, 0): -1}, 3)


def nodal_cubic_param(u, v) -> tuple:
    """[u v^2 : u^2 v : u^3 + v^3] on x y z = x^3 + y^3."""
    if u == 0 and v == 0:
        raise ValueError("(u, v) must not both vanish")
    return (u * v * v, u * u * v, u**3 + v**3)


def nodal_cubic_branch(u0=1, v0=None) -> Branch:
    """The parameterization (u, v) = (1, t) marked at t = v0, or (t, 1) when v0 is None and u0 given."""
    if v0 is not None:
        # u = 1, v = t
        return Branch((0, 0, 1), (0, 1), (1, 0, 0, 1), t0=v0, kind="nodal cubic")
    return Branch((0, 1), (0, 0, 1), (1, 0, 0, 1), t0=u0, kind="nodal cubic")


def compose(C: PlaneCurve, br: Branch) -> list:
    out = [0]
    for (i, j, k), c in C.coeffs.items():
        term = [c]
        for e, P in ((i, br.X), (j, br.Y), (k, br.Z)):
            if e:
                term = pu.mul(term, pu.power(list(P), e))
        out = pu.add(out, term)
    return out


def intersection_multiplicity(C: PlaneCurve, br: Branch, p: Point, tol: float = CERT_TOL):
    """Order of vanishing of C along the branch at the parameter of p; INFINITE if C contains it."""
    here = br.at(br.t0)
    if all(_is_zero(v, 1.0, 0.0) for v in here) or not same_point(here, p, tol):
        raise ValueError(f"branch does not pass through {p}")
    f = compose(C, br)
    shifted = pu.taylor_shift(f, br.t0)
    scale = max((abs(c) for c in shifted), default=0.0)
    pmax = max(abs(c) for P in (br.X, br.Y, br.Z) for c in P)
    bound = C.norm() * (pmax * (1 + abs(br.t0))) ** C.degree * (len(f) + 1)
    if all(_is_zero(c, bound, tol) for c in shifted):
        return INFINITE
    for order, c in enumerate(shifted):
        if not _is_zero(c, max(scale, bound * tol), tol if not _exact(c) else 0):
            return order
    return INFINITE


# fixed curves ---------------------------------------------------------------------------

def base_conic() -> PlaneCurve:
    """C0 = {x^2 + y^2 - 2 z^2 = 0}."""
    return PlaneCurve({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -2}, 2)


def line(a, b, c) -> PlaneCurve:
    return PlaneCurve({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, 1)


H0 = line(0, 1, -1)  # y = z
H3 = line(0, 1, 1)   # y = -z


@dataclass(frozen=True)
class Certificate:
    name: str
    point: tuple
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def conic_c411(q: Point) -> PlaneCurve:
    """The conic meeting C0 only at q (with multiplicity 4) and tangent to H0."""
    a, b, g = q
    if not on_curve(base_conic(), q):
        raise ValueError("q is not on C0")
    if _is_zero(b - g, max(abs(b), abs(g)), CERT_TOL):
        raise ValueError("q lies on H0 (beta = gamma)")
    return PlaneCurve({
        (2, 0, 0): (b - 2 * g) ** 2,
        (0, 2, 0): 3 * b * b - 4 * b * g + 2 * g * g,
        (1, 1, 0): 2 * a * b,
        (1, 0, 1): -4 * a * g,
        (0, 1, 1): -4 * b * g,
        (0, 0, 2): 4 * b * (2 * g - b),
    }, 2)


def c411_certificates(q: Point) -> list[Certificate]:
    a, b, g = q
    Q = conic_c411(q)
    C0 = base_conic()
    t = (a, 2 * g - b, 2 * g - b)
    if all(_is_zero(v, 1.0, 0.0) for v in t):
        raise ValueError("degenerate tangency point")
    return [
        Certificate("I_q(C0, C)", tuple(q), 4, intersection_multiplicity(Q, conic_branch(C0, q), q)),
        Certificate("on C", t, True, on_curve(Q, t)),
        Certificate("I_t(H0, C)", t, 2, intersection_multiplicity(Q, line_branch(t, (1, 0, 0)) if
                                                                  not same_point(t, (1, 0, 0)) else
                                                                  line_branch(t, (0, 1, 1)), t)),
    ]


def conic_c222(c) -> PlaneCurve:
    """x^2 + (1 - c^2) y^2 - 2 c x z + (2 c^2 - 1) z^2, tangent to H0, H3 and C0."""
    if c == 1 or c == -1:
        raise ValueError("c must differ from 1 and -1")
    return PlaneCurve({
        (2, 0, 0): 1,
        (0, 2, 0): 1 - c * c,
        (1, 0, 1): -2 * c,
        (0, 0, 2): 2 * c * c - 1,
    }, 2)


def c222_tangency_points(c) -> dict:
    w = complex(2 * c * c - 1) ** 0.5
    return {
        "H0": (c, 1, 1),
        "H3": (c, -1, 1),
        "C0+": (1, w, c),
        "C0-": (1, -w, c),
    }


def c222_certificates(c) -> list[Certificate]:
    Q = conic_c222(c)
    pts = c222_tangency_points(c)
    C0 = base_conic()
    out = []
    # H0 is y = z: direction (1, 0, 0) stays inside it
    for name in ("H0", "H3"):
        p = pts[name]
        out.append(Certificate(f"I_p({name}, C)", p, 2, intersection_multiplicity(Q, line_branch(p, (1, 0, 0)), p)))
    for name in ("C0+", "C0-"):
        p = pts[name]
        out.append(Certificate(f"I_p(C0, C)", p, 2, intersection_multiplicity(Q, conic_branch(C0, p), p)))
        out.append(Certificate("common tangent", p, True, gradients_proportional(Q, C0, p)))
    return out


# j-invariant of the cubic ---------------------------------------------------------------

def j_invariant(mu) -> tuple[Fraction, Fraction]:
    """(lambda, j) with lambda = prod 2 mu_i / (mu^(1) - 2 mu_i), j = 2^8 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)."""
    t = as_t0(mu)
    if mu_stats(t).I0 > 0:
        raise ValueError("Omega not elliptic: some mu_i vanishes")
    s1 = sum(t.v)
    lam = Fraction(1)
    for m in t.v:
        lam *= Fraction(2 * m, s1 - 2 * m)
    return lam, j_from_lambda(lam)


def j_from_lambda(lam) -> Fraction:
    lam = Fraction(lam)
    if lam in (0, 1):
        raise ValueError("degenerate cross-ratio")
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


# Plücker ----------------------------------------------------------------------------------

def plucker_dual_degree(d: int, g: int, sing: Sequence[tuple[int, int]] = ()) -> int:
    """d^dual from 2 - 2g = 2d - d^dual - sum (m_p - nu_p)."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    return 2 * d - (2 - 2 * g) - sum(m - n for m, n in sing)


def realizable_i0_i1(max_entry: int = 6) -> set[tuple[int, int]]:
    out = set()
    for mu in t0_types(max_entry):
        st = mu_stats(mu)
        out.add((st.I0, st.I1))
    return out


_VALID = None


def _valid_pairs() -> set:
    global _VALID
    if _VALID is None:
        _VALID = realizable_i0_i1(3)
    return _VALID


@dataclass(frozen=True)
class SingularityBudget:
    dual_degree: int
    cusps: int
    nodes: int
    triple_points: int
    delta_H: int
    genus: int

    def delta_sum(self) -> tuple[Fraction, int]:
        d = self.dual_degree
        lhs = Fraction((d - 1) * (d - 2), 2) - self.genus
        rhs = self.nodes + self.cusps + 3 * self.triple_points + self.delta_H
        return lhs, rhs

    def to_json(self) -> dict:
        return {"dual_degree": self.dual_degree, "cusps": self.cusps, "nodes": self.nodes,
                "triple_points": self.triple_points, "delta_H": self.delta_H, "genus": self.genus}


def dual_budget(I0: int, I1: int) -> SingularityBudget:
    if (I0, I1) not in _valid_pairs():
        raise ValueError(f"(I0, I1) = {(I0, I1)} does not arise from any type")
    b = SingularityBudget(
        dual_degree=12 - 2 * I0,
        cusps=18 - 6 * I0,
        nodes=27 - 14 * I0 + 2 * I0 * I0 - 3 * I1,
        triple_points=I1,
        delta_H=9,
        genus=1 - I0,
    )
    lhs, rhs = b.delta_sum()
    if lhs != rhs:
        raise InvariantViolation(f"delta-sum fails for {(I0, I1)}: {lhs} != {rhs}")
    return b


# intersection patterns ----------------------------------------------------------------

def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        out += [(k,) + rest for rest in partitions(n - k, k)]
    return out


@dataclass(frozen=True)
class PatternClass:
    pattern: tuple[int, ...]
    name: str
    in_severi: bool  # rational member of the Severi set
    geometric_genus: int | None
    singularities: str


_PATTERNS = {
    (2, 2, 1, 1): ("two-nodes", 0, "two nodes"),
    (3, 2, 1): ("node+cusp", 0, "a node and a cusp"),
    (3, 3): ("two-cusps", 0, "two cusps"),
    (4, 1, 1): ("tacnode", 0, "a tacnode"),
    (5, 1): ("higher-cusp", 0, "a higher cusp"),
    (1, 1, 1, 1, 1, 1): ("genus-2-smooth", 2, "none"),
    (2, 1, 1, 1, 1): ("genus-1-node", 1, "a node"),
    (3, 1, 1, 1): ("genus-1-cusp", 1, "a cusp"),
    (2, 2, 2): ("reduced-not-rational", None, "unspecified"),
    (4, 2): ("reduced-not-rational", None, "unspecified"),
    (6,): ("reduced-not-rational", None, "unspecified"),
}


def classify_pattern(pattern: Sequence[int]) -> PatternClass:
    """Singularity type of a curve from its intersection pattern with Omega (besides the fixed node)."""
    p = tuple(sorted((int(x) for x in pattern if x), reverse=True))
    if any(x < 0 for x in pattern) or sum(p) != 6:
        raise ValueError(f"pattern must be positive integers summing to 6, got {tuple(pattern)}")
    odd = sum(1 for x in p if x % 2)
    if p in _PATTERNS:
        name, genus, sing = _PATTERNS[p]
    else:
        name, genus, sing = "not-classified", None, "unknown"
    return PatternClass(p, name, odd == 2, genus, sing)


def two_odd_partitions(n: int = 6) -> list[tuple[int, ...]]:
    return [p for p in partitions(n) if sum(1 for x in p if x % 2) == 2]


# the discriminant sextic --------------------------------------------------------------------

@dataclass(frozen=True)
class DiscriminantProfile:
    mu: tuple
    degree: int
    components: int
    component_profile: str
    geometric_genus: int
    nodes: int
    delta_m: int
    arithmetic_genus: int

    def to_json(self) -> dict:
        return dict(self.__dict__, mu=list(self.mu))


def discriminant_profile(mu) -> DiscriminantProfile:
    t = as_t0(mu)
    I0 = mu_stats(t).I0
    profile = {0: "irreducible", 1: "irreducible", 2: "conic+quartic", 3: "three conics"}[I0]
    out = DiscriminantProfile(t.v, 6, max(1, I0), profile, 1 - I0, I0, 9, 10)
    if out.arithmetic_genus - out.geometric_genus != out.delta_m + out.nodes:
        raise InvariantViolation("delta count of the sextic is inconsistent")
    return out


def census(patterns: Sequence[Sequence[int]]) -> Counter:
    return Counter(classify_pattern(p).name for p in patterns)
