"""Integer intersection theory on the rank-10 Picard lattice of the rational surface.

Classes are integer vectors over the ordered basis

    C0, l, S0, S1, S2, S3, r0, r1, r2, r3

with the Gram matrix below.  Exceptional curves are pinned down through the
double cover, whose pullback lands in a second lattice with basis

    e*C0, e*f, s0, s1, s2, s3, r0, r1, r2, r3   (perp side)

and satisfies phi*(A) . phi*(B) = 2 A . B.  Numerical classes stand in for
linear equivalence classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .type_arith import (
    InvariantViolation,
    TypeVector,
    as_t0,
    as_type,
    exceptional_neighbors,
    mu_stats,
    sq,
)

BASIS = ("C0", "l", "S0", "S1", "S2", "S3", "r0", "r1", "r2", "r3")
PERP_BASIS = ("e*C0", "e*f", "s0", "s1", "s2", "s3", "r0", "r1", "r2", "r3")


def _gram() -> tuple[tuple[int, ...], ...]:
    G = [[0] * 10 for _ in range(10)]
    G[0][0] = -2
    G[0][1] = G[1][0] = 1
    for i in range(4):
        G[2 + i][2 + i] = -1
        G[6 + i][6 + i] = -2
        G[2 + i][6 + i] = G[6 + i][2 + i] = 1
    return tuple(tuple(row) for row in G)


def _perp_gram() -> tuple[tuple[int, ...], ...]:
    G = [[0] * 10 for _ in range(10)]
    G[0][1] = G[1][0] = 1
    for i in range(2, 10):
        G[i][i] = -1
    return tuple(tuple(row) for row in G)


GRAM = _gram()
PERP_GRAM = _perp_gram()


def _form(G, a, b):
    return sum(a[i] * G[i][j] * b[j] for i in range(10) if a[i] for j in range(10) if b[j])


class _Vec:
    __slots__ = ("coeffs",)
    legend: tuple[str, ...] = ()

    def __init__(self, coeffs: Sequence[int]):
        c = tuple(coeffs)
        if len(c) != 10:
            raise ValueError("classes have ten coordinates")
        self.coeffs = c

    def __add__(self, other):
        return type(self)(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return type(self)(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return type(self)(-a for a in self.coeffs)

    def __mul__(self, k):
        return type(self)(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return type(self) is type(other) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*{n}" for c, n in zip(self.coeffs, self.legend) if c]
        return f"{type(self).__name__}({' + '.join(terms) or '0'})"

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs)

    def to_json(self) -> dict:
        return {"basis": list(self.legend), "coeffs": [int(c) if Fraction(c).denominator == 1 else str(c)
                                                        for c in self.coeffs]}


class DivClass(_Vec):
    legend = BASIS


class PerpClass(_Vec):
    legend = PERP_BASIS


def _unit(cls, i: int):
    v = [0] * 10
    v[i] = 1
    return cls(v)


C0 = _unit(DivClass, 0)
LINE = _unit(DivClass, 1)
S = tuple(_unit(DivClass, 2 + i) for i in range(4))
R = tuple(_unit(DivClass, 6 + i) for i in range(4))


def intersect(a: DivClass, b: DivClass):
    return _form(GRAM, a.coeffs, b.coeffs)


def intersect_perp(a: PerpClass, b: PerpClass):
    return _form(PERP_GRAM, a.coeffs, b.coeffs)


def s_class(i: int) -> DivClass:
    """s_i = l - 2 S_i - r_i."""
    return LINE - 2 * S[i] - R[i]


def canonical() -> DivClass:
    """K = -2 C0 - sum s_i."""
    out = -2 * C0
    for i in range(4):
        out = out - s_class(i)
    return out


def anticanonical() -> DivClass:
    return -canonical()


# pullback to the perp side --------------------------------------------------------

_EC0 = _unit(PerpClass, 0)
_EF = _unit(PerpClass, 1)
_SP = tuple(_unit(PerpClass, 2 + i) for i in range(4))
_RP = tuple(_unit(PerpClass, 6 + i) for i in range(4))


def _pullback_basis() -> tuple[PerpClass, ...]:
    c0 = _EC0
    for s in _SP:
        c0 = c0 - s
    images = [c0, 2 * _EF]
    images += [_EF - _SP[i] - _RP[i] for i in range(4)]
    images += [2 * _RP[i] for i in range(4)]
    return tuple(images)


PULLBACK = _pullback_basis()


def pullback(D: DivClass) -> PerpClass:
    out = PerpClass([0] * 10)
    for c, img in zip(D.coeffs, PULLBACK):
        if c:
            out = out + c * img
    return out


def _solve_exact(A, b) -> list[Fraction]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def class_from_pullback(P: PerpClass) -> DivClass:
    """The class D with phi*(D) . phi*(B) = 2 D . B equal to P . phi*(B) for every basis B."""
    rhs = [Fraction(intersect_perp(P, img), 2) for img in PULLBACK]
    sol = _solve_exact(GRAM, rhs)
    D = DivClass(sol)
    if not D.is_integral():
        raise InvariantViolation(f"{P} is not the pullback of an integral class")
    D = DivClass(int(c) for c in sol)
    if pullback(D) != P:
        raise InvariantViolation(f"{P} is not in the image of the pullback")
    return D


def gamma_pullback(nu) -> PerpClass:
    """n_nu e*C0 + e*f - s_k - sum nu_i r_i for nu in T_k."""
    t = as_type(nu)
    n = (sq(t.v) - 1) // 2
    out = n * _EC0 + _EF - _SP[t.k]
    for i in range(4):
        out = out - t.v[i] * _RP[i]
    return out


def class_of_gamma(nu) -> DivClass:
    return class_from_pullback(gamma_pullback(nu))


def arithmetic_genus(D: DivClass) -> int:
    twice = intersect(D, D) + intersect(D, canonical())
    if twice % 2:
        raise InvariantViolation(f"odd D.(D+K) for {D}")
    return 1 + twice // 2


def linear_system(mu, d: int) -> DivClass:
    """Gamma_mu + d(-K)."""
    return class_of_gamma(mu) + d * anticanonical()


# decompositions --------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    nu: TypeVector
    e: int
    half_gap: int  # (n - m) / 2, the multiplicity of -K in the fixed part
    gamma: tuple[int, int, int, int]  # (nu - mu) / 2, multiplicities of the r_i

    def fixed_part(self) -> DivClass:
        out = self.half_gap * anticanonical()
        for i, g in enumerate(self.gamma):
            out = out + g * R[i]
        return out

    def moving_part(self) -> DivClass:
        return class_of_gamma(self.nu) + self.e * anticanonical()


def decompose_linear_system(mu, d: int) -> list[Decomposition]:
    """All (nu, e) with nu - mu in 2N^4 and m <= n, each with its fixed part."""
    t = as_t0(mu).v
    if d < 0:
        raise ValueError("depth must be non-negative")
    out = []
    bound = d

    def rec(i, g):
        if i == 4:
            cost = sum(a * b for a, b in zip(t, g)) + sq(g)
            for e in range(bound - cost + 1):
                nu = TypeVector(tuple(a + 2 * b for a, b in zip(t, g)))
                out.append(Decomposition(nu, e, bound - cost - e, tuple(g)))
            return
        for x in range(bound + 1):
            gg = g + [x]
            if sum(a * b for a, b in zip(t, gg)) + sq(gg) > bound:
                break
            rec(i + 1, gg)

    rec(0, [])
    out.sort(key=lambda D: (D.nu.v, D.e))
    return out


def is_contraction_data(t: Sequence) -> bool:
    """Pairwise disjoint exceptional curves with t_i in T_i, jointly meeting every r_k."""
    if len(t) != 4:
        raise ValueError("contraction data has four entries")
    types = [as_type(x) for x in t]
    if any(x.k != i for i, x in enumerate(types)):
        return False
    for i in range(4):
        for j in range(i + 1, 4):
            if sq(a - b for a, b in zip(types[i].v, types[j].v)) != 2:
                return False
    return all(sum(x.v[c] for x in types) > 0 for c in range(4))


def standard_contraction_data(mu) -> tuple[TypeVector, ...]:
    t = as_t0(mu).v
    shifts = [(0, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1)]
    return tuple(TypeVector(tuple(a + b for a, b in zip(t, s))) for s in shifts)


# the del Pezzo contraction ------------------------------------------------------------

def contraction_projector(mu):
    """Orthogonal projection away from span(Gamma_mu, s_0).

    The two curves meet once, with squares -1 and -2, so the span is unimodular
    and the projection stays integral.
    """
    g = class_of_gamma(mu)
    s0 = s_class(0)
    a11, a12, a22 = intersect(g, g), intersect(g, s0), intersect(s0, s0)
    det = a11 * a22 - a12 * a12

    def proj(D: DivClass) -> DivClass:
        b1, b2 = intersect(D, g), intersect(D, s0)
        # coefficients x, y of D's component in the span: [[a11,a12],[a12,a22]] (x,y) = (b1,b2)
        x = Fraction(b1 * a22 - b2 * a12, det)
        y = Fraction(a11 * b2 - a12 * b1, det)
        out = [Fraction(c) - x * gc - y * sc for c, gc, sc in zip(D.coeffs, g.coeffs, s0.coeffs)]
        if any(v.denominator != 1 for v in out):
            raise InvariantViolation("projection is not integral")
        return DivClass(int(v) for v in out)

    return proj


# the ramification curve Omega and its image cubic in the plane, by I0
OMEGA_PROFILES = {
    0: "smooth genus-1 curve; image a smooth cubic",
    1: "smooth rational curve; image a nodal cubic",
    2: "line + conic",
    3: "three lines",
}


@dataclass(frozen=True)
class DelPezzoReport:
    mu: TypeVector
    exceptional_curves: int
    positive_dim_fibers: int
    pencil_reducibles: int
    L: DivClass
    R: DivClass
    R_c: DivClass
    Omega: DivClass
    omega_profile: str
    omega_components: tuple[DivClass, ...]
    inflection_points: tuple[int, ...]  # j in {1,2,3} with s_j an inflection point of the cubic
    lam: Fraction | None
    j_invariant: Fraction | None
    checks: dict

    def to_json(self) -> dict:
        return {
            "mu": self.mu.to_json(),
            "exceptional_curves": self.exceptional_curves,
            "positive_dim_fibers": self.positive_dim_fibers,
            "pencil_reducibles": self.pencil_reducibles,
            "L": self.L.to_json(),
            "R": self.R.to_json(),
            "R_c": self.R_c.to_json(),
            "Omega": self.Omega.to_json(),
            "omega_profile": self.omega_profile,
            "omega_components": [c.to_json() for c in self.omega_components],
            "inflection_points": list(self.inflection_points),
            "lambda": None if self.lam is None else str(self.lam),
            "j": None if self.j_invariant is None else str(self.j_invariant),
            "checks": self.checks,
        }


def delpezzo_report(mu) -> DelPezzoReport:
    """Data of the degree-2 del Pezzo surface obtained by contracting Gamma_mu and s_0.

    Classes are the orthogonal representatives in the rank-10 lattice.
    """
    from .plane_geometry import j_invariant

    t = as_t0(mu)
    st = mu_stats(t)
    proj = contraction_projector(t)
    zeros = [i for i in range(4) if t.v[i] == 0]
    c0 = proj(C0)
    s = [proj(s_class(j)) for j in range(4)]
    r = [proj(R[i]) for i in range(4)]
    L = 2 * c0 + s[1] + s[2] + s[3]
    Rc = s[1] + s[2] + s[3]
    for i in zeros:
        Rc = Rc + r[i]
    omega = 3 * c0 + s[1] + s[2] + s[3]
    for i in zeros:
        omega = omega - r[i]
    K = proj(canonical())
    # components: exceptional curves Gamma_nu with nu_i = 1 over the vanishing mu_i (i > 0)
    if st.I0 == 3:
        comps = tuple(proj(class_of_gamma(tuple(a + b for a, b in zip(t.v, eps))))
                      for eps in ((0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0)))
    elif st.I0 == 2:
        line_ = proj(class_of_gamma(tuple(1 if i and t.v[i] == 0 else t.v[i] for i in range(4))))
        comps = (line_, omega - line_)
    else:
        comps = (omega,)
    inflect = []
    if st.I0 <= 1:
        for j in (1, 2, 3):
            k, l = (x for x in (1, 2, 3) if x != j)
            if t.v[k] == t.v[l]:
                inflect.append(j)
    lam = jv = None
    if st.I0 == 0:
        lam, jv = j_invariant(t)
    checks = {
        "L_equals_minus_K": L == -K,
        "L_squared": intersect(L, L),
        "L_dot_omega": intersect(L, omega),
        "omega_genus": arithmetic_genus(omega),
        "component_degrees": [intersect(c, L) for c in comps],
        "component_genera": [arithmetic_genus(c) for c in comps],
    }
    if st.I0 == 3:
        checks["components_sum_to_omega"] = sum(comps[1:], comps[0]) == omega
    return DelPezzoReport(
        mu=t,
        exceptional_curves=len(exceptional_neighbors(t)) + 1,
        positive_dim_fibers=3 + st.I0,
        pencil_reducibles=1 + st.I0,
        L=L,
        R=2 * L,
        R_c=Rc,
        Omega=omega,
        omega_profile=OMEGA_PROFILES[st.I0],
        omega_components=comps,
        inflection_points=tuple(inflect),
        lam=lam,
        j_invariant=jv,
        checks=checks,
    )
