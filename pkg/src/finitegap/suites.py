"""Invariant suites run by `finitegap verify`.

Each suite returns a SuiteResult made of named checks; a check records how
many cases it ran and dumps the failing ones.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import pic_lattice as pl
from . import plane_geometry as pg
from . import type_arith as ta
from .dg_solver import bracket_of_F, build_system, diagonal_restriction
from .elliptic_core import check_addition_identities, lattice_from_periods
from . import polyutil as pu

MAX_DUMP = 10


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def record(self, ok: bool, case) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(case)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases,
                "failures": len(self.failures), "failing_cases": self.failures[:MAX_DUMP]}


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, ta.TypeVector):
        return list(v.v)
    return v


# random inputs ------------------------------------------------------------------------

def random_lattice(rng: random.Random):
    a = complex(rng.uniform(0.8, 2.0), rng.uniform(-0.3, 0.3))
    tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
    return lattice_from_periods(a, a * tau)


def random_rational_e(rng: random.Random) -> tuple[Fraction, Fraction, Fraction]:
    while True:
        e1 = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        e2 = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        e = (e1, e2, -e1 - e2)
        if len(set(e)) == 3:
            return e


def random_rational_point_on_base_conic(rng: random.Random) -> tuple:
    """A rational point of x^2 + y^2 = 2 z^2 off y = z, from the lines through [1:1:1]."""
    br = pg.conic_branch(pg.base_conic(), (1, 1, 1))
    while True:
        t = Fraction(rng.randint(-40, 40), rng.randint(1, 15))
        p = br.at(t)
        if any(p) and p[1] != p[2]:
            return p


def random_complex_point_on_base_conic(rng: random.Random) -> tuple:
    th = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
    r = 2 ** 0.5
    return (r * cmath.cos(th), r * cmath.sin(th), 1)


# suites ---------------------------------------------------------------------------------

def identities(seed: int = 0, lattices: int = 5, points: int = 20, triples: int = 20) -> SuiteResult:
    rng = random.Random(seed)
    add = Check("addition identities, relative residual < 1e-9")
    for _ in range(lattices):
        L = random_lattice(rng)
        for _ in range(points):
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * abs(L.half_period_a)
            w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * abs(L.half_period_a)
            r = check_addition_identities(z, w, L)
            worst = max(max(r.first), r.second)
            add.record(worst < 1e-9, {"z": _jsonable(z), "w": _jsonable(w), "residual": worst})
    diag = Check("F(x, x) = 64 Pi(x)^3, exact")
    brk = Check("bracket of F = G1, exact")
    flt = Check("diagonal and bracket identities in floating point < 1e-10")
    for _ in range(triples):
        e = random_rational_e(rng)
        alpha = tuple(rng.randint(0, 6) for _ in range(4))
        sys = build_system(alpha, e)
        want = pu.scale(pu.power(sys.Pi, 3), 64)
        diag.record(pu.trim(pu.sub(diagonal_restriction(sys), want)) in ([], [0]),
                    {"e": _jsonable(e), "alpha": alpha})
        brk.record(pu.trim(pu.sub(bracket_of_F(sys), sys.G1)) in ([], [0]),
                   {"e": _jsonable(e), "alpha": alpha})
        fs = build_system(alpha, tuple(complex(v) for v in e))
        d1 = pu.sub(diagonal_restriction(fs), pu.scale(pu.power(fs.Pi, 3), 64))
        d2 = pu.sub(bracket_of_F(fs), fs.G1)
        scale = max(abs(c) for c in pu.scale(pu.power(fs.Pi, 3), 64))
        scale2 = max(abs(c) for c in fs.G1)
        err = max(max((abs(c) for c in d1), default=0) / scale, max((abs(c) for c in d2), default=0) / scale2)
        flt.record(err < 1e-10, {"e": _jsonable(e), "alpha": alpha, "error": err})
    return SuiteResult("identities", [add, diag, brk, flt])


def counts(max_entry: int = 6) -> SuiteResult:
    closed = Check("severi_count(mu, 2) = 27 - 14 I0 + 2 I0^2 - 3 I1")
    rec = Check("recursion_count = severi_count for d = 0, 1, 2")
    spec = Check("spectral strata sum to 27, genus within [g_alpha, g_alpha + 2]")
    budget = Check("dual_budget nodes = severi_count(mu, 2)")
    for mu in ta.t0_types(max_entry):
        st = ta.mu_stats(mu)
        sv = ta.severi_count(mu, 2)
        closed.record(sv == 27 - 14 * st.I0 + 2 * st.I0 ** 2 - 3 * st.I1, mu.v)
        for d in (0, 1, 2):
            rec.record(ta.recursion_count(mu, d) == ta.severi_count(mu, d), {"mu": mu.v, "d": d})
        budget.record(pg.dual_budget(st.I0, st.I1).nodes == sv, mu.v)
        alpha = ta.c_map(0, 0, mu)
        strata = ta.spectral_enumeration(alpha)
        total = sum(s.count for s in strata)
        ga = ta.g_alpha(alpha)
        spread = all(ga <= s.genus_g <= ga + 2 for s in strata)
        spec.record(total == 27 and spread, {"alpha": alpha, "total": total})
    return SuiteResult("counts", [closed, rec, spec, budget])


def appendix_b(seed: int = 0, samples: int = 20) -> SuiteResult:
    rng = random.Random(seed)
    c411 = Check("conic_c411: I_q(C0) = 4 and tangent to H0")
    for i in range(samples):
        q = random_rational_point_on_base_conic(rng) if i % 2 == 0 else random_complex_point_on_base_conic(rng)
        certs = pg.c411_certificates(q)
        c411.record(all(c.ok for c in certs), {"q": _jsonable(q), "observed": [_jsonable(c.observed) for c in certs]})
    c222 = Check("conic_c222: tangent to H0, H3 and twice to C0")
    for i in range(samples):
        if i % 2 == 0:
            c = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
            if c in (1, -1):
                c += 3
        else:
            c = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        certs = pg.c222_certificates(c)
        c222.record(all(x.ok for x in certs), {"c": _jsonable(c), "observed": [_jsonable(x.observed) for x in certs]})
    census = Check("partitions of 6 with two odd parts are the rational patterns")
    odd = set(pg.two_odd_partitions(6))
    for p in pg.partitions(6):
        census.record(pg.classify_pattern(p).in_severi == (p in odd), p)
    census.record(odd == {(5, 1), (4, 1, 1), (3, 3), (3, 2, 1), (2, 2, 1, 1)}, sorted(odd))
    return SuiteResult("appendixB", [c411, c222, census])


def lattice(seed: int = 0, pairs: int = 200, max_entry: int = 5) -> SuiteResult:
    rng = random.Random(seed)
    cross = Check("intersect(class_of_gamma) = gamma_intersection")
    types = ta.t0_types(4)
    pool = [nu for mu in types[:60] for nu in ta.exceptional_neighbors(mu)] + types
    for _ in range(pairs):
        nu, sigma = rng.choice(pool), rng.choice(pool)
        a = pl.intersect(pl.class_of_gamma(nu), pl.class_of_gamma(sigma))
        b = ta.gamma_intersection(nu, sigma)
        cross.record(a == b, {"nu": nu.v, "sigma": sigma.v, "lattice": _jsonable(a), "formula": _jsonable(b)})
    k2 = Check("K^2 = 0")
    K = pl.canonical()
    k2.record(pl.intersect(K, K) == 0, _jsonable(pl.intersect(K, K)))
    genus = Check("arithmetic genus of |Gamma_mu + d(-K)| equals d")
    geis = Check("Geiser involution and n_nu sum rule")
    nb = Check("exceptional neighbour census by I0")
    expect = {0: 24, 1: 18, 2: 13, 3: 9}
    for mu in ta.t0_types(max_entry):
        for d in range(5):
            genus.record(pl.arithmetic_genus(pl.linear_system(mu, d)) == d, {"mu": mu.v, "d": d})
        s2 = ta.sq(mu.v)
        ok = True
        for nu in ta.exceptional_neighbors(mu):
            im = ta.geiser(mu, nu)
            n1, n2 = (ta.sq(nu.v) - 1) // 2, (ta.sq(im.v) - 1) // 2
            ok &= ta.geiser(mu, im) == nu and n1 + n2 == s2 + 1
        geis.record(ok, mu.v)
        nb.record(len(ta.exceptional_neighbors(mu)) == expect[ta.mu_stats(mu).I0], mu.v)
    return SuiteResult("lattice", [cross, k2, genus, geis, nb])


SUITES = {"identities": identities, "counts": counts, "appendixB": appendix_b, "lattice": lattice}
