import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from finitegap import plane_geometry as pg
from finitegap.type_arith import mu_stats, severi_count, t0_types

fracs = st.fractions(-6, 6, max_denominator=9)


def c0_point(t):
    """Rational parameterization of x^2 + y^2 = 2 z^2, independent of conic_branch."""
    return (t * t - 2 * t - 1, -t * t - 2 * t + 1, t * t + 1)


def _sym(c):
    if isinstance(c, (int, Fraction)):
        return sp.Rational(c.numerator, c.denominator)
    return sp.nsimplify(c)


def sym_compose(C: pg.PlaneCurve, point):
    x, y, z = point
    return sp.expand(sum(_sym(c) * x**i * y**j * z**k for (i, j, k), c in C.coeffs.items()))


# intersection multiplicity -----------------------------------------------------------

def test_transverse_and_tangent_lines_on_the_base_conic():
    C0 = pg.base_conic()
    p = (1, 1, 1)
    # the gradient at p is (2, 2, -4)
    assert pg.intersection_multiplicity(C0, pg.line_branch(p, (1, 0, 0)), p) == 1
    assert pg.intersection_multiplicity(C0, pg.line_through(p, (1, -1, 1)), p) == 1
    for tangent in ((1, -1, 0), (2, 0, 1)):
        assert pg.intersection_multiplicity(C0, pg.line_branch(p, tangent), p) == 2


def test_curve_containing_the_branch():
    assert pg.intersection_multiplicity(pg.H0, pg.line_branch((0, 1, 1), (1, 0, 0)), (0, 1, 1)) == pg.INFINITE
    C0 = pg.base_conic()
    assert pg.intersection_multiplicity(C0, pg.conic_branch(C0, (1, 1, 1)), (1, 1, 1)) == pg.INFINITE


def test_branch_must_pass_through_point():
    with pytest.raises(ValueError, match="does not pass through"):
        pg.intersection_multiplicity(pg.base_conic(), pg.line_branch((1, 1, 1), (1, 0, 0)), (1, -1, 1))


@given(fracs)
def test_conic_branch_stays_on_its_conic(t):
    C0 = pg.base_conic()
    br = pg.conic_branch(C0, (1, 1, 1))
    assert C0(br.at(t)) == 0


# nodal cubic -----------------------------------------------------------------------------

def test_nodal_cubic_examples():
    K = pg.nodal_cubic()
    assert pg.nodal_cubic_param(1, 1) == (1, 1, 2)
    assert K((1, 1, 2)) == 0
    assert pg.nodal_cubic_param(1, 0) == (0, 0, 1)
    assert K.gradient((0, 0, 1)) == (0, 0, 0)
    with pytest.raises(ValueError):
        pg.nodal_cubic_param(0, 0)


@given(fracs, fracs)
def test_nodal_cubic_param_exact(u, v):
    if u == 0 and v == 0:
        return
    assert pg.nodal_cubic()(pg.nodal_cubic_param(u, v)) == 0


def test_node_is_a_double_point():
    K = pg.nodal_cubic()
    # a general line through the node meets the cubic twice there
    assert pg.intersection_multiplicity(K, pg.line_branch((0, 0, 1), (1, 2, 0)), (0, 0, 1)) == 2


# the conic C^{(4,1,1)}_q ----------------------------------------------------------------

def test_c411_at_root_two():
    r2 = math.sqrt(2)
    Q = pg.conic_c411((0, r2, 1))
    want = {(2, 0, 0): 6 - 4 * r2, (0, 2, 0): 8 - 4 * r2, (0, 1, 1): -4 * r2, (0, 0, 2): 8 * r2 - 8}
    assert set(Q.coeffs) == set(want)
    for k, v in want.items():
        assert Q.coeffs[k] == pytest.approx(v, abs=1e-12)
    assert all(c.ok for c in pg.c411_certificates((0, r2, 1)))
    assert pg.same_point(pg.c411_certificates((0, r2, 1))[1].point, (0, 1, 1))


@settings(max_examples=20)
@given(fracs.filter(lambda t: t not in (0, -1)))
def test_c411_rational_points_against_symbolic_oracle(t):
    q = c0_point(t)
    certs = pg.c411_certificates(q)
    assert all(c.ok for c in certs), certs
    # composing with an independent parameterization of C0 leaves c (s - t)^4
    s = sp.symbols("s")
    f = sp.Poly(sym_compose(pg.conic_c411(q), c0_point(s)), s)
    assert f.degree() == 4
    assert sp.expand(f.as_expr() - f.LC() * (s - _sym(t)) ** 4) == 0


@settings(max_examples=20)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z) > 0.1 and abs(z + 1) > 0.1 and abs(z * z + 1) > 0.1))
def test_c411_complex_points(t):
    assert all(c.ok for c in pg.c411_certificates(c0_point(t)))


def test_c411_errors_and_degenerate_tangency():
    with pytest.raises(ValueError, match="not on C0"):
        pg.conic_c411((1, 0, 0))
    with pytest.raises(ValueError, match="H0"):
        pg.conic_c411((1, 1, 1))
    # beta = 2 gamma: x^2 = 2 z^2 - 4 z^2 with z = 1, y = 2
    q = (math.sqrt(2) * 1j, 2, 1)
    certs = pg.c411_certificates(q)
    assert pg.same_point(certs[1].point, (1, 0, 0))
    assert all(c.ok for c in certs)


# the conic C^{(2,2,2)}_c ---------------------------------------------------------------

def test_c222_at_two():
    Q = pg.conic_c222(2)
    assert Q.coeffs == {(2, 0, 0): 1, (0, 2, 0): -3, (1, 0, 1): -4, (0, 0, 2): 7}
    p = (1, math.sqrt(7), 2)
    assert abs(Q(p)) < 1e-12 and abs(pg.base_conic()(p)) < 1e-12
    assert pg.gradients_proportional(Q, pg.base_conic(), p)
    assert Q((2, -1, 1)) == 0 and pg.H3((2, -1, 1)) == 0
    assert all(c.ok for c in pg.c222_certificates(2))


def test_c222_at_zero():
    Q = pg.conic_c222(0)
    assert Q.coeffs == {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1}
    pts = pg.c222_tangency_points(0)
    assert pg.same_point(pts["C0+"], (1, 1j, 0)) and pg.same_point(pts["C0-"], (1, -1j, 0))
    assert all(c.ok for c in pg.c222_certificates(0))


@settings(max_examples=20)
@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False).filter(
    lambda c: abs(c * c - 1) > 0.05 and abs(2 * c * c - 1) > 0.05))
def test_c222_certificates_random(c):
    assert all(cert.ok for cert in pg.c222_certificates(c))


def test_c222_symbolic_tangency_to_base_conic():
    s = sp.symbols("s")
    Q = pg.conic_c222(Fraction(3, 2))
    f = sp.factor(sym_compose(Q, c0_point(s)))
    # two double roots: the tangency points with C0
    assert all(m % 2 == 0 for _, m in sp.factor_list(f)[1])
    assert sp.degree(f, s) == 4


def test_c222_errors():
    for c in (1, -1):
        with pytest.raises(ValueError):
            pg.conic_c222(c)


# j-invariant -------------------------------------------------------------------------------

def test_j_invariant_example():
    lam, j = pg.j_invariant((2, 1, 1, 1))
    assert lam == Fraction(32, 27)
    L = sp.Rational(32, 27)
    assert j == Fraction(str(256 * (L**2 - L + 1) ** 3 / (L**2 * (L - 1) ** 2)))
    assert j == Fraction(702595369, 72900) and 889**3 == 702595369


def test_j_invariant_errors():
    with pytest.raises(ValueError, match="not elliptic"):
        pg.j_invariant((1, 0, 0, 2))
    with pytest.raises(ValueError, match="degenerate cross-ratio"):
        pg.j_from_lambda(1)


@given(fracs.filter(lambda x: x not in (0, 1)))
def test_j_is_invariant_under_cross_ratio_moves(lam):
    j = pg.j_from_lambda(lam)
    assert j == pg.j_from_lambda(1 / lam) == pg.j_from_lambda(1 - lam)


def test_j_symmetric_in_last_three_entries():
    for mu in t0_types(6):
        if mu_stats(mu).I0 == 0:
            a, b, c, d = mu.v
            assert pg.j_invariant(mu) == pg.j_invariant((a, c, d, b))


# Plücker and the dual budget --------------------------------------------------------------

def test_plucker_examples():
    assert pg.plucker_dual_degree(6, 1, []) == 12
    assert pg.plucker_dual_degree(6, 0, [(2, 2)]) == 10
    assert pg.plucker_dual_degree(2, 0, []) == 2
    with pytest.raises(ValueError):
        pg.plucker_dual_degree(1, 0)


def test_dual_budget_examples():
    b = pg.dual_budget(0, 0)
    assert (b.cusps, b.nodes, b.dual_degree) == (18, 27, 12)
    b = pg.dual_budget(1, 0)
    assert (b.cusps, b.nodes, b.dual_degree) == (12, 15, 10)
    assert pg.dual_budget(3, 1).nodes == 0
    with pytest.raises(ValueError):
        pg.dual_budget(0, 4)


def test_dual_budget_all_pairs():
    pairs = pg.realizable_i0_i1(6)
    assert len(pairs) == 12
    for I0, I1 in pairs:
        b = pg.dual_budget(I0, I1)
        lhs, rhs = b.delta_sum()
        assert lhs == rhs
        assert b.dual_degree == pg.plucker_dual_degree(6, 1 - I0, [(2, 2)] * I0)
    for mu in t0_types(6):
        st_ = mu_stats(mu)
        assert pg.dual_budget(st_.I0, st_.I1).nodes == severi_count(mu, 2)


# intersection patterns ---------------------------------------------------------------------

def test_pattern_examples():
    c = pg.classify_pattern((2, 2, 1, 1))
    assert c.name == "two-nodes" and c.in_severi and c.geometric_genus == 0
    c = pg.classify_pattern((1, 1, 1, 1, 1, 1))
    assert c.name == "genus-2-smooth" and not c.in_severi and c.geometric_genus == 2
    assert pg.classify_pattern((1, 3, 2)).name == "node+cusp"
    with pytest.raises(ValueError):
        pg.classify_pattern((2, 2))


def test_pattern_census():
    assert len(pg.partitions(6)) == 11
    assert set(pg.two_odd_partitions()) == {(5, 1), (4, 1, 1), (3, 3), (3, 2, 1), (2, 2, 1, 1)}
    severi = [p for p in pg.partitions(6) if pg.classify_pattern(p).in_severi]
    assert set(severi) == set(pg.two_odd_partitions())
    assert sum(pg.census(pg.partitions(6)).values()) == 11
    assert "not-classified" not in pg.census(pg.partitions(6))


# discriminant sextic -----------------------------------------------------------------------

def test_discriminant_examples():
    d = pg.discriminant_profile((3, 2, 2, 2))
    assert (d.degree, d.component_profile, d.geometric_genus, d.components) == (6, "irreducible", 1, 1)
    assert pg.discriminant_profile((1, 0, 0, 2)).component_profile == "conic+quartic"
    d = pg.discriminant_profile((1, 0, 0, 0))
    assert (d.component_profile, d.components, d.nodes) == ("three conics", 3, 3)


def test_discriminant_delta_count():
    for mu in t0_types(5):
        d = pg.discriminant_profile(mu)
        assert d.arithmetic_genus == (d.degree - 1) * (d.degree - 2) // 2
        assert d.arithmetic_genus - d.geometric_genus == d.delta_m + d.nodes


def test_plane_curve_validation_and_json():
    with pytest.raises(ValueError):
        pg.PlaneCurve({(1, 0, 0): 1, (0, 2, 0): 1}, 1)
    with pytest.raises(ValueError):
        pg.PlaneCurve({(1, 0, 0): 0}, 1)
    data = pg.PlaneCurve({(2, 0, 0): Fraction(1, 2), (0, 1, 1): 1j}, 2).to_json()
    assert data == {"degree": 2, "terms": {"2,0,0": "1/2", "0,1,1": [0.0, 1.0]}}
