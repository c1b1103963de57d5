from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitegap import type_arith as ta
from finitegap.type_arith import (
    InvariantViolation,
    TypeVector,
    UnsupportedDepth,
    c_map,
    c_map_inverse,
    degree_of,
    exceptional_neighbors,
    g_alpha,
    gamma_intersection,
    generic_gap,
    geiser,
    geiser_fixed_points,
    mu_stats,
    recursion_count,
    severi_count,
    spectral_enumeration,
    t0_types,
    theta_char,
)

SWEEP = t0_types(6)
t0 = st.sampled_from(SWEEP)


def _root(t: int) -> int:
    """The non-negative a with a(a+1) = t(t+1), by search."""
    return next(a for a in range(abs(t) + 2) if a * (a + 1) == t * (t + 1))


def c_map_oracle(j, k, mu):
    g = (sum(mu) - 1) // 2
    if j == 0:
        base = [g] + [_root(g - mu[0] - mu[i]) for i in (1, 2, 3)]
    else:
        base = [_root(g - mu[i]) for i in range(4)]
    if k == 0:
        return tuple(base)
    # translating by the half-period w_k permutes the others: w0<->wk, and the remaining two swap
    perm = {1: (1, 0, 3, 2), 2: (2, 3, 0, 1), 3: (3, 2, 1, 0)}[k]
    return tuple(base[perm[i]] for i in range(4))


def test_type_vector_classes():
    assert TypeVector((1, 0, 0, 0)).k == 0
    assert TypeVector((0, 1, 0, 0)).k == 1
    assert TypeVector((4, 3, 2, 2)).k == 1
    with pytest.raises(InvariantViolation):
        TypeVector((1, 1, 0, 0))
    with pytest.raises(InvariantViolation):
        TypeVector((1, 0, 0, 0), k=2)
    assert TypeVector((3, 2, 2, 2)).to_json() == [3, 2, 2, 2]


def test_mu_stats_examples():
    assert tuple(mu_stats((1, 0, 0, 0))) == (1, 1, 0, 0, 3, 1)
    assert tuple(mu_stats((3, 2, 2, 2))) == (9, 21, 10, 4, 0, 0)
    st_ = mu_stats((1, 0, 0, 2))
    assert (st_.I0, st_.I1) == (2, 1)


def test_degree_examples():
    assert degree_of((1, 0, 0, 0), 2) == 4
    assert degree_of((3, 2, 2, 2), 2) == 14
    assert degree_of((1, 0, 0, 0), 0) == 0


def test_c_map_examples():
    assert c_map(1, 0, (1, 0, 0, 0)) == (0, 0, 0, 0)
    assert c_map(1, 0, (3, 2, 2, 2)) == (1, 2, 2, 2)
    assert c_map(0, 0, (1, 0, 0, 0)) == (0, 0, 0, 0)


def test_c_map_inverse_examples():
    mu, pairs = c_map_inverse((0, 0, 0, 0))
    assert mu.v == (1, 0, 0, 0)
    mu, pairs = c_map_inverse((1, 2, 2, 2))
    assert mu.v == (3, 2, 2, 2) and (1, 0) in pairs


@given(t0, st.sampled_from(ta.JK_PAIRS))
def test_c_map_matches_oracle(mu, jk):
    assert c_map(*jk, mu) == c_map_oracle(*jk, mu.v)


def test_c_map_round_trip_and_identities_exhaustive():
    """All mu in T_0 with mu^(1) <= 15."""
    mus = [TypeVector(v) for v in product(range(16), repeat=4) if sum(v) <= 15 and ta.parity_class(v) == 0]
    assert len(mus) == 540
    for mu in mus:
        s1, s2 = sum(mu.v), ta.sq(mu.v)
        for j, k in ta.JK_PAIRS:
            a = c_map(j, k, mu)
            back, pairs = c_map_inverse(a)
            assert back == mu and (j, k) in pairs
            assert sum(x * (x + 1) for x in a) == s2 - 1
            M, S, m = max(a), sum(a), min(a)
            assert s1 - 1 == max(2 * M, S + 1 - (1 + (-1) ** S) * (m + Fraction(1, 2)))
            if generic_gap(a) >= 4:
                assert min(mu.v) >= 2
            if j == 0:
                assert (min(mu.v) >= 2) == (generic_gap(a) >= 4)


def test_gap_bound_is_not_necessary_for_odd_maps():
    alpha = c_map(1, 0, (2, 3, 3, 3))
    assert alpha == (3, 2, 2, 2) and generic_gap(alpha) == 3
    strata = spectral_enumeration(alpha)
    assert len(strata) == 1 and strata[0].count == 27 and strata[0].genus_g == g_alpha(alpha)


@given(st.tuples(*[st.integers(0, 7)] * 4))
def test_every_alpha_has_a_type(a):
    mu, pairs = c_map_inverse(a)
    assert pairs and all(c_map(j, k, mu) == a for j, k in pairs)
    assert 2 * g_alpha(a) == sum(mu.v) - 1


def test_g_alpha_examples():
    assert g_alpha((0, 0, 0, 0)) == 0
    assert g_alpha((1, 2, 2, 2)) == 4 == mu_stats((3, 2, 2, 2)).g
    assert g_alpha((4, 0, 0, 0)) == 4


def test_geiser_examples():
    mu = (3, 2, 2, 2)
    assert geiser(mu, (4, 3, 2, 2)).v == (2, 1, 2, 2)
    assert ta.sq((4, 3, 2, 2)) // 2 + ta.sq((2, 1, 2, 2)) // 2 == 22 == ta.sq(mu) + 1
    assert geiser(mu, (4, 3, 2, 2)) == TypeVector((2, 1, 2, 2))
    assert geiser(mu, (2, 1, 2, 2)).v == (4, 3, 2, 2)


def test_neighbor_census():
    assert len(exceptional_neighbors((3, 2, 2, 2))) == 24
    assert len(exceptional_neighbors((1, 0, 0, 0))) == 9
    expected = {0: 24, 1: 18, 2: 13, 3: 9}
    for mu in SWEEP:
        assert len(exceptional_neighbors(mu)) == expected[mu_stats(mu).I0]


@given(t0)
def test_geiser_involution_and_sum_rule(mu):
    nbrs = exceptional_neighbors(mu)
    s2 = ta.sq(mu.v)
    for nu in nbrs:
        im = geiser(mu, nu)
        assert im in nbrs
        assert geiser(mu, im) == nu
        assert (ta.sq(nu.v) - 1) // 2 + (ta.sq(im.v) - 1) // 2 == s2 + 1


@given(t0)
def test_fixed_points_iff_two_zeros(mu):
    zeros = mu.v.count(0)
    assert bool(geiser_fixed_points(mu)) == (zeros >= 2)


def test_gamma_intersection_examples():
    nu = TypeVector((1, 0, 0, 0))
    assert gamma_intersection(nu, nu) == -1
    assert gamma_intersection(nu, TypeVector((0, 1, 0, 0))) == 0


def test_severi_examples():
    assert severi_count((3, 2, 2, 2), 2) == 27
    assert severi_count((1, 0, 0, 2), 2) == 4
    assert severi_count((1, 0, 0, 0), 2) == 0
    assert severi_count((1, 0, 0, 0), 0) == 1
    assert severi_count((1, 0, 0, 0), 1) == 0
    with pytest.raises(UnsupportedDepth, match="unsupported depth"):
        severi_count((3, 2, 2, 2), 3)


def test_recursion_examples():
    assert recursion_count((3, 2, 2, 2), 2) == 27
    assert ta.correction_terms((3, 2, 2, 2), 2) == []
    terms = ta.correction_terms((1, 0, 0, 0), 2)
    assert sum(severi_count(nu, l) * w for nu, g, l, w in terms) == 27
    assert recursion_count((1, 0, 0, 0), 2) == 0


def test_recursion_missing_base():
    with pytest.raises(KeyError, match=r"missing base entry #SV\(\(1, 0, 0, 2\), 1\)"):
        recursion_count((1, 0, 0, 0), 2, base={})


def test_recursion_with_explicit_base():
    base = {(nu.v, l): severi_count(nu, l) for nu, g, l, w in ta.correction_terms((1, 0, 0, 0), 2)}
    assert recursion_count((1, 0, 0, 0), 2, base=base) == 0


def test_recursion_sweep_matches_closed_form():
    for mu in SWEEP:
        st_ = mu_stats(mu)
        closed = 27 - 14 * st_.I0 + 2 * st_.I0**2 - 3 * st_.I1
        assert severi_count(mu, 2) == closed
        assert recursion_count(mu, 2) == closed


@given(t0)
def test_correction_terms_by_brute_force(mu):
    d = 2
    want = []
    for g in product(range(3), repeat=4):
        if any(g) and sum(a * b for a, b in zip(mu.v, g)) + ta.sq(g) <= d:
            nu = tuple(a + 2 * b for a, b in zip(mu.v, g))
            w = 1
            for a, b in zip(nu, g):
                w *= comb(a, b)
            want.append((nu, g, d - sum(a * b for a, b in zip(mu.v, g)) - ta.sq(g), w))
    got = [(nu.v, g, l, w) for nu, g, l, w in ta.correction_terms(mu, d)]
    assert sorted(got) == sorted(want)


def test_spectral_examples():
    strata = spectral_enumeration((1, 2, 2, 2))
    assert len(strata) == 1
    s = strata[0]
    assert (s.nu.v, s.genus_g, s.theta_label.j, s.theta_label.k, s.count) == ((3, 2, 2, 2), 4, 1, 0, 27)
    strata = spectral_enumeration((0, 0, 0, 0))
    assert sum(s.count for s in strata) == 27
    assert sorted({s.genus_g for s in strata}) == [0, 1, 2]
    assert sorted(s.count for s in strata) == [0, 3, 4, 4, 4, 4, 4, 4]


def test_spectral_sweep():
    for mu in SWEEP:
        alpha = c_map(0, 0, mu)
        strata = spectral_enumeration(alpha)
        ga = g_alpha(alpha)
        assert sum(s.count for s in strata) == 27
        assert all(ga <= s.genus_g <= ga + 2 for s in strata)
        assert all(s.degree_n == degree_of(mu, 2) for s in strata)


def test_spectral_datum_json():
    s = spectral_enumeration((1, 2, 2, 2))[0]
    assert s.to_json() == {"nu": [3, 2, 2, 2], "n": 14, "g": 4,
                           "theta": {"j": 1, "k": 0, "shifts": ""}, "count": 27}


def test_theta_char_examples():
    t = theta_char(0, 0, 7, 3)
    assert t.coefficient + 2 * 7 == 2 and t.degree == 2
    t = theta_char(1, 2, 14, 4)
    assert t.coefficient == -11 and t.degree == 3


@given(st.integers(0, 1), st.integers(0, 3), st.integers(0, 50), st.integers(0, 50))
def test_theta_char_degree(j, k, n, g):
    assert theta_char(j, k, n, g).degree == g - 1


def test_counts_are_exact_integers():
    for mu in SWEEP[:40]:
        assert isinstance(severi_count(mu, 2), int)
        assert isinstance(g_alpha(c_map(1, 0, mu)), Fraction)
