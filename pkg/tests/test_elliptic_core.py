import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import half_periods, wp_theta
from finitegap.elliptic_core import (
    DegenerateLatticeError,
    Lattice,
    PoleError,
    check_addition_identities,
    invert_wp,
    lattice_from_periods,
    wp,
    wp_prime,
    wp_second,
)

unit = st.floats(-1, 1)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_square_lattice_symmetry(square_lattice):
    e1, e2, e3 = square_lattice.e
    assert abs(e2) < 1e-12
    assert abs(e3 + e1) < 1e-12
    assert abs(square_lattice.g3) < 1e-10


def test_collinear_periods_rejected():
    with pytest.raises(DegenerateLatticeError, match="degenerate lattice"):
        lattice_from_periods(1, 2)


def test_negative_orientation_is_flipped():
    L = lattice_from_periods(1, -1j)
    assert (L.half_period_b / L.half_period_a).imag > 0


@given(half_periods())
def test_lattice_invariants(hp):
    L = lattice_from_periods(*hp)
    e = L.e
    s = max(1.0, L.e_inf)
    assert abs(sum(e)) < 1e-10 * s
    assert abs(L.g2 - 2 * sum(v * v for v in e)) < 1e-9 * s * s
    assert abs(L.g3 - 4 * e[0] * e[1] * e[2]) < 1e-9 * s**3
    for j in range(3):
        assert rel(complex(wp(L.omegas[j + 1], L)), e[j]) < 1e-10
        assert abs(wp_prime(L.omegas[j + 1], L)) < 1e-7 * s ** 1.5
    assert min(abs(e[i] - e[j]) for i in range(3) for j in range(i)) > 0


@given(half_periods(), unit, unit)
def test_wp_matches_theta_oracle(hp, s, t):
    L = lattice_from_periods(*hp)
    z = (0.05 + abs(s)) * L.half_period_a + t * L.half_period_b
    assert rel(complex(wp(z, L)), wp_theta(z, *hp)) < 1e-10


@given(half_periods(), unit, unit)
def test_periodicity_parity_and_ode(hp, s, t):
    L = lattice_from_periods(*hp)
    z = (0.1 + 0.8 * abs(s)) * L.half_period_a + 0.9 * t * L.half_period_b
    p = complex(wp(z, L))
    for shift in (2 * L.half_period_a, 2 * L.half_period_b):
        assert rel(complex(wp(z + shift, L)), p) < 1e-9
    assert rel(complex(wp(-z, L)), p) < 1e-12
    dp = complex(wp_prime(z, L))
    assert rel(complex(wp_prime(-z, L)), -dp) < 1e-9
    pi = np.prod([p - v for v in L.e])
    assert abs(dp * dp - 4 * pi) < 1e-9 * max(abs(dp) ** 2, abs(4 * pi))
    h = 1e-4 * abs(L.half_period_a)
    fd = (complex(wp_prime(z + h, L)) - complex(wp_prime(z - h, L))) / (2 * h)
    assert rel(fd, complex(wp_second(z, L))) < 1e-5


def test_laurent_leading_term(generic_lattice):
    for arg in (0.0, 1.0, 2.5):
        z = 1e-3 * cmath.exp(1j * arg)
        assert abs(z * z * complex(wp(z, generic_lattice)) - 1) < 1e-5


def test_pole_guard(generic_lattice):
    with pytest.raises(PoleError, match="pole"):
        wp(0.0, generic_lattice)
    with pytest.raises(PoleError):
        wp(2 * generic_lattice.half_period_a, generic_lattice)


def test_invert_branch_points(generic_lattice):
    L = generic_lattice
    for j in range(3):
        assert invert_wp(L.e[j], L) == L.omegas[j + 1]


@given(half_periods(), unit, unit)
def test_invert_round_trip(hp, s, t):
    L = lattice_from_periods(*hp)
    z = (0.1 + 0.8 * abs(s)) * L.half_period_a + 0.9 * t * L.half_period_b
    x = complex(wp(z, L))
    r = invert_wp(x, L)
    assert abs(complex(wp(r, L)) - x) < 1e-9 * max(1.0, abs(x))
    # r = +-z modulo the lattice
    a2, b2 = 2 * L.half_period_a, 2 * L.half_period_b
    M = np.array([[a2.real, b2.real], [a2.imag, b2.imag]])
    ok = False
    for sign in (1, -1):
        d = r - sign * z
        c = np.linalg.solve(M, [d.real, d.imag])
        ok |= bool(np.all(np.abs(c - np.round(c)) < 1e-6))
    assert ok


def test_invert_sign_hint(generic_lattice):
    L = generic_lattice
    z = 0.7 + 0.4j
    x, dp = complex(wp(z, L)), complex(wp_prime(z, L))
    for hint in (dp, -dp):
        r = invert_wp(x, L, sign_hint=hint)
        assert abs(complex(wp_prime(r, L)) - hint) < 1e-6 * abs(dp)


@given(half_periods(), unit, unit, unit, unit)
def test_addition_identities(hp, a, b, c, d):
    L = lattice_from_periods(*hp)
    z = (0.15 + 0.7 * abs(a)) * L.half_period_a + 0.8 * b * L.half_period_b
    w = 0.6 * c * L.half_period_a + (0.1 + 0.5 * abs(d)) * L.half_period_b
    r = check_addition_identities(z, w, L)
    assert max(r.first) < 1e-9
    assert r.second < 1e-9
    assert abs(check_addition_identities(z, -w, L).second - r.second) < 1e-9


def test_lattice_json_round_trip(generic_lattice):
    data = generic_lattice.to_json()
    assert data == {"omega_a": [2.0, 0.0], "omega_b": [0.6, 1.7]}
    L = Lattice.from_json(data)
    assert np.allclose(L.e, generic_lattice.e)


@pytest.mark.parametrize("x", [-88.37856242436301 - 5.082448064973311j, 1e6, -3e4j, 5e8 + 5e8j])
def test_invert_large_values_near_lattice_points(x):
    # a tall, slightly skewed lattice where grid starts alone used to stall
    L = lattice_from_periods(0.9103732634711994 - 0.029247750467671695j,
                             0.26517526242818 + 1.5581666728522383j)
    z = invert_wp(x, L)
    assert abs(complex(wp(z, L)) - x) <= 1e-9 * abs(x)
