from __future__ import annotations

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finitegap.elliptic_core import lattice_from_periods

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def wp_theta(z: complex, wa: complex, wb: complex, dps: int = 30) -> complex:
    """wp from Jacobi theta functions, independent of the series code.

    wp(z) = (pi / 2wa)^2 [theta1'''(0) / (3 theta1'(0)) - (log theta1)''(v)], v = pi z / 2wa.
    """
    with mp.workdps(dps):
        z, wa, wb = mp.mpc(z), mp.mpc(wa), mp.mpc(wb)
        q = mp.exp(1j * mp.pi * wb / wa)
        v = mp.pi * z / (2 * wa)
        t = mp.jtheta(1, v, q)
        d1 = mp.jtheta(1, v, q, 1)
        d2 = mp.jtheta(1, v, q, 2)
        k = mp.jtheta(1, 0, q, 3) / (3 * mp.jtheta(1, 0, q, 1))
        return complex((mp.pi / (2 * wa)) ** 2 * (k - (d2 / t - (d1 / t) ** 2)))


@st.composite
def half_periods(draw):
    a = complex(draw(st.floats(0.7, 2.0)), draw(st.floats(-0.4, 0.4)))
    tau = complex(draw(st.floats(-0.5, 0.5)), draw(st.floats(0.8, 2.0)))
    return a, a * tau


@pytest.fixture(scope="session")
def square_lattice():
    return lattice_from_periods(1, 1j)


@pytest.fixture(scope="session")
def generic_lattice():
    return lattice_from_periods(2, 0.6 + 1.7j)
