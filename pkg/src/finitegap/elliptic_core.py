"""Weierstrass elliptic functions on an arbitrary complex lattice.

The lattice is generated by 2*omega_a and 2*omega_b.  Evaluation follows the
classical recipe: reduce the argument modulo a Gauss-reduced basis, halve it
until the Laurent series at the origin converges fast, sum the series, then
undo the halvings with the duplication formula.  The invariants g2 and g3 are
obtained from the q-expansions of the Eisenstein series E4 and E6 of the
reduced period ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import DEFAULT, ToleranceConfig


class PoleError(ValueError):
    pass


class DegenerateLatticeError(ValueError):
    pass


class InversionError(RuntimeError):
    pass


def _gauss_reduce(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Lagrange-Gauss reduction of a lattice basis; result has Im(w2/w1) > 0."""
    if abs(w1) > abs(w2):
        w1, w2 = w2, w1
    for _ in range(200):
        m = round((w2 / w1).real)
        w2 = w2 - m * w1
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
        else:
            break
    if (w2 / w1).imag < 0:
        w2 = -w2
    return w1, w2


def _divisor_power_sums(n_max: int, p: int) -> np.ndarray:
    out = np.zeros(n_max + 1)
    for d in range(1, n_max + 1):
        out[d::d] += float(d) ** p
    return out


def _invariants(w1: complex, w2: complex, terms: int) -> tuple[complex, complex]:
    """g2, g3 of the lattice Z*w1 + Z*w2 (w1, w2 full periods, reduced)."""
    tau = w2 / w1
    q = np.exp(2j * np.pi * tau)
    n = np.arange(1, terms + 1)
    qn = q ** n
    e4 = 1 + 240 * np.sum(_divisor_power_sums(terms, 3)[1:] * qn)
    e6 = 1 - 504 * np.sum(_divisor_power_sums(terms, 5)[1:] * qn)
    s = 2 * np.pi / w1
    return complex(s**4 * e4 / 12), complex(s**6 * e6 / 216)


def laurent_coefficients(g2: complex, g3: complex, terms: int) -> np.ndarray:
    """c_k for k = 2..terms+1 in wp(z) = z^-2 + sum_k c_k z^(2k-2)."""
    c = [0j, 0j, g2 / 20, g3 / 28]
    for k in range(4, terms + 2):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c.append(3 * s / ((2 * k + 1) * (k - 3)))
    return np.array(c[2:], dtype=complex)


@dataclass(frozen=True, eq=False)
class Lattice:
    half_period_a: complex
    half_period_b: complex
    g2: complex
    g3: complex
    e: tuple[complex, complex, complex]
    omegas: tuple[complex, complex, complex, complex]
    tol: ToleranceConfig = field(default=DEFAULT, repr=False)
    # reduced full-period basis and series data, used internally
    w1: complex = field(default=0j, repr=False)
    w2: complex = field(default=0j, repr=False)
    coeffs: np.ndarray = field(default=None, repr=False)

    @property
    def shortest(self) -> float:
        return abs(self.w1)

    @property
    def e_inf(self) -> float:
        return max(abs(v) for v in self.e)

    def to_json(self) -> dict:
        a, b = self.half_period_a, self.half_period_b
        return {"omega_a": [a.real, a.imag], "omega_b": [b.real, b.imag]}

    @classmethod
    def from_json(cls, data: dict, tol: ToleranceConfig = DEFAULT) -> "Lattice":
        a = complex(*data["omega_a"])
        b = complex(*data["omega_b"])
        return lattice_from_periods(a, b, tol)


def lattice_from_periods(omega_a: complex, omega_b: complex, tol: ToleranceConfig = DEFAULT) -> Lattice:
    """Build the lattice 2*omega_a Z + 2*omega_b Z.

    If the basis is negatively oriented, omega_b is replaced by -omega_b,
    which leaves the lattice and the half-period classes unchanged.
    """
    omega_a, omega_b = complex(omega_a), complex(omega_b)
    if omega_a == 0 or omega_b == 0:
        raise DegenerateLatticeError("degenerate lattice")
    ratio = omega_b / omega_a
    if abs(ratio.imag) <= 1e-12 * abs(ratio):
        raise DegenerateLatticeError("degenerate lattice")
    if ratio.imag < 0:
        omega_b = -omega_b
    w1, w2 = _gauss_reduce(2 * omega_a, 2 * omega_b)
    g2, g3 = _invariants(w1, w2, tol.eisenstein_terms)
    coeffs = laurent_coefficients(g2, g3, tol.series_terms)
    omegas = (0j, omega_a, omega_a + omega_b, omega_b)
    proto = Lattice(omega_a, omega_b, g2, g3, (0j, 0j, 0j), omegas, tol, w1, w2, coeffs)
    e = tuple(complex(v) for v in wp(np.array(omegas[1:]), proto))
    return Lattice(omega_a, omega_b, g2, g3, e, omegas, tol, w1, w2, coeffs)


def reduce_point(z, L: Lattice) -> np.ndarray:
    """Representative of z mod the lattice closest to the origin."""
    z = np.asarray(z, dtype=complex)
    w1, w2 = L.w1, L.w2
    tau = w2 / w1
    u = z / w1
    b = np.round(u.imag / tau.imag)
    a = np.round(u.real - b * tau.real)
    z0 = z - a * w1 - b * w2
    best = z0.copy()
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            cand = z0 - da * w1 - db * w2
            best = np.where(np.abs(cand) < np.abs(best), cand, best)
    return best


def wp_pair(z, L: Lattice) -> tuple[np.ndarray, np.ndarray]:
    """(wp(z), wp'(z)), vectorised over z."""
    zr = reduce_point(z, L)
    scalar = zr.ndim == 0
    zr = np.atleast_1d(zr)
    r = np.abs(zr)
    if np.any(r < L.tol.pole_guard * L.shortest):
        raise PoleError("pole")
    radius = L.tol.series_radius * L.shortest
    halvings = np.maximum(0, np.ceil(np.log2(r / radius))).astype(int)
    zs = zr / 2.0**halvings
    u = zs * zs
    c = L.coeffs
    k = np.arange(2, len(c) + 2)
    # wp - 1/z^2 = sum c_k u^(k-1); derivative wrt z
    p = np.zeros_like(zs)
    dp = np.zeros_like(zs)
    for ck, kk in zip(c[::-1], k[::-1]):
        p = p * u + ck
        dp = dp * u + (2 * kk - 2) * ck
    p = p * u + 1 / u
    dp = dp * zs - 2 / (u * zs)
    g2 = L.g2
    for step in range(int(halvings.max(initial=0))):
        act = halvings > step
        if not np.any(act):
            break
        P, D = p[act], dp[act]
        P2 = 6 * P * P - g2 / 2
        P3 = 12 * P * D
        rr = P2 / (2 * D)
        drr = (P3 * D - P2 * P2) / (2 * D * D)
        p[act] = -2 * P + rr * rr
        dp[act] = -D + rr * drr
    if scalar:
        return p[0], dp[0]
    return p, dp


def wp(z, L: Lattice):
    p, _ = wp_pair(z, L)
    return p


def wp_prime(z, L: Lattice):
    _, dp = wp_pair(z, L)
    return dp


def wp_second(z, L: Lattice):
    p = wp(z, L)
    return 6 * p * p - L.g2 / 2


def _canonical(z: complex, L: Lattice) -> complex:
    """Pick between z and -z the point in the lower half of the fundamental parallelogram."""
    a2, b2 = 2 * L.half_period_a, 2 * L.half_period_b
    det = (a2.conjugate() * b2).imag

    def coords(w: complex) -> tuple[float, float]:
        s = (w.conjugate() * b2).imag / det
        t = (a2.conjugate() * w).imag / det
        return s % 1.0, t % 1.0

    best = None
    for cand in (z, -z):
        s, t = coords(cand)
        s = 0.0 if abs(s - 1) < 1e-12 else s
        t = 0.0 if abs(t - 1) < 1e-12 else t
        key = (round(t, 10), round(s, 10))
        if best is None or key < best[0]:
            best = (key, s * a2 + t * b2)
    return complex(best[1])


def to_parallelogram(z: complex, L: Lattice) -> complex:
    a2, b2 = 2 * L.half_period_a, 2 * L.half_period_b
    det = (a2.conjugate() * b2).imag
    s = ((z.conjugate() * b2).imag / det) % 1.0
    t = ((a2.conjugate() * z).imag / det) % 1.0
    return complex(s * a2 + t * b2)


def invert_wp(x: complex, L: Lattice, sign_hint: complex | None = None) -> complex:
    """Solve wp(z) = x by multistart Newton; z is returned in the fundamental parallelogram."""
    x = complex(x)
    tol = L.tol
    scale = max(1.0, abs(x), L.e_inf)
    for j in range(3):
        if abs(x - L.e[j]) <= 1e-13 * scale:
            return L.omegas[j + 1]

    g = tol.invert_grid
    s = (np.arange(g) + 0.5) / g
    t = (np.arange(g // 2 + 1) + 0.25) / g
    S, T = np.meshgrid(s, t)
    grid = (S * L.w1 + T * L.w2).ravel()
    vals = wp(grid, L)
    chordal = np.abs(vals - x) / np.sqrt((1 + np.abs(vals) ** 2) * (1 + abs(x) ** 2))
    order = np.argsort(chordal)

    starts = [complex(grid[idx]) for idx in order[:8]]
    if abs(x) > 4 * L.e_inf:
        # near a lattice point wp(z) ~ z^-2, which the grid resolves poorly
        starts.insert(0, complex(x) ** -0.5)
    best_z, best_res = None, math.inf
    step_cap = 0.25 * L.shortest
    for z in starts:
        for _ in range(tol.invert_max_iter):
            try:
                p, dp = wp_pair(z, L)
            except PoleError:
                break
            res = abs(p - x)
            if res < best_res:
                best_z, best_res = z, res
            if res <= tol.invert_tol * scale:
                break
            if dp == 0:
                break
            step = (p - x) / dp
            if abs(step) > step_cap:
                step *= step_cap / abs(step)
            z = complex(z - step)
        if best_res <= tol.invert_tol * scale:
            break
    if best_z is None or best_res > 1e-9 * scale:
        raise InversionError(
            f"wp inversion did not converge for x={x!r}: best residual {best_res:.3e} at z={best_z!r}"
        )
    if sign_hint is not None:
        z0 = to_parallelogram(best_z, L)
        z1 = to_parallelogram(-best_z, L)
        d0 = abs(complex(wp_prime(z0, L)) - sign_hint)
        d1 = abs(complex(wp_prime(z1, L)) - sign_hint)
        return z0 if d0 <= d1 else z1
    return _canonical(best_z, L)


def half_period_products(L: Lattice) -> tuple[complex, complex, complex]:
    """E_j = (e_j - e_k)(e_j - e_l)."""
    e = L.e
    return tuple((e[j] - e[(j + 1) % 3]) * (e[j] - e[(j + 2) % 3]) for j in range(3))


class AdditionResiduals(NamedTuple):
    first: tuple[float, float, float]  # one relative residual per half-period
    second: float


def check_addition_identities(z: complex, w: complex, L: Lattice) -> AdditionResiduals:
    """Relative residuals of the two addition identities used in the D-G reduction.

    (i)  wp'(z - w_j) (wp(z) - e_j)^2 + wp'(z) E_j = 0
    (ii) 2[wp'(z-w) + wp'(z+w)](wp(z)-wp(w))^3
         + wp'(z)[(12 wp(w)^2 - g2)(wp(z)-wp(w)) + 16 Pi(wp(w))] = 0
    """
    pz, dz = wp_pair(z, L)
    E = half_period_products(L)
    first = []
    for j in range(3):
        d_shift = wp_prime(z - L.omegas[j + 1], L)
        a = d_shift * (pz - L.e[j]) ** 2
        b = dz * E[j]
        first.append(float(abs(a + b) / max(abs(a) + abs(b), 1e-300)))
    pw = wp(w, L)
    dm = wp_prime(z - w, L)
    dpl = wp_prime(z + w, L)
    pi_w = (pw - L.e[0]) * (pw - L.e[1]) * (pw - L.e[2])
    a = 2 * (dm + dpl) * (pz - pw) ** 3
    b = dz * ((12 * pw**2 - L.g2) * (pz - pw) + 16 * pi_w)
    second = float(abs(a + b) / max(abs(a) + abs(b), 1e-300))
    return AdditionResiduals(tuple(first), second)
