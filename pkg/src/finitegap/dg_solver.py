"""Reduced Duistermaat-Grünbaum systems for even elliptic potentials.

For a potential

    u(x) = sum_i a_i(a_i+1) wp(x - w_i) + 2 sum_l (wp(x - rho_l) + wp(x + rho_l))

the poles rho_l must satisfy, for every l,

    8 sum_{k != l} (wp'(rho_l - rho_k) + wp'(rho_l + rho_k))
        + sum_i (2 a_i + 1)^2 wp'(rho_l - w_i) = 0.

Writing x = wp(rho_1), y = wp(rho_2) turns the d = 2 system into the pair
F(x, y) = 0 = F(y, x) of bivariate polynomials, and the d = 1 system into
G1(x) = 0.  This module builds those polynomials (exactly when the branch
values are rational), solves them numerically and lifts the solutions back
to poles rho_l, where the transcendental equations are re-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polyutil as pu
from .config import DEFAULT, ToleranceConfig
from .elliptic_core import Lattice, invert_wp, wp, wp_prime
from .rootfind import aberth, cluster_roots, newton_polish


class SolverError(RuntimeError):
    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True, eq=False)
class DGSystem:
    alpha: tuple[int, int, int, int]
    e: tuple
    g2: object
    weights: tuple
    Pi: list
    Pj: tuple[list, list, list]
    Ej: tuple
    G1: list
    F: dict
    exact: bool
    sign: int = -1
    Fc: np.ndarray = field(default=None, repr=False)  # complex coefficient grid [x-degree, y-degree]

    def F_eval(self, x, y):
        return np.polynomial.polynomial.polyval2d(x, y, self.Fc)

    def F_scale(self, x, y):
        return np.polynomial.polynomial.polyval2d(np.abs(x), np.abs(y), np.abs(self.Fc))

    def G1_numeric(self) -> np.ndarray:
        return np.array([complex(c) for c in self.G1])


def _bracket(e, g2) -> dict:
    """(12 y^2 - g2)(x - y) + 16 Pi(y)."""
    pi_y = pu.in_y(pu.from_roots(e))
    lin = pu.bi_mul({(0, 2): 12, (0, 0): -g2}, {(1, 0): 1, (0, 1): -1})
    return pu.bi_add(lin, pu.bi_scale(pi_y, 16))


def build_system(alpha: Sequence[int], source, *, linear_weights: bool = False,
                 printed_sign: bool = False) -> DGSystem:
    """Assemble Pi, P_j, E_j, G1 and F from the branch values.

    `source` is a Lattice or a triple (e1, e2, e3) summing to zero.  Integer or
    Fraction branch values give exact coefficients.

    By default F(x, y) = 4 Pi(x)^2 [(12y^2 - g2)(x - y) + 16 Pi(y)] - (x - y)^3 G1(x),
    the sign for which F(wp(rho1), wp(rho2)) is proportional to the
    transcendental equation; `printed_sign=True` flips the second term.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != 4 or min(alpha) < 0:
        raise ValueError("alpha must be four non-negative integers")
    e = tuple(source.e) if isinstance(source, Lattice) else tuple(source)
    if len(e) != 3:
        raise ValueError("need three branch values")
    exact = all(_is_exact(v) for v in e)
    if exact:
        e = tuple(Fraction(v) for v in e)
        if sum(e) != 0:
            raise ValueError("branch values must sum to zero")
    else:
        e = tuple(complex(v) for v in e)
        if abs(sum(e)) > 1e-8 * max(1.0, max(abs(v) for v in e)):
            raise ValueError("branch values must sum to zero")
    for j in range(3):
        for k in range(j + 1, 3):
            if e[j] == e[k] or (not exact and abs(e[j] - e[k]) < 1e-12 * max(1.0, abs(e[j]))):
                raise ValueError("coincident branch values")

    weights = tuple((2 * a + 1) if linear_weights else (2 * a + 1) ** 2 for a in alpha)
    g2 = 2 * sum(v * v for v in e)
    Pi = pu.from_roots(e)
    Pj, Ej = [], []
    for j in range(3):
        k, l = (j + 1) % 3, (j + 2) % 3
        Pj.append(pu.mul(pu.power([-e[k], 1], 2), pu.power([-e[l], 1], 2)))
        Ej.append((e[j] - e[k]) * (e[j] - e[l]))
    G1 = pu.scale(pu.power(Pi, 2), weights[0])
    for j in range(3):
        G1 = pu.sub(G1, pu.scale(Pj[j], weights[j + 1] * Ej[j]))

    sign = 1 if printed_sign else -1
    first = pu.bi_mul(pu.bi_scale(pu.in_x(pu.power(Pi, 2)), 4), _bracket(e, g2))
    cube = pu.bi_mul(pu.bi_mul({(1, 0): 1, (0, 1): -1}, {(1, 0): 1, (0, 1): -1}), {(1, 0): 1, (0, 1): -1})
    F = pu.bi_add(first, pu.bi_scale(pu.bi_mul(cube, pu.in_x(G1)), sign))

    Fc = np.zeros((10, 4), dtype=complex)
    for (i, j), c in F.items():
        Fc[i, j] = complex(c)
    return DGSystem(alpha, e, g2, weights, Pi, tuple(Pj), tuple(Ej), G1, F, exact, sign, Fc)


def diagonal_restriction(sys: DGSystem) -> list:
    """t -> F(t, t)."""
    return pu.bi_diagonal(sys.F)


def bracket_of_F(sys: DGSystem) -> list:
    """Recover the univariate factor multiplying (x - y)^3 in F.

    Subtracts the 4 Pi(x)^2 [...] part and evaluates the remainder on the
    line y = x - 1, where (x - y)^3 = 1.
    """
    first = pu.bi_mul(pu.bi_scale(pu.in_x(pu.power(sys.Pi, 2)), 4), _bracket(sys.e, sys.g2))
    rest = pu.bi_add(sys.F, pu.bi_scale(first, -1))
    out: list = [0]
    for (i, j), c in rest.items():
        term = pu.mul([0] * i + [c], pu.power([-1, 1], j))
        out = pu.add(out, term)
    return pu.scale(out, sys.sign)


def tangent_cone(sys: DGSystem, j: int) -> dict:
    """Lowest-order homogeneous part of F at (e_j, e_j), keyed by (s, t) exponents."""
    shifted = pu.bi_shift(sys.F, sys.e[j - 1], sys.e[j - 1])
    m = diagonal_multiplicity(sys, j, _shifted=shifted)
    return {k: v for k, v in shifted.items() if sum(k) == m and _nonzero(v, shifted)}


def _nonzero(v, ref: dict) -> bool:
    if _is_exact(v):
        return v != 0
    big = max(abs(complex(c)) for c in ref.values())
    return abs(complex(v)) > 1e-10 * big


def diagonal_multiplicity(sys: DGSystem, j: int, _shifted: dict | None = None) -> int:
    """Order of vanishing of F at (e_j, e_j): the lowest total degree in its Taylor expansion."""
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    shifted = _shifted if _shifted is not None else pu.bi_shift(sys.F, sys.e[j - 1], sys.e[j - 1])
    degs = [sum(k) for k, v in shifted.items() if _nonzero(v, shifted)]
    return min(degs)


# potentials ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PotentialSpec:
    alpha: tuple[int, int, int, int]
    rhos: tuple[complex, ...]
    lattice: Lattice | None
    xs: tuple[complex, ...] = ()
    multiplicity: int = 1

    @property
    def d(self) -> int:
        return len(self.rhos) if self.rhos else len(self.xs)


def _weights(alpha, linear: bool):
    return [(2 * a + 1) if linear else (2 * a + 1) ** 2 for a in alpha]


def _dg_terms(spec: PotentialSpec, l: int, linear: bool) -> list[complex]:
    L = spec.lattice
    r = spec.rhos[l]
    terms = []
    for k, s in enumerate(spec.rhos):
        if k == l:
            continue
        terms.append(8 * complex(wp_prime(r - s, L)))
        terms.append(8 * complex(wp_prime(r + s, L)))
    for w, om in zip(_weights(spec.alpha, linear), L.omegas):
        terms.append(w * complex(wp_prime(r - om, L)))
    return terms


def _dg_jacobian(spec: PotentialSpec, linear: bool) -> np.ndarray:
    L = spec.lattice
    rh = spec.rhos
    d = len(rh)
    J = np.zeros((d, d), dtype=complex)
    w = _weights(spec.alpha, linear)

    def p2(z):
        p = complex(wp(z, L))
        return 6 * p * p - L.g2 / 2

    for l in range(d):
        J[l, l] = sum(wi * p2(rh[l] - om) for wi, om in zip(w, L.omegas))
        for k in range(d):
            if k == l:
                continue
            a, b = p2(rh[l] - rh[k]), p2(rh[l] + rh[k])
            J[l, l] += 8 * (a + b)
            J[l, k] = 8 * (b - a)
    return J


def polish_poles(spec: PotentialSpec, steps: int = 8, *, linear_weights: bool = False) -> PotentialSpec:
    """Newton iteration on the transcendental D-G equations in the poles themselves."""
    rh = np.array(spec.rhos, dtype=complex)
    best, best_res = spec, max(dg_relative_residual(spec, linear_weights=linear_weights), default=0.0)
    for _ in range(steps):
        if best_res < 1e-14:
            break
        cur = PotentialSpec(spec.alpha, tuple(rh), spec.lattice)
        f = np.array(dg_residual(cur, linear_weights=linear_weights))
        try:
            delta = np.linalg.solve(_dg_jacobian(cur, linear_weights), f)
        except np.linalg.LinAlgError:
            break
        rh = rh - delta
        cand = PotentialSpec(spec.alpha, tuple(complex(v) for v in rh), spec.lattice)
        try:
            res = max(dg_relative_residual(cand, linear_weights=linear_weights))
        except ValueError:
            break
        if res < best_res:
            best, best_res = cand, res
        else:
            break
    xs = tuple(complex(wp(r, spec.lattice)) for r in best.rhos)
    return PotentialSpec(spec.alpha, best.rhos, spec.lattice, xs, spec.multiplicity)


def dg_residual(spec: PotentialSpec, *, linear_weights: bool = False) -> list[complex]:
    """Left-hand side of each D-G equation at the poles of `spec`."""
    return [sum(_dg_terms(spec, l, linear_weights)) for l in range(len(spec.rhos))]


def dg_relative_residual(spec: PotentialSpec, *, linear_weights: bool = False) -> list[float]:
    out = []
    for l in range(len(spec.rhos)):
        t = _dg_terms(spec, l, linear_weights)
        out.append(abs(sum(t)) / max(sum(abs(v) for v in t), 1e-300))
    return out


def akm_residual(points: Sequence[complex], L: Lattice) -> list[complex]:
    pts = [complex(p) for p in points]
    out = []
    for i, xi in enumerate(pts):
        out.append(sum(complex(wp_prime(xj - xi, L)) for j, xj in enumerate(pts) if j != i))
    return out


def eval_potential(spec: PotentialSpec, x: complex) -> complex:
    L = spec.lattice
    val = 0j
    for a, om in zip(spec.alpha, L.omegas):
        if a:
            val += a * (a + 1) * complex(wp(x - om, L))
    for r in spec.rhos:
        val += 2 * (complex(wp(x - r, L)) + complex(wp(x + r, L)))
    return val


def potential_degree(spec: PotentialSpec) -> int:
    s = sum(a * (a + 1) for a in spec.alpha)
    if s % 2:
        raise AssertionError("sum of a(a+1) is always even")
    return s // 2 + 2 * spec.d


# solving ------------------------------------------------------------------

def _scale_e(sys: DGSystem) -> float:
    return max(1.0, max(abs(complex(v)) for v in sys.e))


def _near_branch(x: complex, sys: DGSystem, tol: ToleranceConfig) -> bool:
    s = _scale_e(sys)
    return any(abs(x - complex(v)) <= tol.branch_exclusion * s for v in sys.e)


def solve_d1_x(sys: DGSystem, tol: ToleranceConfig = DEFAULT) -> tuple[list[tuple[complex, int]], list[str]]:
    """Roots of G1 off the branch values, clustered, with multiplicities."""
    c = sys.G1_numeric()
    roots, ok = aberth(c, max_iter=tol.aberth_max_iter)
    roots = newton_polish(c, roots)
    warnings = [] if ok else ["Aberth iteration did not fully converge for G1"]
    radius = tol.dedupe_radius * _scale_e(sys)
    out = [(x, m) for x, m in cluster_roots(c, roots, radius, _scale_e(sys)) if not _near_branch(x, sys, tol)]
    out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return out, warnings


def solve_d1(alpha: Sequence[int], L: Lattice, tol: ToleranceConfig | None = None) -> list[PotentialSpec]:
    """One-pole potentials: roots of G1 lifted to poles and polished.

    Raises SolverError (carrying the lifted roots found so far) when the root
    finder does not converge.
    """
    tol = tol or L.tol
    sys = build_system(alpha, L, linear_weights=tol.linear_weights)
    roots, warnings = solve_d1_x(sys, tol)
    specs = []
    for x, m in roots:
        spec = PotentialSpec(sys.alpha, (invert_wp(x, L),), L, (x,), m)
        if m == 1:
            spec = polish_poles(spec, linear_weights=tol.linear_weights)
        specs.append(spec)
    if warnings:
        raise SolverError("; ".join(warnings), partial=specs)
    return specs


@dataclass
class Solution:
    x: complex
    y: complex
    rho1: complex | None = None
    rho2: complex | None = None
    residuals: tuple[float, ...] = ()
    poly_residuals: tuple[float, float] = (0.0, 0.0)
    multiplicity: int = 1

    def to_json(self) -> dict:
        def c(v):
            return None if v is None else [v.real, v.imag]
        return {"x": c(self.x), "y": c(self.y), "rho1": c(self.rho1), "rho2": c(self.rho2),
                "residuals": list(self.residuals), "poly_residuals": list(self.poly_residuals),
                "multiplicity": self.multiplicity}


@dataclass
class SolveReport:
    alpha: tuple[int, int, int, int]
    d: int
    lattice: Lattice | None
    e: tuple
    solutions: list[Solution]
    warnings: list[str] = field(default_factory=list)
    method: str = ""

    @property
    def count(self) -> int:
        return len(self.solutions)

    def specs(self) -> list[PotentialSpec]:
        out = []
        for s in self.solutions:
            rhos = (s.rho1, s.rho2) if s.rho1 is not None else ()
            out.append(PotentialSpec(self.alpha, rhos, self.lattice, (s.x, s.y), s.multiplicity))
        return out

    def to_json(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "d": self.d,
            "lattice": self.lattice.to_json() if self.lattice is not None else None,
            "e": [[complex(v).real, complex(v).imag] for v in self.e],
            "count": self.count,
            "method": self.method,
            "solutions": [s.to_json() for s in self.solutions],
            "warnings": list(self.warnings),
        }


def _sylvester(sys: DGSystem, xs: np.ndarray, Fc: np.ndarray | None = None,
               Gc: np.ndarray | None = None) -> np.ndarray:
    """Sylvester matrices of F(x, .) (cubic) and F(., x) (nonic) at each sample x.

    With `Fc`/`Gc` given, the rows are built from those coefficient grids
    instead, which is how the x-derivative of the matrix is assembled.
    """
    Fc = sys.Fc if Fc is None else Fc
    Gc = sys.Fc if Gc is None else Gc
    xs = np.atleast_1d(xs)
    a = (xs[:, None] ** np.arange(Fc.shape[0])[None, :]) @ Fc  # coefficients of y^j in F(x, y)
    b = (xs[:, None] ** np.arange(Gc.shape[1])[None, :]) @ Gc.T  # coefficients of y^i in F(y, x)
    S = np.zeros((len(xs), 12, 12), dtype=complex)
    ah = a[:, ::-1]
    bh = b[:, ::-1]
    for r in range(9):
        S[:, r, r:r + 4] = ah
    for r in range(3):
        S[:, 9 + r, r:r + 10] = bh
    return S


def _sylvester_dets(sys: DGSystem, xs: np.ndarray) -> np.ndarray:
    """Res_y(F(x, y), F(y, x)) at each sample x."""
    return np.linalg.det(_sylvester(sys, xs))


def _quotient_log_derivative(sys: DGSystem, xs: np.ndarray) -> np.ndarray:
    """d/dx log(Res(x) / Pi(x)^9) via Jacobi's formula tr(S^-1 S')."""
    P = np.polynomial.polynomial
    dFx = np.vstack([P.polyder(sys.Fc, axis=0), np.zeros((1, 4))])
    dFy = np.hstack([P.polyder(sys.Fc, axis=1), np.zeros((10, 1))])
    S = _sylvester(sys, xs)
    # the first block depends on x through the rows of F(x, .), the second through F(., x)
    dS = _sylvester(sys, xs, Fc=dFx, Gc=dFy)
    dS[:, 9:, :] = _sylvester(sys, xs, Fc=sys.Fc, Gc=dFy)[:, 9:, :]
    dS[:, :9, :] = _sylvester(sys, xs, Fc=dFx, Gc=sys.Fc)[:, :9, :]
    try:
        tr = np.trace(np.linalg.solve(S, dS), axis1=1, axis2=2)
    except np.linalg.LinAlgError:
        # an iterate landed exactly on a root; report an infinite log-derivative there
        tr = np.empty(len(S), dtype=complex)
        for i in range(len(S)):
            try:
                tr[i] = np.trace(np.linalg.solve(S[i], dS[i]))
            except np.linalg.LinAlgError:
                tr[i] = np.inf
    xs = np.atleast_1d(xs)
    corr = sum(1.0 / (xs - complex(v)) for v in sys.e)
    return tr - 9 * corr


def resultant_quotient(sys: DGSystem, tol: ToleranceConfig = DEFAULT, radius: float | None = None) -> np.ndarray:
    """Coefficients of Res_y(F(x,y), F(y,x)) / Pi(x)^9, lowest degree first.

    The factor Pi(x)^9 accounts for the three triple points (e_j, e_j), each an
    intersection of multiplicity 9.  Samples lie on a circle, so the
    interpolation is a discrete Fourier transform.  Coefficients far below the
    dominant ones on that circle are at rounding level, so these are used for
    the degree and leading coefficient, not for the roots.
    """
    n = tol.resultant_samples
    R = radius if radius is not None else 1.5 * _scale_e(sys)
    xs = R * np.exp(2j * np.pi * np.arange(n) / n)
    pi = np.prod([xs - complex(v) for v in sys.e], axis=0)
    vals = _sylvester_dets(sys, xs) / pi**9
    coef = np.fft.fft(vals) / n
    big = np.max(np.abs(coef))
    keep = np.nonzero(np.abs(coef) > 1e-9 * big)[0]
    deg = int(keep.max()) if len(keep) else 0
    coef = coef[:deg + 1] / R ** np.arange(deg + 1)
    return coef


def resultant_roots(sys: DGSystem, tol: ToleranceConfig = DEFAULT, seed: int = 0) -> tuple[np.ndarray, bool]:
    """Roots of Res_y(F(x,y), F(y,x)) / Pi(x)^9 by Aberth-Ehrlich iteration.

    The Newton ratio p/p' comes straight from determinant evaluations, so no
    step passes through the badly conditioned monomial coefficients.
    """
    s = _scale_e(sys)
    coef = resultant_quotient(sys, tol, radius=4 * s)
    n = len(coef) - 1
    if n <= 0:
        return np.zeros(0, dtype=complex), True
    # starting circle: geometric mean of root moduli, |p(x0)/lead|^(1/n) around a
    # base point x0 off the branch values
    x0 = 0.37 * s * np.exp(0.4j)
    p0 = _sylvester_dets(sys, np.array([x0]))[0] / np.prod([x0 - complex(v) for v in sys.e]) ** 9
    r0 = abs(p0 / coef[-1]) ** (1.0 / n)
    rng = np.random.default_rng(seed)
    z = x0 + r0 * np.exp(1j * (2 * np.pi * np.arange(n) / n + rng.uniform(0, 1)))
    done = np.zeros(n, dtype=bool)
    prev = np.full(n, np.inf)
    for _ in range(tol.aberth_max_iter):
        act = ~done
        ld = _quotient_log_derivative(sys, z[act])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = 1.0 / ld
        diff = z[act][:, None] - z[None, :]
        diff[np.abs(diff) == 0] = np.inf
        corr = np.sum(1.0 / diff, axis=1)
        w = ratio / (1 - ratio * corr)
        w[~np.isfinite(w)] = 0
        z[act] = z[act] - w
        aw = np.abs(w)
        # near clustered branch values the determinant noise stalls the step
        # well above rounding; the 2-D Newton refinement takes over from there
        stalled = (aw >= 0.5 * prev[act]) & (aw <= 1e-8 * s)
        done[act] = (aw <= 1e-14 * np.maximum(np.abs(z[act]), s)) | stalled
        prev[act] = aw
        if done.all():
            break
    return z, bool(done.all())


def _cubic_in_y(sys: DGSystem, x: complex) -> np.ndarray:
    return (x ** np.arange(10)) @ sys.Fc


def _poly_residuals(sys: DGSystem, x, y) -> tuple[float, float]:
    r1 = abs(sys.F_eval(x, y)) / max(sys.F_scale(x, y), 1e-300)
    r2 = abs(sys.F_eval(y, x)) / max(sys.F_scale(y, x), 1e-300)
    return float(r1), float(r2)


def _newton2(sys: DGSystem, x, y, steps: int = 30):
    """Vectorised Newton iteration for F(x,y) = 0 = F(y,x)."""
    P = np.polynomial.polynomial
    Fx = P.polyder(sys.Fc, axis=0)
    Fy = P.polyder(sys.Fc, axis=1)
    x = np.array(x, dtype=complex)
    y = np.array(y, dtype=complex)
    for _ in range(steps):
        f1 = P.polyval2d(x, y, sys.Fc)
        f2 = P.polyval2d(y, x, sys.Fc)
        a = P.polyval2d(x, y, Fx)
        b = P.polyval2d(x, y, Fy)
        c = P.polyval2d(y, x, Fy)
        d = P.polyval2d(y, x, Fx)
        det = a * d - b * c
        good = np.abs(det) > 0
        det = np.where(good, det, 1)
        dx = np.where(good, (d * f1 - b * f2) / det, 0)
        dy = np.where(good, (a * f2 - c * f1) / det, 0)
        x = x - dx
        y = y - dy
        last = np.where(good, np.abs(dx) + np.abs(dy), np.inf)
        if np.all(last <= 1e-15 * (1 + np.abs(x) + np.abs(y))):
            break
    return x, y, last


def _accept_pairs(sys: DGSystem, xs, ys, steps, tol: ToleranceConfig) -> list[tuple[complex, complex]]:
    """Keep converged, off-diagonal, off-branch points of both curves.

    Newton only converges linearly towards the triple points (e_j, e_j): there
    the last step stays a fixed fraction of the distance to the triple point,
    while at a simple intersection it is many orders smaller.
    """
    s = _scale_e(sys)
    radius = tol.dedupe_radius * s
    out = []
    for x, y, st in zip(np.atleast_1d(xs), np.atleast_1d(ys), np.atleast_1d(steps)):
        x, y = complex(x), complex(y)
        if not (np.isfinite(x) and np.isfinite(y)):
            continue
        triple = min(max(abs(x - complex(v)), abs(y - complex(v))) for v in sys.e)
        if not (st <= 1e-7 * (s + abs(x) + abs(y)) and st <= 1e-4 * triple):
            continue
        if abs(x - y) <= radius or triple <= 1e-4 * s:
            continue
        if _near_branch(x, sys, tol) or _near_branch(y, sys, tol):
            continue
        if max(_poly_residuals(sys, x, y)) > tol.poly_residual_bound:
            continue
        out.append((x, y))
    return out


def _dedupe_pairs(pairs, radius: float) -> list[tuple[complex, complex, int]]:
    def key(v: complex):
        return (round(v.real, 8), round(v.imag, 8))

    normed = []
    for x, y in pairs:
        if key(y) < key(x):
            x, y = y, x
        normed.append((x, y))
    out: list[list] = []
    for x, y in normed:
        for item in out:
            if max(abs(item[0] - x), abs(item[1] - y)) <= radius:
                item[2] += 1
                break
        else:
            out.append([x, y, 1])
    out.sort(key=lambda t: (key(t[0]), key(t[1])))
    # several seeds land on each pair (both x and y are resultant roots), so
    # the hit count says nothing about intersection multiplicity
    return [(a, b, 1) for a, b, _ in out]


def _pairs_from_x_roots(sys: DGSystem, xroots, tol: ToleranceConfig):
    cand_x, cand_y = [], []
    for x in xroots:
        cub = _cubic_in_y(sys, complex(x))
        ys, _ = aberth(cub, max_iter=tol.aberth_max_iter)
        # every branch of the cubic seeds a 2-D Newton run; x may only be
        # approximate where the determinant is poorly resolved
        cand_x.extend([x] * len(ys))
        cand_y.extend(ys)
    if not cand_x:
        return []
    px, py, st = _newton2(sys, cand_x, cand_y, steps=80)
    return _accept_pairs(sys, px, py, st, tol)


def _newton_fallback(sys: DGSystem, tol: ToleranceConfig, seed: int = 0):
    """Multistart 2-D Newton from a grid over a disk covering the branch values."""
    g = tol.newton_grid
    R = 2.0 * _scale_e(sys)
    t = np.linspace(-R, R, g)
    X = (t[None, :] + 1j * t[:, None]).ravel()
    X = X[np.abs(X) <= R]
    cx, cy = [], []
    for x in X:
        ys, _ = aberth(_cubic_in_y(sys, x), max_iter=100, seed=seed)
        cx.extend([x] * len(ys))
        cy.extend(ys)
    px, py, st = _newton2(sys, cx, cy, steps=80)
    return _accept_pairs(sys, px, py, st, tol)


def solve_d2_x(sys: DGSystem, tol: ToleranceConfig = DEFAULT, seed: int = 0,
               expected: int = 27) -> tuple[list[tuple[complex, complex, int]], list[str], str]:
    """All unordered off-diagonal pairs {x, y} with F(x,y) = 0 = F(y,x)."""
    warnings: list[str] = []
    radius = tol.dedupe_radius * _scale_e(sys)
    pairs: list = []
    method = "resultant"
    roots, ok = resultant_roots(sys, tol, seed)
    if not ok:
        warnings.append("Aberth iteration on the resultant did not fully converge")
    pairs = _dedupe_pairs(_pairs_from_x_roots(sys, roots, tol), radius)
    if len(pairs) < expected:
        method = "resultant+newton"
        extra = _newton_fallback(sys, tol, seed)
        pairs = _dedupe_pairs([(a, b) for a, b, _ in pairs] + extra, radius)
    if len(pairs) != expected:
        warnings.append(f"found {len(pairs)} pairs, expected {expected} for generic data")
    if len(pairs) > 27:
        warnings.append("more than 27 pairs: bound violated, check tolerances")
    return pairs, warnings, method


def solve_d2(alpha: Sequence[int], L: Lattice, tol: ToleranceConfig | None = None, seed: int = 0) -> SolveReport:
    tol = tol or L.tol
    sys = build_system(alpha, L, linear_weights=tol.linear_weights)
    pairs, warnings, method = solve_d2_x(sys, tol, seed)
    sols = []
    for x, y, m in pairs:
        spec = PotentialSpec(sys.alpha, (invert_wp(x, L), invert_wp(y, L)), L, (x, y), m)
        if m == 1:
            spec = polish_poles(spec, linear_weights=tol.linear_weights)
        r1, r2 = spec.rhos
        x, y = spec.xs
        res = tuple(dg_relative_residual(spec, linear_weights=tol.linear_weights))
        if max(res) > tol.residual_bound:
            warnings.append(f"D-G residual {max(res):.2e} above bound for pair ({x}, {y})")
        sols.append(Solution(x, y, r1, r2, res, _poly_residuals(sys, x, y), m))
    return SolveReport(sys.alpha, 2, L, sys.e, sols, warnings, method)


def solve_x_only(alpha: Sequence[int], e: Sequence, d: int, tol: ToleranceConfig = DEFAULT, seed: int = 0) -> SolveReport:
    """Solve in x-coordinates only, from branch values; no lifting to poles."""
    sys = build_system(alpha, e, linear_weights=tol.linear_weights)
    warnings = ["branch values given without periods: solutions are not lifted to poles"]
    if d == 0:
        return SolveReport(sys.alpha, 0, None, sys.e, [], warnings, "none")
    if d == 1:
        roots, w = solve_d1_x(sys, tol)
        sols = [Solution(x, x, multiplicity=m) for x, m in roots]
        for s in sols:
            s.y = None
        return SolveReport(sys.alpha, 1, None, sys.e, sols, warnings + w, "aberth")
    if d == 2:
        pairs, w, method = solve_d2_x(sys, tol, seed)
        sols = [Solution(x, y, poly_residuals=_poly_residuals(sys, x, y), multiplicity=m) for x, y, m in pairs]
        return SolveReport(sys.alpha, 2, None, sys.e, sols, warnings + w, method)
    raise ValueError("solving is implemented for d <= 2")


def solve(alpha: Sequence[int], L: Lattice, d: int, tol: ToleranceConfig | None = None, seed: int = 0) -> SolveReport:
    tol = tol or L.tol
    if d == 0:
        return SolveReport(tuple(alpha), 0, L, L.e, [], [], "none")
    if d == 1:
        try:
            specs = solve_d1(alpha, L, tol)
            warnings: list[str] = []
        except SolverError as exc:
            specs, warnings = exc.partial or [], [str(exc)]
        sols = []
        for sp in specs:
            res = tuple(dg_relative_residual(sp, linear_weights=tol.linear_weights))
            if sp.multiplicity == 1 and max(res) > tol.residual_bound:
                warnings.append(f"D-G residual {max(res):.2e} above bound at x={sp.xs[0]}")
            sols.append(Solution(sp.xs[0], None, sp.rhos[0], None, res, (0.0, 0.0), sp.multiplicity))
        return SolveReport(tuple(alpha), 1, L, L.e, sols, warnings, "aberth")
    if d == 2:
        return solve_d2(alpha, L, tol, seed)
    raise ValueError("solving is implemented for d <= 2")
