"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration)."""

from __future__ import annotations

import numpy as np


def _initial_guesses(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Starting points on circles whose radii come from the Newton polygon of |c|.

    c holds coefficients lowest degree first and has nonzero ends.
    """
    n = len(c) - 1
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(c))
    # upper convex hull of (k, log|c_k|)
    hull: list[int] = []
    for k in range(n + 1):
        if not np.isfinite(logs[k]):
            continue
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    out = []
    for i, j in zip(hull[:-1], hull[1:]):
        m = j - i
        r = np.exp((logs[i] - logs[j]) / m)
        theta = 2 * np.pi * np.arange(m) / m + 2 * np.pi * i / n + rng.uniform(0, 0.5)
        out.append(r * np.exp(1j * theta))
    return np.concatenate(out)


def aberth(coeffs, max_iter: int = 500, tol: float = 1e-15, seed: int = 0) -> tuple[np.ndarray, bool]:
    """All roots of sum coeffs[k] x^k.

    Returns (roots, converged).  Zero roots from vanishing low coefficients
    are split off before iterating.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) <= 1:
        return np.zeros(0, dtype=complex), True
    nz = 0
    while c[nz] == 0:
        nz += 1
    c = c[nz:]
    n = len(c) - 1
    if n == 0:
        return np.zeros(nz, dtype=complex), True
    dc = c[1:] * np.arange(1, n + 1)
    rng = np.random.default_rng(seed)
    z = _initial_guesses(c, rng)
    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        p = np.polynomial.polynomial.polyval(z, c)
        dp = np.polynomial.polynomial.polyval(z, dc)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0
        w = ratio / (1 - ratio * s)
        w[done] = 0
        w[~np.isfinite(w)] = 0
        z = z - w
        # backward-error stopping rule: |p(z)| within rounding of the evaluation
        absz = np.abs(z)
        bound = np.polynomial.polynomial.polyval(absz, np.abs(c))
        pz = np.abs(np.polynomial.polynomial.polyval(z, c))
        done |= (pz <= 8 * n * np.finfo(float).eps * bound) | (np.abs(w) <= tol * np.maximum(absz, 1e-300))
        if done.all():
            break
    roots = np.concatenate([np.zeros(nz, dtype=complex), z])
    return roots, bool(done.all())


def newton_polish(coeffs, roots, steps: int = 3) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    dc = np.polynomial.polynomial.polyder(c)
    z = np.array(roots, dtype=complex)
    for _ in range(steps):
        p = np.polynomial.polynomial.polyval(z, c)
        dp = np.polynomial.polynomial.polyval(z, dc)
        ok = dp != 0
        step = np.where(ok, p / np.where(ok, dp, 1), 0)
        z = z - step
    return z


def cluster(points, radius: float) -> list[tuple[complex, int]]:
    """Greedy clustering; returns (mean, size) per cluster in input order."""
    pts = [complex(p) for p in points]
    used = [False] * len(pts)
    out = []
    for i, p in enumerate(pts):
        if used[i]:
            continue
        members = [p]
        used[i] = True
        for j in range(i + 1, len(pts)):
            if not used[j] and abs(pts[j] - p) <= radius:
                used[j] = True
                members.append(pts[j])
        out.append((complex(np.mean(members)), len(members)))
    return out


def _vanishes_to_order(c: np.ndarray, z: complex, m: int, tol: float) -> bool:
    """p, p', ..., p^(m-1) all negligible near z, relative to the coefficient size.

    z is first polished as a simple root of p^(m-1).
    """
    P = np.polynomial.polynomial
    top = P.polyder(c, m - 1)
    dtop = P.polyder(top)
    for _ in range(3):
        den = P.polyval(z, dtop)
        if den == 0:
            break
        z = z - P.polyval(z, top) / den
    rad = max(1.0, abs(z))
    d = c
    for _ in range(m):
        if abs(P.polyval(z, d)) > tol * max(P.polyval(rad, np.abs(d)), 1e-300):
            return False
        d = P.polyder(d)
    return True


def cluster_roots(coeffs, roots, radius: float, scale: float = 1.0,
                  tol: float = 1e-8) -> list[tuple[complex, int]]:
    """Cluster computed roots, recognising multiple roots.

    An m-fold root perturbed at rounding level splits into m roots spread over
    about (1e3 eps)^(1/m), which beats `radius` once m >= 3.  A root and its
    m - 1 nearest neighbours are merged when they fit that window and their
    centroid, polished, is a root of p, ..., p^(m-1).  The largest
    such m wins; anything left over falls back to plain clustering.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    pts = [complex(p) for p in roots]
    used = [False] * len(pts)
    out = []
    for i, p in enumerate(pts):
        if used[i]:
            continue
        near = sorted((j for j in range(len(pts)) if j != i and not used[j]), key=lambda j: abs(pts[j] - p))
        for m in range(len(near) + 1, 1, -1):
            group = [i] + near[:m - 1]
            centre = complex(np.mean([pts[j] for j in group]))
            window = max(radius, scale * (1e3 * np.finfo(float).eps) ** (1.0 / m))
            if max(abs(pts[j] - centre) for j in group) > window:
                continue
            if _vanishes_to_order(c, centre, m, tol):
                for j in group:
                    used[j] = True
                out.append((centre, m))
                break
    rest = [p for p, u in zip(pts, used) if not u]
    return out + cluster(rest, radius)
