"""Exact combinatorics of cover types and potential coefficients.

A type is a vector nu in N^4 lying in one of the parity classes

    T_k = {nu : nu_k + 1 = nu_i mod 2 for every i != k}.

Coefficient vectors alpha describe the half-period part
sum alpha_i (alpha_i + 1) wp(x - omega_i) of an even potential.  Everything
here is integer or Fraction arithmetic.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, isqrt
from typing import Iterable, Sequence


class InvariantViolation(ValueError):
    pass


class UnsupportedDepth(ValueError):
    pass


# types ----------------------------------------------------------------------

def parity_class(v: Sequence[int]) -> int | None:
    """The k with v in T_k, or None when v lies in no class."""
    odd = [x % 2 for x in v]
    for k in range(4):
        if all(odd[i] != odd[k] for i in range(4) if i != k):
            return k
    return None


@dataclass(frozen=True)
class TypeVector:
    v: tuple[int, int, int, int]
    k: int = field(default=-1)

    def __post_init__(self):
        v = tuple(int(x) for x in self.v)
        if len(v) != 4 or min(v) < 0:
            raise InvariantViolation(f"type must be four non-negative integers, got {self.v}")
        cls = parity_class(v)
        if cls is None:
            raise InvariantViolation(f"{v} lies in no parity class")
        if self.k not in (-1, cls):
            raise InvariantViolation(f"{v} lies in T_{cls}, not T_{self.k}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "k", cls)

    def __iter__(self):
        return iter(self.v)

    def __getitem__(self, i):
        return self.v[i]

    def __len__(self):
        return 4

    def to_json(self) -> list[int]:
        return list(self.v)


@dataclass(frozen=True)
class AlphaVector:
    a: tuple[int, int, int, int]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if len(a) != 4 or min(a) < 0:
            raise InvariantViolation(f"alpha must be four non-negative integers, got {self.a}")
        object.__setattr__(self, "a", a)

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, i):
        return self.a[i]

    def __len__(self):
        return 4

    def to_json(self) -> list[int]:
        return list(self.a)


def as_type(v) -> TypeVector:
    return v if isinstance(v, TypeVector) else TypeVector(tuple(v))


def as_t0(v) -> TypeVector:
    t = as_type(v)
    if t.k != 0:
        raise InvariantViolation(f"{t.v} is not in T_0")
    return t


def as_alpha(a) -> tuple[int, int, int, int]:
    return AlphaVector(tuple(a)).a


def sq(v: Iterable[int]) -> int:
    return sum(x * x for x in v)


@dataclass(frozen=True)
class MuStats:
    s1: int
    s2: int
    n: int
    g: int
    I0: int
    I1: int

    def __iter__(self):
        return iter((self.s1, self.s2, self.n, self.g, self.I0, self.I1))


def mu_stats(mu) -> MuStats:
    """(mu^(1), mu^(2), n_mu, g_mu, I_0, I_1)."""
    t = as_type(mu).v
    s1, s2 = sum(t), sq(t)
    if s2 % 2 == 0 or s1 % 2 == 0:
        raise InvariantViolation(f"{t}: mu^(1) and mu^(2) must be odd")
    return MuStats(s1, s2, (s2 - 1) // 2, (s1 - 1) // 2, t.count(0), t.count(1))


def degree_of(mu, d: int) -> int:
    if d < 0:
        raise ValueError("depth must be non-negative")
    return mu_stats(as_t0(mu)).n + 2 * d


def t0_types(max_entry: int) -> list[TypeVector]:
    """Every mu in T_0 with all entries <= max_entry, in lexicographic order."""
    r = range(max_entry + 1)
    return [TypeVector(v) for v in product(r, repeat=4) if parity_class(v) == 0]


# C^{j,k} maps ------------------------------------------------------------------

def _half_abs(t: int) -> int:
    # the non-negative a with a(a+1) = t(t+1)
    return (abs(2 * t + 1) - 1) // 2


# half-period labels as points of Z2 x Z2: w1 = (1,0), w3 = (0,1), w2 = w1 + w3
_BITS = (0b00, 0b01, 0b11, 0b10)


def half_period_sum(i: int, k: int) -> int:
    """Index of omega_i + omega_k in {omega_0, ..., omega_3}."""
    return _BITS.index(_BITS[i] ^ _BITS[k])


def c_map(j: int, k: int, mu) -> tuple[int, int, int, int]:
    """alpha = C^{j,k}(mu).

    For k != 0 the coefficients of C^{j,0}(mu) are relabelled by translation
    by omega_k: alpha_i = C^{j,0}(mu) at the index of omega_i + omega_k.
    """
    if j not in (0, 1) or not 0 <= k < 4:
        raise ValueError(f"(j, k) must lie in Z2 x Z4, got {(j, k)}")
    t = as_t0(mu).v
    g = (sum(t) - 1) // 2
    if j == 0:
        base = (g,) + tuple(_half_abs(g - t[0] - t[i]) for i in (1, 2, 3))
    else:
        base = tuple(_half_abs(g - t[i]) for i in range(4))
    return tuple(base[half_period_sum(i, k)] for i in range(4))


JK_PAIRS = tuple((j, k) for j in (0, 1) for k in range(4))


def c_map_inverse(alpha) -> tuple[TypeVector, list[tuple[int, int]]]:
    """The unique mu in T_0 with C^{j,k}(mu) = alpha for some (j, k), and all such (j, k).

    Searches every mu with mu^(2) = sum alpha_i(alpha_i+1) + 1.
    """
    a = as_alpha(alpha)
    target = sum(x * (x + 1) for x in a) + 1
    top = isqrt(target)
    hits: dict[tuple, list] = {}
    for head in product(range(top + 1), repeat=3):
        rest = target - sq(head)
        if rest < 0 or isqrt(rest) ** 2 != rest:
            continue
        v = head + (isqrt(rest),)
        if parity_class(v) != 0:
            continue
        for j, k in JK_PAIRS:
            if c_map(j, k, v) == a:
                hits.setdefault(v, []).append((j, k))
    if len(hits) != 1:
        raise RuntimeError(f"internal error: {len(hits)} preimages of alpha={a}")
    (v, pairs), = hits.items()
    return TypeVector(v), pairs


def msm(alpha) -> tuple[int, int, int]:
    """(M, S, m) = (max, sum, min) of alpha."""
    a = as_alpha(alpha)
    return max(a), sum(a), min(a)


def g_alpha(alpha) -> Fraction:
    M, S, m = msm(alpha)
    sign = 1 + (-1) ** S
    return Fraction(max(Fraction(2 * M), S + 1 - sign * (m + Fraction(1, 2))), 2)


def generic_gap(alpha) -> int:
    """|2M - S + (1 + (-1)^S) m|.

    A value >= 4 forces min mu_i >= 2. The converse only holds for the j = 0
    maps: C^{1,0}(2,3,3,3) = (3,2,2,2) has gap 3.
    """
    M, S, m = msm(alpha)
    return abs(2 * M - S + (1 + (-1) ** S) * m)


# exceptional curves on the del Pezzo side ---------------------------------------

def geiser(mu, nu) -> TypeVector:
    t = as_t0(mu).v
    return TypeVector(tuple(abs(2 * a - b) for a, b in zip(t, as_type(nu).v)))


def exceptional_neighbors(mu) -> list[TypeVector]:
    """All nu in N^4 with (nu - mu)^(2) = 2, sorted."""
    t = as_t0(mu).v
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            for si, sj in product((-1, 1), repeat=2):
                v = list(t)
                v[i] += si
                v[j] += sj
                if min(v) >= 0:
                    out.append(TypeVector(tuple(v)))
    return sorted(out, key=lambda x: x.v)


def geiser_fixed_points(mu) -> list[TypeVector]:
    return [nu for nu in exceptional_neighbors(mu) if geiser(mu, nu) == nu]


def gamma_intersection(nu, sigma) -> Fraction:
    """Intersection number of the exceptional curves of types nu and sigma."""
    a, b = as_type(nu), as_type(sigma)
    d2 = sq(x - y for x, y in zip(a.v, b.v))
    return Fraction(d2 - (4 if a.k == b.k else 2), 4)


# counts --------------------------------------------------------------------------

def severi_count(mu, d: int) -> int:
    """Number of rational curves in |Gamma_mu + d(-K)| for a generic curve, d <= 2."""
    st = mu_stats(as_t0(mu))
    if d == 0:
        return 1
    if d == 1:
        return 6 - 2 * st.I0
    if d == 2:
        return 27 - 14 * st.I0 + 2 * st.I0 ** 2 - 3 * st.I1
    raise UnsupportedDepth(f"unsupported depth d={d}; use recursion_count with explicit base data")


class StandardBase(Mapping):
    """#SV(nu, l) for l in {0, 1} from the closed forms; other depths are missing."""

    def __getitem__(self, key):
        nu, l = key
        if l not in (0, 1):
            raise KeyError(key)
        return severi_count(nu, l)

    def __iter__(self):
        return iter(())

    def __len__(self):
        return 0


STANDARD_POT0 = {0: 1, 1: 6, 2: 27}


def correction_terms(mu, d: int) -> list[tuple[TypeVector, tuple[int, ...], int, int]]:
    """Triples (nu, gamma, l) with nu = mu + 2 gamma, gamma != 0, mu.gamma + gamma^(2) + l = d.

    Each entry carries the binomial weight prod_i C(nu_i, gamma_i).
    """
    t = as_t0(mu).v
    out = []
    for g in product(range(d + 1), repeat=4):
        if not any(g):
            continue
        l = d - sum(a * b for a, b in zip(t, g)) - sq(g)
        if l < 0:
            continue
        nu = TypeVector(tuple(a + 2 * b for a, b in zip(t, g)))
        w = 1
        for a, b in zip(nu.v, g):
            w *= comb(a, b)
        out.append((nu, g, l, w))
    return out


def recursion_count(mu, d: int, base: Mapping | None = None, pot0: Mapping | None = None) -> int:
    """#SV(mu, d) = #Pot(0, d) - sum #SV(nu, l) prod C(nu_i, gamma_i)."""
    base = StandardBase() if base is None else base
    pot0 = STANDARD_POT0 if pot0 is None else pot0
    if d not in pot0:
        raise KeyError(f"missing #Pot(0, {d})")
    total = pot0[d]
    for nu, g, l, w in correction_terms(mu, d):
        try:
            sv = base[(nu, l)]
        except KeyError:
            try:
                sv = base[(nu.v, l)]
            except KeyError:
                raise KeyError(f"missing base entry #SV({nu.v}, {l})") from None
        total -= sv * w
    return total


# spectral data ---------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaChar:
    """Formal divisor c*p + sum of pulled-back half-periods."""

    j: int
    k: int
    coefficient: int
    half_periods: tuple[int, ...]
    n: int

    @property
    def degree(self) -> int:
        return self.coefficient + self.n * len(self.half_periods)


def theta_char(j: int, k: int, n: int, g: int) -> ThetaChar:
    if n < 0 or g < 0:
        raise ValueError("n and g must be non-negative")
    if j == 0:
        return ThetaChar(0, k, g - 1 - 2 * n, (k, 0), n)
    if j == 1:
        return ThetaChar(1, k, g - 1 - n, (k,), n)
    raise ValueError("j must be 0 or 1")


@dataclass(frozen=True)
class ThetaLabel:
    j: int
    k: int
    shifts: str = ""  # e.g. "p1-p over w2", Weierstrass-point shift of xi_{j,k}

    def to_json(self) -> dict:
        return {"j": self.j, "k": self.k, "shifts": self.shifts}


@dataclass(frozen=True)
class SpectralDatum:
    nu: TypeVector
    degree_n: int
    genus_g: int
    theta_label: ThetaLabel
    count: int
    depth: int  # the h with 2n + 1 = nu^(2) + 4h

    def __post_init__(self):
        if 2 * self.degree_n + 1 != sq(self.nu.v) + 4 * self.depth:
            raise InvariantViolation("degree does not match type and depth")
        if 2 * self.genus_g != sum(self.nu.v) - 1:
            raise InvariantViolation("genus does not match type")

    def to_json(self) -> dict:
        return {"nu": self.nu.to_json(), "n": self.degree_n, "g": self.genus_g,
                "theta": self.theta_label.to_json(), "count": self.count}


def _with(t: tuple, updates: dict[int, int]) -> TypeVector:
    v = list(t)
    for i, x in updates.items():
        v[i] = x
    return TypeVector(tuple(v))


def spectral_enumeration(alpha) -> list[SpectralDatum]:
    """Strata of two-pole potentials with coefficients alpha, for a generic curve."""
    mu, pairs = c_map_inverse(alpha)
    j, k = min(pairs)
    st = mu_stats(mu)
    n = st.n + 4
    g = st.g
    t = mu.v
    out = [SpectralDatum(mu, n, g, ThetaLabel(j, k), severi_count(mu, 2), 2)]
    for i in range(4):
        if t[i] == 0:
            nu = _with(t, {i: 2})
            out.append(SpectralDatum(nu, n, g + 1, ThetaLabel(j, k, f"p_l-p over w{i}, l=1,2"),
                                     2 * severi_count(nu, 1), 1))
    for i in range(4):
        if t[i] == 1:
            nu = _with(t, {i: 3})
            out.append(SpectralDatum(nu, n, g + 1, ThetaLabel(j, k, f"p_l-p over w{i}, l=1,2,3"), 3, 0))
    zeros = [i for i in range(4) if t[i] == 0]
    for a in range(len(zeros)):
        for b in range(a + 1, len(zeros)):
            i1, i2 = zeros[a], zeros[b]
            tau = _with(t, {i1: 2, i2: 2})
            out.append(SpectralDatum(tau, n, g + 2,
                                     ThetaLabel(j, k, f"q+q'-2p, q over w{i1}, q' over w{i2}"), 4, 0))
    return out
