"""Hecke correspondences on supersingular j-invariants over F_{p^2}."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from . import cache
from .classpoly import hilbert_class_poly
from .errors import BoundExceeded, DoesNotSplit, OrdinaryReduction
from .ffield import Elem, Fp2, field
from .modpoly import MAX_LEVEL, classical_modular_poly, sigma1
from .quadforms import as_discriminant, is_prime, reduction_type

MAX_SS_PRIME = 2000
EXHAUSTIVE_LIMIT = 60  # below this every j in F_{p^2} is point-counted
MAX_CM_DISCRIMINANT = 10**5


@dataclass(frozen=True)
class HeckeDivisor:
    p: int
    entries: Tuple[Tuple[Elem, int], ...]  # canonical order, positive multiplicities

    @classmethod
    def from_mapping(cls, p: int, m: Mapping[Elem, int]) -> "HeckeDivisor":
        items = [(e, int(c)) for e, c in m.items() if c]
        if any(c < 0 for _, c in items):
            raise ValueError("Hecke divisors are effective")
        return cls(p, tuple(sorted(items, key=lambda t: Fp2.key(t[0]))))

    def as_dict(self) -> Dict[Elem, int]:
        return dict(self.entries)

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.entries)

    @property
    def support(self) -> Tuple[Elem, ...]:
        return tuple(e for e, _ in self.entries)

    def to_json(self) -> str:
        return json.dumps(
            {"p": self.p, "entries": [[[a, b], c] for (a, b), c in self.entries]}, separators=(",", ":")
        )


# supersingular locus -------------------------------------------------------


def _np_mul(F: Fp2, a1, b1, a2, b2):
    p = F.p
    bd = b1 * b2 % p
    return (a1 * a2 + bd * F.c0) % p, (a1 * b2 + b1 * a2 + bd * F.c1) % p


def _curve_for_j(F: Fp2, j: Elem) -> Tuple[Elem, Elem]:
    """(A, B) with y^2 = x^3 + A x + B of j-invariant j (p >= 5)."""
    if j == F.zero:
        return F.zero, F.one
    if j == F.elem(1728):
        return F.one, F.zero
    k = F.mul(j, F.inv(F.sub(F.elem(1728), j)))
    return F.mul(F.elem(3), k), F.mul(F.elem(2), k)


class _PointCounter:
    """Vectorized sum of chi(x^3 + A x + B) over x in F_{p^2}."""

    def __init__(self, p: int):
        F = field(p)
        self.F = F
        idx = np.arange(p * p, dtype=np.int64)
        self.xa, self.xb = idx % p, idx // p
        x2a, x2b = _np_mul(F, self.xa, self.xb, self.xa, self.xb)
        self.x3a, self.x3b = _np_mul(F, x2a, x2b, self.xa, self.xb)
        legendre = np.full(p, -1, dtype=np.int64)
        legendre[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
        legendre[0] = 0
        self.legendre = legendre

    def char_sum(self, A: Elem, B: Elem) -> int:
        F, p = self.F, self.F.p
        axa, axb = _np_mul(F, self.xa, self.xb, A[0], A[1])
        ya = (self.x3a + axa + B[0]) % p
        yb = (self.x3b + axb + B[1]) % p
        # z is a square in F_{p^2} exactly when its norm is a square in F_p
        nrm = (ya * ya + F.c1 * ya * yb - F.c0 * yb * yb) % p
        return int(self.legendre[nrm].sum())

    def is_supersingular(self, j: Elem) -> bool:
        A, B = _curve_for_j(self.F, j)
        # #E(F_{p^2}) = p^2 + 1 + char_sum, so the trace is -char_sum
        return self.char_sum(A, B) % self.F.p == 0


def _fp_trace_is_zero(p: int, j: int) -> bool:
    F = field(p)
    A, B = _curve_for_j(F, F.elem(j))
    x = np.arange(p, dtype=np.int64)
    y = (x * x % p * x + A[0] * x + B[0]) % p
    legendre = np.full(p, -1, dtype=np.int64)
    legendre[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    legendre[0] = 0
    return int(legendre[y].sum()) % p == 0


def _mass(p: int, points: Iterable[Elem]) -> Fraction:
    F = field(p)
    total = Fraction(0)
    for j in points:
        if j == F.zero:
            total += Fraction(1, 6)
        elif j == F.elem(1728):
            total += Fraction(1, 4)
        else:
            total += Fraction(1, 2)
    return total


def _exhaustive(p: int) -> List[Elem]:
    counter = _PointCounter(p)
    return [j for j in field(p).elements() if counter.is_supersingular(j)]


def _isogeny_closure(p: int) -> List[Elem]:
    F = field(p)
    counter = _PointCounter(p)
    seeds = [F.elem(j) for j in range(p) if _fp_trace_is_zero(p, j)]
    phi2 = classical_modular_poly(2)
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        j0 = frontier.pop()
        for j1 in _image_roots(F, phi2, j0, 3):
            if j1 not in seen:
                if not counter.is_supersingular(j1):
                    raise ArithmeticError(f"2-isogenous neighbour {j1} of a supersingular point is ordinary")
                seen.add(j1)
                frontier.append(j1)
    return sorted(seen, key=Fp2.key)


def expected_size(p: int) -> int:
    if p in (2, 3):
        return 1
    return p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]


@lru_cache(maxsize=None)
def _ss_cached(p: int) -> Tuple[Elem, ...]:
    path = f"ssset/p{p}.json"
    obj = cache.read_json(path)
    if obj and obj.get("p") == p:
        return tuple((int(a), int(b)) for a, b in obj["points"])
    if p in (2, 3):
        pts = [(0, 0)]  # j = 0 = 1728 is the only supersingular invariant
    elif p <= EXHAUSTIVE_LIMIT:
        pts = _exhaustive(p)
    else:
        pts = _isogeny_closure(p)
    if p >= 5 and _mass(p, pts) != Fraction(p - 1, 24):
        raise ArithmeticError(f"supersingular set at p = {p} fails the mass formula")
    cache.write_json(path, {"p": p, "points": [list(e) for e in pts]})
    return tuple(pts)


def supersingular_set(p: int) -> List[Elem]:
    """Supersingular j-invariants in F_{p^2}, canonically ordered."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_SS_PRIME:
        raise BoundExceeded(f"p = {p} exceeds {MAX_SS_PRIME}")
    return list(_ss_cached(p))


# Hecke images --------------------------------------------------------------


def _specialize(F: Fp2, phi: Dict[Tuple[int, int], int], j0: Elem, deg: int):
    """Phi(X, j0) over F_{p^2}."""
    dy = max(j for _, j in phi)
    powers = [F.one]
    for _ in range(dy):
        powers.append(F.mul(powers[-1], j0))
    coeffs = [F.zero] * (deg + 1)
    for (i, j), c in phi.items():
        c %= F.p
        if c:
            coeffs[i] = F.add(coeffs[i], F.mul((c, 0), powers[j]))
    return coeffs


def _image_roots(F: Fp2, phi, j0: Elem, deg: int) -> Dict[Elem, int]:
    f = _specialize(F, phi, j0, deg)
    roots = F.roots(f)
    if sum(roots.values()) != deg:
        raise DoesNotSplit(f"Phi(X, {j0}) does not split over F_{F.p}^2; seed is not supersingular")
    return roots


def _check_level(n: int, p: int) -> None:
    if n < 1:
        raise ValueError("level must be positive")
    if n % p == 0:
        raise ValueError(f"level {n} is divisible by p = {p}")


def _factor(n: int) -> List[Tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _apply_direct(D: Counter, n: int, p: int) -> Counter:
    F = field(p)
    phi = classical_modular_poly(n)
    deg = sigma1(n)
    out: Counter = Counter()
    for j0, m in D.items():
        if m:
            for j1, k in _image_roots(F, phi, j0, deg).items():
                out[j1] += m * k
    return out


def _apply_prime_power(D: Counter, ell: int, e: int, p: int) -> Counter:
    # T_{l^(k+1)} = T_l T_{l^k} - l T_{l^(k-1)}
    prev, cur = Counter(D), _apply_direct(D, ell, p)
    for _ in range(e - 1):
        nxt = _apply_direct(cur, ell, p)
        nxt.subtract({k: ell * v for k, v in prev.items()})
        prev, cur = cur, nxt
    return cur


def apply_hecke(D: Mapping[Elem, int], n: int, p: int, method: str = "auto") -> Dict[Elem, int]:
    """T_n applied to a divisor; 'direct' uses Phi_n, 'recursive' the prime-power recursion."""
    _check_level(n, p)
    if method == "auto":
        method = "direct" if n <= MAX_LEVEL else "recursive"
    D = Counter(dict(D))
    if n == 1:
        out = D
    elif method == "direct":
        out = _apply_direct(D, n, p)
    elif method == "recursive":
        out = D
        for ell, e in _factor(n):
            out = _apply_prime_power(out, ell, e, p)
    else:
        raise ValueError(f"unknown method {method!r}")
    if any(v < 0 for v in out.values()):
        raise ArithmeticError("negative multiplicity in a Hecke image")
    return {k: v for k, v in out.items() if v}


def hecke_image(j0: Elem, n: int, p: int, method: str = "auto") -> HeckeDivisor:
    """Roots of Phi_n(X, j0) over F_{p^2} with multiplicity."""
    F = field(p)
    j0 = F.elem(*j0)
    return HeckeDivisor.from_mapping(p, apply_hecke({j0: 1}, n, p, method))


def overlap_degree(j0: Elem, q: int, q2: int, p: int) -> int:
    """deg of T_q(j0) restricted to supp T_q(j0) intersect supp T_q2(j0)."""
    if q == q2:
        raise ValueError("overlap needs two distinct levels")
    a = hecke_image(j0, q, p).as_dict()
    b = hecke_image(j0, q2, p).as_dict()
    return sum(m for e, m in a.items() if e in b)


@dataclass(frozen=True)
class OrbitRow:
    n: int
    weights: Tuple[Fraction, ...]  # indexed by the supersingular set
    max_atom: Fraction
    running_max: Fraction  # max atom over all rows up to this level


@dataclass(frozen=True)
class OrbitMeasure:
    p: int
    j0: Elem
    points: Tuple[Elem, ...]
    rows: Tuple[OrbitRow, ...]

    def max_atom_between(self, lo: int, hi: int) -> Fraction:
        vals = [r.max_atom for r in self.rows if lo <= r.n <= hi]
        if not vals:
            raise ValueError(f"no levels in [{lo}, {hi}]")
        return max(vals)


def hecke_orbit_measure(j0: Elem, N: int, p: int) -> OrbitMeasure:
    """Normalized T_n(j0) for every n <= N prime to p, as exact probability vectors."""
    F = field(p)
    j0 = F.elem(*j0)
    points = tuple(supersingular_set(p))
    index = {e: i for i, e in enumerate(points)}
    if j0 not in index:
        raise DoesNotSplit(f"{j0} is not supersingular at p = {p}")
    rows = []
    running = Fraction(0)
    for n in range(1, N + 1):
        if n % p == 0:
            continue
        D = hecke_image(j0, n, p)
        s = sigma1(n)
        w = [Fraction(0)] * len(points)
        for e, m in D.entries:
            w[index[e]] = Fraction(m, s)
        atom = max(w)
        running = max(running, atom)
        rows.append(OrbitRow(n, tuple(w), atom, running))
    return OrbitMeasure(p, j0, points, tuple(rows))


def cm_reduction_divisor(D, p: int) -> HeckeDivisor:
    """Reduction of the roots of H_D modulo a prime above p, over F_{p^2}."""
    D = as_discriminant(D)
    if abs(D.value) > MAX_CM_DISCRIMINANT:
        raise BoundExceeded(f"|D| = {abs(D.value)} exceeds {MAX_CM_DISCRIMINANT}")
    if not reduction_type(D, p).supersingular:
        raise OrdinaryReduction(f"p = {p} splits in the order of discriminant {D.value}")
    F = field(p)
    H = F.from_int_poly(hilbert_class_poly(D).as_list())
    roots = F.roots(H)
    if sum(roots.values()) != len(H) - 1:
        raise DoesNotSplit(f"H_{D.value} does not split over F_{p}^2")
    return HeckeDivisor.from_mapping(p, roots)
