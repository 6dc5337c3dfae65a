"""p-adic and archimedean valuation analytics for Galois orbits of algebraic numbers."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from . import polys
from .classpoly import certified_roots, hilbert_class_poly
from .errors import BoundaryTie, BoundExceeded, EqualDiscriminants
from .modfunc import ModularRelation, singular_moduli_polys
from .quadforms import Discriminant, as_discriminant, discriminants, is_prime

MAX_TABLE_BOUND = 10**5


@dataclass(frozen=True)
class Place:
    kind: str  # "archimedean" | "finite"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"finite place needs a prime, got {self.p}")
        elif self.kind != "archimedean":
            raise ValueError(f"unknown place kind {self.kind!r}")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls("finite", p)

    @classmethod
    def infinity(cls) -> "Place":
        return cls("archimedean")

    def __str__(self) -> str:
        return "inf" if self.kind == "archimedean" else str(self.p)


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class NewtonPolygon:
    """Segments as (root valuation, number of roots), root valuations increasing.

    ``zero_roots`` counts roots equal to 0 (stripped before the hull is taken).
    """

    segments: Tuple[Tuple[Fraction, int], ...]
    zero_roots: int = 0

    def root_valuations(self) -> List[Fraction]:
        out = []
        for v, n in self.segments:
            out.extend([v] * n)
        return out

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.segments) + self.zero_roots


def newton_polygon(P: Sequence[int], p: int) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)); each edge of slope s carries roots of valuation -s."""
    P = polys.trim(P)
    if not P:
        raise ValueError("Newton polygon of the zero polynomial")
    z = 0
    while P[z] == 0:
        z += 1
    P = P[z:]
    pts = [(i, vp(c, p)) for i, c in enumerate(P) if c]
    hull: List[Tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] when it lies on or above the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y1 - y2, x2 - x1), x2 - x1))
    segs.reverse()
    return NewtonPolygon(tuple(segs), z)


def _beyond_radius(v: Fraction, p: int, r: Fraction) -> bool:
    """True iff p**(-v) < r, decided exactly."""
    # p**(-a/b) < r  <=>  1 < r**b * p**a
    a, b = v.numerator, v.denominator
    lhs = Fraction(r) ** b * Fraction(p) ** a
    return lhs > 1


def conjugates_in_disc(P: Sequence[int], alpha, v: Place, r) -> int:
    """Roots z of P with |z - alpha|_v < r; z = alpha itself is excluded."""
    alpha = Fraction(alpha)
    if r <= 0:
        raise ValueError("radius must be positive")
    shifted = polys.shift_rational(P, alpha)
    if v.kind == "finite":
        r = Fraction(r)
        poly = newton_polygon(shifted, v.p)
        return sum(n for val, n in poly.segments if _beyond_radius(val, v.p, r))
    z = 0
    while shifted[z] == 0:
        z += 1
    shifted = shifted[z:]
    if len(shifted) == 1:
        return 0
    count = 0
    rr = mpmath.mpf(float(r)) if not isinstance(r, Fraction) else mpmath.mpf(r.numerator) / r.denominator
    for mid, rad in certified_roots(shifted, prec=max(128, 4 * len(shifted))):
        d = abs(mid)
        if d + rad < rr:
            count += 1
        elif d - rad < rr:
            raise BoundaryTie(f"root near |z - alpha| = {r} cannot be separated; perturb r")
    return count


@dataclass(frozen=True)
class ValuationProfile:
    D: int
    D0: int
    p: int
    valuations: Tuple[Fraction, ...]

    def counter(self) -> Counter:
        return Counter(self.valuations)


def _difference_poly(D: Discriminant, D0: Discriminant) -> List[int]:
    return polys.composed_difference(hilbert_class_poly(D).as_list(), hilbert_class_poly(D0).as_list())


def pairwise_difference_valuations(D, D0, p: int) -> ValuationProfile:
    """v_p(j - j0) over all conjugate pairs, from the Newton polygon of the composed difference."""
    D, D0 = as_discriminant(D), as_discriminant(D0)
    if D == D0:
        raise EqualDiscriminants("profiles of conjugate differences are not handled")
    poly = newton_polygon(_difference_poly(D, D0), p)
    if poly.zero_roots:
        raise ArithmeticError("distinct discriminants cannot share a singular modulus")
    return ValuationProfile(D.value, D0.value, p, tuple(sorted(poly.root_valuations())))


def approx_ratio(D, D0, p: int) -> float:
    """Empirical constant: max v_p(j - j0) * log p / log |D|."""
    prof = pairwise_difference_valuations(D, D0, p)
    return _ratio(max(prof.valuations), p, prof.D)


def _ratio(top: Fraction, p: int, D: int) -> float:
    return float(top) * math.log(p) / math.log(abs(D)) if top > 0 else 0.0


@dataclass(frozen=True)
class DispersalRow:
    D: int
    orbit_size: int
    in_disc: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.in_disc, self.orbit_size) if self.orbit_size else Fraction(0)


def _orbit_minus_alpha(factors: List[List[int]], alpha: Fraction) -> int:
    total = 0
    for F in factors:
        shifted = polys.shift_rational(F, alpha)
        z = 0
        while shifted[z] == 0:
            z += 1
        total += len(shifted) - 1 - z
    return total


def dispersal_row(rel: ModularRelation, D: Discriminant, alpha, v: Place, r) -> DispersalRow:
    alpha = Fraction(alpha)
    factors = singular_moduli_polys(rel, D)
    count = sum(conjugates_in_disc(F, alpha, v, r) for F in factors)
    return DispersalRow(D.value, _orbit_minus_alpha(factors, alpha), count)


def dispersal_table(
    rel: ModularRelation, alpha, v: Place, r, Dmax: int, *, Dmin: int = 3, only_supersingular: bool = False
) -> List[DispersalRow]:
    """Per-discriminant count of conjugates inside the v-adic disc D_v(alpha, r).

    Conjugates equal to alpha are left out of both the count and the orbit size.
    """
    from .quadforms import reduction_type

    if Dmax > MAX_TABLE_BOUND:
        raise BoundExceeded(f"Dmax = {Dmax} exceeds {MAX_TABLE_BOUND}")
    rows = []
    for D in discriminants(Dmax, Dmin):
        if only_supersingular:
            if v.kind != "finite" or not reduction_type(D, v.p).supersingular:
                continue
        rows.append(dispersal_row(rel, D, alpha, v, r))
    return rows


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatioRow:
    D: int
    max_valuation: Fraction
    ratio: float
    running_max: float
    new_max: bool


def approx_ratio_table(D0, p: int, Dmax: int, *, Dmin: int = 3) -> List[RatioRow]:
    """approx_ratio over every discriminant in range except D0, with the running maximum."""
    D0 = as_discriminant(D0)
    if Dmax > MAX_TABLE_BOUND:
        raise BoundExceeded(f"Dmax = {Dmax} exceeds {MAX_TABLE_BOUND}")
    rows = []
    best = -math.inf
    for D in discriminants(Dmax, Dmin):
        if D == D0:
            continue
        prof = pairwise_difference_valuations(D, D0, p)
        top = max(prof.valuations)
        ratio = _ratio(top, p, D.value)
        new = ratio > best
        best = max(best, ratio)
        rows.append(RatioRow(D.value, top, ratio, best, new))
    return rows
