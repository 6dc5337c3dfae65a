"""Bivariate modular relations between j and a Hauptmodul.

A relation Phi(X, Y) has X standing for j and Y for the Hauptmodul f.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Tuple

from . import polys
from .classpoly import AlgebraicNumber, hilbert_class_poly
from .errors import UnknownRelation
from .polys import BiPoly, Poly
from .quadforms import as_discriminant


@dataclass(frozen=True)
class ModularRelation:
    name: str
    terms: Tuple[Tuple[int, int, int], ...]  # (i, j, coeff) for coeff * X**i * Y**j

    @classmethod
    def from_bipoly(cls, name: str, phi: BiPoly) -> "ModularRelation":
        phi = polys.bi_trim(phi)
        if not phi:
            raise ValueError("relation polynomial is zero")
        return cls(name, tuple(sorted((i, j, c) for (i, j), c in phi.items())))

    @property
    def phi(self) -> BiPoly:
        return {(i, j): c for i, j, c in self.terms}

    @property
    def deg_x(self) -> int:
        return polys.bi_degrees(self.phi)[0]

    @property
    def deg_y(self) -> int:
        return polys.bi_degrees(self.phi)[1]

    def __call__(self, x, y):
        return polys.bi_eval(self.phi, x, y)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "deg_x": self.deg_x,
                "deg_y": self.deg_y,
                "terms": [[i, j, str(c)] for i, j, c in self.terms],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ModularRelation":
        obj = json.loads(text)
        phi = {}
        for i, j, c in obj["terms"]:
            phi[(int(i), int(j))] = phi.get((int(i), int(j)), 0) + int(c)
        rel = cls.from_bipoly(obj["name"], phi)
        if (rel.deg_x, rel.deg_y) != (obj["deg_x"], obj["deg_y"]):
            raise ValueError("declared degrees do not match the terms")
        return rel


def _from_y_polys(a: Poly, b: Poly) -> BiPoly:
    """Phi = a(Y) - X * b(Y)."""
    phi: BiPoly = {}
    for j, c in enumerate(a):
        if c:
            phi[(0, j)] = c
    for j, c in enumerate(b):
        if c:
            phi[(1, j)] = -c
    return phi


def _weber(sign: int) -> BiPoly:
    y24 = [0] * 24 + [1]
    a = polys.pow_(polys.add(y24, [16 * sign]), 3)
    return _from_y_polys(a, y24)


def _lambda() -> BiPoly:
    a = polys.scale(polys.pow_([1, -1, 1], 3), 256)
    b = polys.mul([0, 0, 1], polys.pow_([1, -1], 2))
    return _from_y_polys(a, b)


_BUILDERS = {
    "weber_minus": lambda: _weber(-1),
    "weber_plus": lambda: _weber(1),
    "lambda": _lambda,
    "identity": lambda: {(1, 0): 1, (0, 1): -1},
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_relation(name: str) -> ModularRelation:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise UnknownRelation(f"unknown relation {name!r}; expected one of {BUILTIN_NAMES}") from None
    return ModularRelation.from_bipoly(name, build())


def is_irreducible_relation(rel: ModularRelation) -> bool:
    """Irreducibility over Q and dependence on both variables."""
    if rel.deg_x == 0 or rel.deg_y == 0:
        return False
    return polys.bi_is_irreducible(rel.phi)


def omitted_values(rel: ModularRelation) -> List[AlgebraicNumber]:
    """Values alpha with Phi(X, alpha) constant, as algebraic numbers over Q."""
    cx = polys.bi_coeffs_in_x(rel.phi)
    positive = [c for c in cx[1:] if c]
    if not positive:
        raise ValueError("relation does not depend on X")
    g = polys.to_flint(positive[0])
    for c in positive[1:]:
        g = g.gcd(polys.to_flint(c))
    g = polys.from_flint(g)
    if len(g) <= 1:
        return []
    out = []
    for f in polys.distinct_factors(g):
        out.append(AlgebraicNumber(tuple(f)))
    return out


def is_modular_unit(rel: ModularRelation) -> bool:
    """Y-leading and Y-constant coefficients of Phi are free of X."""
    cy = polys.bi_coeffs_in_y(rel.phi)
    lead_c, const_c = cy[-1], cy[0]
    return len(lead_c) <= 1 and len(const_c) <= 1 and bool(const_c)


def hauptmodul_resultant(rel: ModularRelation, D) -> Poly:
    """R(Y) = Res_X(H_D(X), Phi(X, Y)), exact."""
    H = hilbert_class_poly(as_discriminant(D)).as_list()
    if rel.deg_x == 1:
        # Phi = a(Y) + X b(Y): Res_X(H, Phi) = (-1)**h * sum_k c_k (-a)**k b**(h-k)
        cx = polys.bi_coeffs_in_x(rel.phi)
        a, b = cx[0], cx[1]
        h = len(H) - 1
        neg_a = [-c for c in a]
        out: Poly = []
        apow: Poly = [1]
        bpows = [[1]]
        for _ in range(h):
            bpows.append(polys.mul(bpows[-1], b))
        for k, c in enumerate(H):
            if c:
                out = polys.add(out, polys.scale(polys.mul(apow, bpows[h - k]), c))
            apow = polys.mul(apow, neg_a)
        return polys.scale(out, -1) if h % 2 else out
    return polys.resultant_in_x(H, rel.phi)


def singular_moduli_polys(rel: ModularRelation, D) -> List[Poly]:
    """Irreducible primitive polynomials whose roots are the f-singular moduli over discriminant D."""
    r = hauptmodul_resultant(rel, D)
    return polys.distinct_factors(r)
