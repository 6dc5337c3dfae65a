"""Arithmetic in F_{p^2} and univariate polynomials over it.

F_{p^2} = F_p[x]/(x^2 - s) for the least quadratic non-residue s when p is odd,
and F_2[x]/(x^2 + x + 1) when p = 2.  Elements are pairs (a, b) meaning a + b x.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

Elem = Tuple[int, int]
FPoly = List[Elem]  # constant term first


def _least_nonresidue(p: int) -> int:
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise ValueError(f"no non-residue mod {p}")


class Fp2:
    def __init__(self, p: int):
        self.p = p
        if p == 2:
            self.c0, self.c1 = 1, 1  # x^2 = x + 1
        else:
            self.c0, self.c1 = _least_nonresidue(p), 0  # x^2 = s
        self.q = p * p
        self.zero: Elem = (0, 0)
        self.one: Elem = (1, 0)

    def __repr__(self) -> str:
        return f"Fp2(p={self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Fp2) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Fp2", self.p))

    # element arithmetic
    def elem(self, a: int, b: int = 0) -> Elem:
        return (a % self.p, b % self.p)

    def add(self, x: Elem, y: Elem) -> Elem:
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x: Elem, y: Elem) -> Elem:
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x: Elem) -> Elem:
        p = self.p
        return (-x[0] % p, -x[1] % p)

    def mul(self, x: Elem, y: Elem) -> Elem:
        p = self.p
        a, b = x
        c, d = y
        bd = b * d
        return ((a * c + bd * self.c0) % p, (a * d + b * c + bd * self.c1) % p)

    def norm(self, x: Elem) -> int:
        # x * conj(x); conj(a + b x) = a + b x^p
        a, b = x
        return (a * a + self.c1 * a * b - self.c0 * b * b) % self.p

    def inv(self, x: Elem) -> Elem:
        if x == self.zero:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        a, b = x
        n = pow(self.norm(x), -1, self.p)
        # conj(a + b x) = (a + c1 b) - b x
        return ((a + self.c1 * b) * n % self.p, -b * n % self.p)

    def pow(self, x: Elem, e: int) -> Elem:
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def elements(self) -> List[Elem]:
        return sorted(((a, b) for a in range(self.p) for b in range(self.p)), key=self.key)

    @staticmethod
    def key(x: Elem) -> Tuple[int, int]:
        """Canonical order: F_p first (by value), then by the x-coordinate."""
        return (x[1], x[0])

    def is_in_prime_field(self, x: Elem) -> bool:
        return x[1] == 0

    # polynomials
    def ptrim(self, f: FPoly) -> FPoly:
        f = list(f)
        while f and f[-1] == self.zero:
            f.pop()
        return f

    def from_int_poly(self, f: Sequence[int]) -> FPoly:
        return self.ptrim([(c % self.p, 0) for c in f])

    def pmul(self, f: FPoly, g: FPoly) -> FPoly:
        if not f or not g:
            return []
        out = [self.zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == self.zero:
                continue
            for j, b in enumerate(g):
                out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.ptrim(out)

    def psub(self, f: FPoly, g: FPoly) -> FPoly:
        n = max(len(f), len(g))
        f = list(f) + [self.zero] * (n - len(f))
        g = list(g) + [self.zero] * (n - len(g))
        return self.ptrim([self.sub(a, b) for a, b in zip(f, g)])

    def pdivmod(self, f: FPoly, g: FPoly) -> Tuple[FPoly, FPoly]:
        g = self.ptrim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        r = self.ptrim(f)
        dg = len(g) - 1
        if len(r) - 1 < dg:
            return [], r
        inv_lead = self.inv(g[-1])
        qt = [self.zero] * (len(r) - dg)
        r = list(r)
        for i in range(len(r) - 1, dg - 1, -1):
            c = r[i]
            if c == self.zero:
                continue
            c = self.mul(c, inv_lead)
            qt[i - dg] = c
            for k in range(dg + 1):
                r[i - dg + k] = self.sub(r[i - dg + k], self.mul(c, g[k]))
        return self.ptrim(qt), self.ptrim(r[:dg])

    def pmod(self, f: FPoly, g: FPoly) -> FPoly:
        return self.pdivmod(f, g)[1]

    def monic(self, f: FPoly) -> FPoly:
        f = self.ptrim(f)
        if not f:
            return f
        c = self.inv(f[-1])
        return [self.mul(c, a) for a in f]

    def pgcd(self, f: FPoly, g: FPoly) -> FPoly:
        f, g = self.ptrim(f), self.ptrim(g)
        while g:
            f, g = g, self.pmod(f, g)
        return self.monic(f)

    def ppowmod(self, base: FPoly, e: int, mod: FPoly) -> FPoly:
        out: FPoly = [self.one]
        base = self.pmod(base, mod)
        while e:
            if e & 1:
                out = self.pmod(self.pmul(out, base), mod)
            base = self.pmod(self.pmul(base, base), mod)
            e >>= 1
        return out

    def peval(self, f: FPoly, x: Elem) -> Elem:
        acc = self.zero
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def _split_linear(self, g: FPoly, rng: random.Random) -> List[Elem]:
        """Roots of a monic squarefree g that splits into linear factors."""
        d = len(g) - 1
        if d == 0:
            return []
        if d == 1:
            return [self.neg(g[0])]
        if self.p == 2:
            return [x for x in self.elements() if self.peval(g, x) == self.zero]
        e = (self.q - 1) // 2
        while True:
            delta = (rng.randrange(self.p), rng.randrange(self.p))
            h = self.ppowmod([delta, self.one], e, g)
            h = self.psub(h, [self.one])
            h = self.pgcd(g, h)
            if 0 < len(h) - 1 < d:
                other, rem = self.pdivmod(g, h)
                assert not rem
                return self._split_linear(h, rng) + self._split_linear(self.monic(other), rng)

    def roots(self, f: FPoly) -> Dict[Elem, int]:
        """Roots of f in F_{p^2} with multiplicity."""
        f = self.monic(f)
        if not f:
            raise ValueError("roots of the zero polynomial")
        xq = self.ppowmod([self.zero, self.one], self.q, f) if len(f) > 1 else []
        g = self.pgcd(f, self.psub(xq, [self.zero, self.one]))
        rng = random.Random(0x5EED ^ self.p)
        out: Dict[Elem, int] = {}
        for r in self._split_linear(g, rng):
            m = 0
            lin = [self.neg(r), self.one]
            cur = f
            while True:
                qt, rem = self.pdivmod(cur, lin)
                if rem:
                    break
                m += 1
                cur = qt
            out[r] = m
        return out


@lru_cache(maxsize=None)
def field(p: int) -> Fp2:
    return Fp2(p)


def parse_elem(text: str, p: int) -> Elem:
    """'a' or 'a,b' (meaning a + b x) to a canonical element."""
    parts = [s.strip() for s in str(text).split(",")]
    if len(parts) == 1:
        return field(p).elem(int(parts[0]))
    if len(parts) == 2:
        return field(p).elem(int(parts[0]), int(parts[1]))
    raise ValueError(f"cannot parse F_{p}^2 element {text!r}")
