"""Imaginary quadratic discriminants and reduced binary quadratic forms."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, List, Tuple

from .errors import BoundExceeded, NotADiscriminant

MAX_ABS_DISCRIMINANT = 10**8


def _squarefree(m: int) -> bool:
    m = abs(m)
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def is_fundamental(n: int) -> bool:
    if n % 4 == 1:
        return _squarefree(n)
    if n % 4 == 0:
        m = n // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, order=True)
class Discriminant:
    value: int
    fundamental: int
    conductor: int

    def __int__(self) -> int:
        return self.value

    def __abs__(self) -> int:
        return -self.value

    def __str__(self) -> str:
        return str(self.value)


def _guard(n: int) -> None:
    if -n > MAX_ABS_DISCRIMINANT:
        raise BoundExceeded(f"|D| = {-n} exceeds the guard {MAX_ABS_DISCRIMINANT}")


@lru_cache(maxsize=None)
def decompose(n: int) -> Discriminant:
    """Split a negative discriminant as fundamental * conductor**2."""
    if not isinstance(n, int) or n >= 0 or n % 4 not in (0, 1):
        raise NotADiscriminant(f"{n} is not a negative discriminant (need n < 0, n = 0 or 1 mod 4)")
    _guard(n)
    f = isqrt(-n)
    while f >= 1:
        if n % (f * f) == 0:
            d = n // (f * f)
            if d % 4 in (0, 1) and is_fundamental(d):
                return Discriminant(n, d, f)
        f -= 1
    raise NotADiscriminant(str(n))  # unreachable for valid n


def as_discriminant(D) -> Discriminant:
    return D if isinstance(D, Discriminant) else decompose(int(D))


def discriminants(dmax: int, dmin: int = 3) -> Iterator[Discriminant]:
    """All discriminants with dmin <= |D| <= dmax, ordered by |D|."""
    for m in range(max(dmin, 3), dmax + 1):
        if (-m) % 4 in (0, 1):
            yield decompose(-m)


_PRIME_DISCRIMINANTS_EVEN = (-4, -8)


def is_prime_discriminant(d) -> bool:
    d = as_discriminant(d)
    if d.conductor != 1:
        return False
    n = d.value
    if n in _PRIME_DISCRIMINANTS_EVEN:
        return True
    return is_prime(-n) and (-n) % 4 == 3


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d/n) for odd n
    a = d % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def act(self, m: Tuple[int, int, int, int]) -> "QuadForm":
        """Form f(px + qy, rx + sy) for the matrix (p q; r s)."""
        p, q, r, s = m
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def reduce(self) -> "QuadForm":
        """The unique reduced form SL(2, Z)-equivalent to a positive definite form."""
        a, b, c = self.a, self.b, self.c
        if a <= 0 or b * b - 4 * a * c >= 0:
            raise ValueError("reduction needs a positive definite form")
        while True:
            if not (-a < b <= a):
                k = (a - b) // (2 * a)
                # b -> b + 2ka lands in (-a, a]
                c = a * k * k + b * k + c
                b = b + 2 * a * k
            if a > c:
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                b = -b
            return QuadForm(a, b, c)


@lru_cache(maxsize=4096)
def _reduced_forms_tuple(n: int) -> Tuple[QuadForm, ...]:
    out = []
    N = -n
    amax = isqrt(N // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b + N) % (4 * a):
                continue
            c = (b * b + N) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    out.sort(key=lambda f: (f.a, f.b))
    return tuple(out)


def reduced_forms(D) -> List[QuadForm]:
    """Reduced primitive positive definite forms of discriminant D, sorted by (a, b)."""
    D = as_discriminant(D)
    return list(_reduced_forms_tuple(D.value))


def class_number(D) -> int:
    return len(_reduced_forms_tuple(as_discriminant(D).value))


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class ReductionType:
    splitting: Splitting
    supersingular: bool


def reduction_type(D, p: int) -> ReductionType:
    """Behaviour of p in Q(sqrt D); supersingular exactly when p does not split."""
    D = as_discriminant(D)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker_symbol(D.fundamental, p)
    kind = {1: Splitting.SPLIT, -1: Splitting.INERT, 0: Splitting.RAMIFIED}[k]
    return ReductionType(kind, kind is not Splitting.SPLIT)
