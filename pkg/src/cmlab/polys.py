"""Exact integer polynomial helpers.

Univariate polynomials are lists of Python ints, constant term first, with no
trailing zeros (the zero polynomial is ``[]``).  Bivariate polynomials are
dicts mapping ``(i, j)`` to the coefficient of ``X**i * Y**j``.

Heavy lifting (factorization over Q, bivariate resultants) is delegated to
FLINT; the pure-Python subresultant here serves small inputs and tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import comb, gcd
from typing import Dict, Iterable, List, Sequence, Tuple

import flint

Poly = List[int]
BiPoly = Dict[Tuple[int, int], int]


def trim(p: Iterable) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(p) - 1 if p else -1


def lead(p: Sequence):
    return p[-1]


def peval(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: Sequence, q: Sequence) -> list:
    return add(p, [-c for c in q])


def mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p: Sequence, c) -> list:
    return trim([c * a for a in p])


def pow_(p: Sequence, k: int) -> list:
    out: list = [1]
    base = list(p)
    while k:
        if k & 1:
            out = mul(out, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return out


def content(p: Sequence[int]) -> int:
    return reduce(gcd, p, 0)


def primitive(p: Sequence[int]) -> Poly:
    """Content-1 representative with positive leading coefficient."""
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has no primitive part")
    g = content(p)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def taylor_shift(p: Sequence, c) -> list:
    """Coefficients of ``p(X + c)``."""
    n = len(p)
    out = [0 * c] * n
    for k in range(n):
        if p[k] == 0:
            continue
        ck = 1
        for i in range(k, -1, -1):
            # term: p[k] * C(k, i) * c**(k-i) * X**i
            out[i] += p[k] * comb(k, i) * ck
            ck *= c
    return trim(out)


def shift_rational(p: Sequence[int], alpha: Fraction) -> Poly:
    """Integer polynomial with roots ``{root - alpha}`` for roots of ``p``."""
    alpha = Fraction(alpha)
    u, w = alpha.numerator, alpha.denominator
    n = degree(p)
    # w**n * p(X + u/w) written with integer arithmetic: p evaluated at (w X + u)/w
    q = taylor_shift([Fraction(a) for a in p], Fraction(u, w))
    return primitive([int(c * w**n) for c in q])


def divmod_exact(p: Sequence, q: Sequence) -> Tuple[list, list]:
    """Polynomial long division over the field of the coefficients."""
    p = [Fraction(a) for a in p]
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    out = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lq = Fraction(q[-1])
    while len(p) >= len(q) and p:
        k = len(p) - len(q)
        c = p[-1] / lq
        out[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = trim(p)
    return out, p


def pseudo_rem(f: Sequence[int], g: Sequence[int]) -> List[int]:
    """lead(g)**(deg f - deg g + 1) * f mod g, computed in Z[X]."""
    f, g = trim(f), trim(g)
    delta = len(f) - len(g)
    if delta < 0:
        return list(f)
    lg = g[-1]
    f = [a * lg ** (delta + 1) for a in f]
    dg = len(g) - 1
    while f and len(f) - 1 >= dg:
        k = len(f) - 1 - dg
        c = f[-1] // lg
        for i, b in enumerate(g):
            f[i + k] -= c * b
        f = trim(f)
    return f


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) = lead(f)**deg(g) * prod g(root of f), by the subresultant PRS."""
    A, B = trim(f), trim(g)
    if not A or not B:
        return 0
    if len(A) == 1:
        return A[0] ** (len(B) - 1)
    if len(B) == 1:
        return B[0] ** (len(A) - 1)
    ca, cb = content(A), content(B)
    A = [c // ca for c in A]
    B = [c // cb for c in B]
    t = ca ** (len(B) - 1) * cb ** (len(A) - 1)
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 and (len(B) - 1) % 2:
            s = -1
    g_, h = 1, 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = pseudo_rem(A, B)
        if not R:
            return 0
        A = B
        B = [c // (g_ * h**delta) for c in R]
        g_ = A[-1]
        if delta:
            h = g_**delta // h ** (delta - 1)
        if len(B) == 1:
            break
    da = len(A) - 1
    h = B[-1] ** da // h ** (da - 1)
    return s * t * h


def resultant_flint(f: Sequence[int], g: Sequence[int]) -> int:
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    return int(flint.fmpz_poly(list(f)).resultant(flint.fmpz_poly(list(g))))


def to_flint(p: Sequence[int]) -> "flint.fmpz_poly":
    return flint.fmpz_poly([int(c) for c in p])


def from_flint(p) -> Poly:
    return trim(int(c) for c in p.coeffs())


def factor(p: Sequence[int]) -> List[Tuple[Poly, int]]:
    """Irreducible factors over Q as (primitive factor, multiplicity), sorted."""
    p = trim(p)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    if len(p) == 1:
        return []
    _, facs = to_flint(p).factor()
    out = [(primitive(from_flint(g)), int(e)) for g, e in facs]
    back = flint.fmpz_poly([1])
    for g, e in out:
        back *= to_flint(g) ** e
    if primitive(from_flint(back)) != primitive(p):
        raise ArithmeticError("factorization does not multiply back to its input")
    out.sort(key=lambda fe: (len(fe[0]), [abs(c) for c in reversed(fe[0])], fe[0]))
    return out


def distinct_factors(p: Sequence[int]) -> List[Poly]:
    return [f for f, _ in factor(p)]


def is_irreducible(p: Sequence[int]) -> bool:
    facs = factor(p)
    return len(facs) == 1 and facs[0][1] == 1


# --- bivariate -------------------------------------------------------------

_CTX = flint.fmpz_mpoly_ctx.get(("X", "Y"), "lex")


def bi_trim(phi: BiPoly) -> BiPoly:
    return {k: v for k, v in phi.items() if v}


def bi_degrees(phi: BiPoly) -> Tuple[int, int]:
    return (max((i for i, _ in phi), default=0), max((j for _, j in phi), default=0))


def bi_eval(phi: BiPoly, x, y):
    return sum(c * x**i * y**j for (i, j), c in phi.items())


def bi_coeffs_in_x(phi: BiPoly) -> List[Poly]:
    """[c_0(Y), c_1(Y), ...] with phi = sum c_i(Y) X**i."""
    dx, dy = bi_degrees(phi)
    out = [[0] * (dy + 1) for _ in range(dx + 1)]
    for (i, j), c in phi.items():
        out[i][j] += c
    return [trim(c) for c in out]


def bi_coeffs_in_y(phi: BiPoly) -> List[Poly]:
    return bi_coeffs_in_x({(j, i): c for (i, j), c in phi.items()})


def bi_specialize_y(phi: BiPoly, y: int) -> Poly:
    """phi(X, y) for an integer y."""
    dx, _ = bi_degrees(phi)
    out = [0] * (dx + 1)
    for (i, j), c in phi.items():
        out[i] += c * y**j
    return trim(out)


def _to_mpoly(phi: BiPoly):
    return _CTX.from_dict({(i, j): int(c) for (i, j), c in phi.items() if c})


def _univariate_from_mpoly(m, var_index: int) -> Poly:
    terms = m.to_dict()
    if not terms:
        return []
    n = max(k[var_index] for k in terms)
    out = [0] * (n + 1)
    for k, c in terms.items():
        out[k[var_index]] += int(c)
    return trim(out)


def resultant_in_x(h: Sequence[int], phi: BiPoly) -> Poly:
    """Res_X(h(X), phi(X, Y)) as a polynomial in Y."""
    hm = _to_mpoly({(i, 0): c for i, c in enumerate(h) if c})
    r = hm.resultant(_to_mpoly(phi), "X")
    return _univariate_from_mpoly(r, 1)


def composed_difference(p: Sequence[int], q: Sequence[int]) -> Poly:
    """Res_Y(q(Y), p(T + Y)) in T; its roots are alpha - beta with p(alpha) = q(beta) = 0."""
    X, Y = _CTX.gens()
    qm = _CTX.from_dict({(0, j): int(c) for j, c in enumerate(q) if c})
    s = X + Y
    pm = _CTX.from_dict({})
    for c in reversed(list(p)):
        pm = pm * s + int(c)
    r = qm.resultant(pm, "Y")
    return _univariate_from_mpoly(r, 0)


def bi_is_irreducible(phi: BiPoly) -> bool:
    _, facs = _to_mpoly(phi).factor()
    total = sum(int(e) for _, e in facs)
    return total == 1
