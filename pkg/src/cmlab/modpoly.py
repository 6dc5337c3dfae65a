"""Modular polynomials Phi_n(X, Y) for the full Hecke correspondence T_n.

Phi_n(X, j(tau)) = prod (X - j((a tau + b) / d)) over all a d = n, 0 <= b < d,
i.e. over all sigma_1(n) sublattices of index n.  This is the product of the
classical (cyclic) modular polynomials Phi_{n/m^2} over m^2 | n.

Each X-coefficient is a polynomial in j of degree <= sigma_1(n), so it is pinned
down by its q-expansion from q^-sigma to q^0.  Those Laurent coefficients are
integers; we recover them by sampling on the circle |q| = exp(-2 pi y) and
taking a discrete Fourier transform, round with certification, then peel off
powers of the exact integer expansion of j.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import List, Tuple

import flint

from . import cache
from .errors import BoundExceeded, PrecisionInsufficient
from .polys import BiPoly
from .quadforms import is_prime

MAX_LEVEL = 20
MAX_PRIME_LEVEL = 60  # prime levels beyond MAX_LEVEL feed the Hecke recursion


def sigma1(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def sublattices(n: int) -> List[Tuple[int, int, int]]:
    """(a, b, d) with a d = n and 0 <= b < d."""
    return [(n // d, b, d) for d in range(1, n + 1) if n % d == 0 for b in range(d)]


@lru_cache(maxsize=8)
def qj_coefficients(N: int) -> Tuple[int, ...]:
    """Coefficients a_0..a_N of q*j(q) = E4^3 / prod (1 - q^n)^24."""
    L = N + 1
    e4 = [1] + [240 * sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, L)]
    e4_3 = _mul_trunc(_mul_trunc(e4, e4, L), e4, L)
    prod = [1] + [0] * (L - 1)
    for n in range(1, L):
        # multiply by (1 - q^n) 24 times
        for _ in range(24):
            for i in range(L - 1, n - 1, -1):
                prod[i] -= prod[i - n]
    # series division by prod (constant term 1)
    out = [0] * L
    for i in range(L):
        s = e4_3[i] - sum(out[k] * prod[i - k] for k in range(i))
        out[i] = s
    return tuple(out)


def _mul_trunc(a, b, L):
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for k, y in enumerate(b[: L - i]):
                out[i + k] += x * y
    return out


def _j_power_table(sigma: int, extra: int) -> List[List[int]]:
    """table[u][t + u] = coefficient of q^t in j^u, for t <= extra."""
    base = list(qj_coefficients(sigma + extra + 1))
    L = sigma + extra + 1
    table = [[1] + [0] * (L - 1)]
    for _ in range(sigma):
        table.append(_mul_trunc(table[-1], base, L))
    return table


def _height_guess_bits(n: int) -> int:
    """Rough guess at log2 of the largest coefficient; a low guess only costs a retry."""
    if is_prime(n):
        nats = n * (6 * math.log(n) + 14)
    else:
        nats = sigma1(n) * (3 * math.log(n + 1) + 12)
    return int(nats / math.log(2)) + 64


def _laurent_balls(n: int, K: int, y: float, bits: int, t_range) -> List[dict]:
    """Balls E[k][t] enclosing the DFT estimate of the q^t coefficient of C_k.

    C_k(tau) is the X^k coefficient of prod (X - j(M tau)), sampled at
    tau_s = s/K + i y.  Aliasing from q^(t+K) is kept negligible by the choice
    of K; it is not part of the enclosure, which is why callers cross-check.
    """
    lattices = sublattices(n)
    sigma = len(lattices)
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        cols = [[] for _ in range(sigma + 1)]
        iy = flint.acb(0, y)
        for s in range(K):
            tau = flint.acb(flint.arb(s) / K) + iy
            roots = [((a * tau + b) / d).modular_j() for a, b, d in lattices]
            coeffs = flint.acb_poly.from_roots(roots).coeffs()
            for k in range(sigma + 1):
                cols[k].append(coeffs[k] if k < len(coeffs) else flint.acb(0))
        rho = (flint.arb.pi() * (-2 * y)).exp()
        out = []
        for k in range(sigma + 1):
            F = flint.acb.dft(cols[k])
            out.append({t: F[t % K] / K / rho**t for t in t_range})
        return out
    finally:
        flint.ctx.prec = old


def _build(n: int, K: int, y: float, bits: int) -> BiPoly:
    sigma = sigma1(n)
    check = 2
    t_range = list(range(-sigma, check + 1))
    E = _laurent_balls(n, K, y, bits, t_range)
    table = _j_power_table(sigma, check)
    phi: BiPoly = {}
    for k in range(sigma + 1):
        ints = {}
        for t in t_range:
            z = E[k][t]
            r = z.real.unique_fmpz()
            if r is None or not z.imag.contains(0) or z.real.rad() > 0.25:
                raise PrecisionInsufficient(f"Phi_{n}: coefficient X^{k} q^{t} not certified", bits)
            ints[t] = int(r)
        p = [0] * (sigma + 1)
        for t in range(-sigma, 1):
            u = -t
            p[u] = ints[t] - sum(p[w] * table[w][t + w] for w in range(u + 1, sigma + 1))
        for t in range(1, check + 1):
            pred = sum(p[w] * table[w][t + w] for w in range(sigma + 1))
            if pred != ints[t]:
                raise PrecisionInsufficient(f"Phi_{n}: q^{t} consistency check failed", bits)
        for u, c in enumerate(p):
            if c:
                phi[(k, u)] = c
    return phi


def symmetry_sign(n: int) -> int:
    """Phi_n(Y, X) = sign * Phi_n(X, Y); the X - Y factor of square levels flips it."""
    return -1 if math.isqrt(n) ** 2 == n else 1


def _symmetric(phi: BiPoly, sign: int) -> bool:
    return all(phi.get((j, i), 0) == sign * c for (i, j), c in phi.items())


def _cache_path(n: int) -> str:
    return f"phi/n{n}.json"


@lru_cache(maxsize=None)
def _phi_cached(n: int) -> Tuple[Tuple[int, int, int], ...]:
    obj = cache.read_json(_cache_path(n))
    if obj and obj.get("n") == n:
        return tuple((int(i), int(j), int(c)) for i, j, c in obj["terms"])
    phi = construct(n)
    terms = tuple(sorted((i, j, c) for (i, j), c in phi.items()))
    sigma = sigma1(n)
    cache.write_json(
        _cache_path(n),
        {"n": n, "name": f"phi_{n}", "deg_x": sigma, "deg_y": sigma, "terms": [[i, j, str(c)] for i, j, c in terms]},
    )
    return terms


def construct(n: int) -> BiPoly:
    """Build Phi_n from scratch (no cache), retrying with more precision on failure."""
    if n == 1:
        return {(1, 0): 1, (0, 1): -1}
    sigma = sigma1(n)
    y = 1.0
    H = _height_guess_bits(n)
    for _ in range(4):
        Hn = H * math.log(2)
        K = 16
        while 2 * math.pi * y * K - 4 * math.pi * math.sqrt(sigma * K) - Hn < 64 or K < 4 * sigma:
            K *= 2
        bits = H + int(2 * math.pi * y * sigma / math.log(2)) + 96
        try:
            phi = _build(n, K, y, bits)
        except PrecisionInsufficient:
            H *= 2
            continue
        if _symmetric(phi, symmetry_sign(n)) and phi.get((sigma, 0)) == 1:
            return phi
        H *= 2
    raise PrecisionInsufficient(f"could not certify Phi_{n}")


def classical_modular_poly(n: int) -> BiPoly:
    """Phi_n as {(i, j): coeff}; cached on disk under phi/n<level>.json."""
    if not (1 <= n <= MAX_LEVEL or (is_prime(n) and n <= MAX_PRIME_LEVEL)):
        raise BoundExceeded(f"level {n} outside 1..{MAX_LEVEL} (or primes up to {MAX_PRIME_LEVEL})")
    return {(i, j): c for i, j, c in _phi_cached(n)}


def phi_terms(n: int) -> Tuple[Tuple[int, int, int], ...]:
    classical_modular_poly(n)
    return _phi_cached(n)


def clear_memory_cache() -> None:
    _phi_cached.cache_clear()
