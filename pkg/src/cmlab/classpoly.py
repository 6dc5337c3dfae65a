"""Analytic evaluation of j, eta and Weber functions; Hilbert class polynomials; heights.

All analytic work uses mpmath at an explicit binary precision.  The argument
is moved into the standard fundamental domain before any q-series is summed,
so ``|q| <= exp(-pi*sqrt(3))`` and the pentagonal series for eta needs only a
handful of terms even at thousands of bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import flint
import mpmath
from mpmath import mpc, mpf

from . import cache, polys
from .errors import BoundExceeded, PrecisionInsufficient, PrecisionOverflow
from .quadforms import MAX_ABS_DISCRIMINANT, Discriminant, as_discriminant, reduced_forms

SERIES_TERM_CAP = 100_000
MAX_RETRIES = 4

Matrix = Tuple[int, int, int, int]


@dataclass(frozen=True)
class PrecisionPolicy:
    working_bits: int = 128
    safety_margin_bits: int = 64

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be at least 64")
        if self.safety_margin_bits < 1:
            raise ValueError("safety_margin_bits must be positive")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class ClassPolynomial:
    discriminant: Discriminant
    coefficients: Tuple[int, ...]  # constant term first, monic
    max_residual: float = 0.0
    bits: int = 0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_list(self) -> List[int]:
        return list(self.coefficients)


@dataclass(frozen=True)
class AlgebraicNumber:
    minpoly: Tuple[int, ...]
    approximations: Optional[Tuple[complex, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        p = polys.trim(self.minpoly)
        if len(p) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        object.__setattr__(self, "minpoly", tuple(polys.primitive(p)))

    @classmethod
    def from_rational(cls, x) -> "AlgebraicNumber":
        x = Fraction(x)
        return cls((-x.numerator, x.denominator))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


# --- SL(2, Z) reduction and eta --------------------------------------------


def _mat_mul(m: Matrix, n: Matrix) -> Matrix:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def reduce_tau(tau) -> Tuple[mpc, Matrix]:
    """Return (tau', M) with tau' = M tau in the standard fundamental domain."""
    tau = mpc(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    m: Matrix = (1, 0, 0, 1)
    for _ in range(10_000):
        n = int(mpmath.nint(tau.real))
        if n:
            tau = tau - n
            m = _mat_mul((1, -n, 0, 1), m)
        if abs(tau) < 1 - mpf(2) ** (-mpmath.mp.prec // 2):
            tau = -1 / tau
            m = _mat_mul((0, -1, 1, 0), m)
        else:
            return tau, m
    raise PrecisionOverflow("fundamental-domain reduction did not terminate")


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) for k >= 1 and gcd(h, k) = 1, via reciprocity."""
    if k < 1:
        raise ValueError("k must be positive")
    sign = 1
    total = Fraction(0)
    h %= k
    while h:
        # s(h, k) = -s(k, h) + (h/k + k/h + 1/(hk))/12 - 1/4
        total += sign * (Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k) - 3) / 12
        sign = -sign
        h, k = k % h, h
    return total


def _pentagonal_sum(q: mpc, bits: int) -> mpc:
    """sum_k (-1)^k q^(k(3k-1)/2) over k in Z, the eta product without q^(1/24)."""
    aq = abs(q)
    if aq == 0:
        return mpc(1)
    if aq >= 1:
        raise PrecisionOverflow("|q| >= 1")
    per_exponent = -float(mpmath.log(aq, 2))
    total = mpc(1)
    q3 = q * q * q
    qk = q  # q^k
    step = q * q3  # q^(3k+1): ratio between consecutive q^(k(3k-1)/2)
    a = q  # q^(k(3k-1)/2)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 * per_exponent > bits + 8:
            return total
        if k > SERIES_TERM_CAP:
            raise PrecisionOverflow("eta series exceeds the term cap")
        term = a + a * qk
        total += -term if k % 2 else term
        a *= step
        step *= q3
        qk *= q
        k += 1


def _eta_direct(tau: mpc, bits: int) -> mpc:
    q = mpmath.expjpi(2 * tau)
    return mpmath.expjpi(tau / 12) * _pentagonal_sum(q, bits)


def eta(tau, bits: int) -> mpc:
    """Dedekind eta at tau, using the eta multiplier to work in the fundamental domain."""
    with mpmath.workprec(bits + 32):
        tau = mpc(tau)
        tr, (a, b, c, d) = reduce_tau(tau)
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        base = _eta_direct(tr, bits + 32)
        if c == 0:
            # tr = tau + b
            val = base * mpmath.expjpi(-mpf(b) / 12)
        else:
            s = dedekind_sum(d, c)
            phase = Fraction(a + d, 12 * c) - s
            eps = mpmath.expjpi(mpf(phase.numerator) / phase.denominator)
            val = base / (eps * mpmath.sqrt(-1j * (c * tau + d)))
    return +val


def _im_bits(y) -> int:
    return int(math.ceil(2 * math.pi * float(y) / math.log(2)))


def eval_j(tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> mpc:
    """j(tau) with absolute error below 2**-working_bits."""
    bits = policy.working_bits
    with mpmath.workprec(bits + 64):
        tr, _ = reduce_tau(mpc(tau))
        extra = _im_bits(tr.imag) + 32
    with mpmath.workprec(bits + extra):
        tr = mpc(tr)
        value = _j_fundamental(tr, bits + extra)
    return value


def _j_fundamental(tr: mpc, bits: int) -> mpc:
    q = mpmath.expjpi(2 * tr)
    t = q * (_pentagonal_sum(q * q, bits) / _pentagonal_sum(q, bits)) ** 24
    return (1 + 256 * t) ** 3 / t


ETA_VARIANTS = ("eta", "weber_f", "weber_f1", "weber_f2")


def eval_eta_quotient(variant: str, tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> mpc:
    """Dedekind eta or one of the Weber functions f, f1, f2."""
    if variant not in ETA_VARIANTS:
        raise ValueError(f"unknown eta quotient {variant!r}; expected one of {ETA_VARIANTS}")
    bits = policy.working_bits + 16
    with mpmath.workprec(bits + 16):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        if variant == "eta":
            return eta(tau, bits)
        e = eta(tau, bits)
        if variant == "weber_f":
            val = mpmath.expjpi(mpf(-1) / 24) * eta((tau + 1) / 2, bits) / e
        elif variant == "weber_f1":
            val = eta(tau / 2, bits) / e
        else:
            val = mpmath.sqrt(2) * eta(2 * tau, bits) / e
    return val


# --- Hilbert class polynomials ---------------------------------------------


def cm_point(form) -> Tuple[int, int, int]:
    """The tuple (a, b, |D|) describing tau = (-b + i sqrt|D|) / (2a)."""
    return (form.a, form.b, 4 * form.a * form.c - form.b * form.b)


def _tau_of(a: int, b: int, N: int) -> mpc:
    return mpc(mpf(-b) / (2 * a), mpmath.sqrt(N) / (2 * a))


def heuristic_bits(D, margin: int = 64) -> int:
    D = as_discriminant(D)
    forms = reduced_forms(D)
    s = sum(Fraction(1, f.a) for f in forms)
    size = math.pi * math.sqrt(abs(D)) / math.log(2) * float(s)
    return int(math.ceil(size)) + len(forms) + margin


def singular_moduli_numeric(D, bits: int) -> List[mpc]:
    """j(tau_Q) for every reduced form Q of discriminant D, at absolute error 2**-bits."""
    D = as_discriminant(D)
    N = abs(D)
    out = []
    policy = PrecisionPolicy(max(bits, 64))
    for f in reduced_forms(D):
        with mpmath.workprec(bits + 64):
            tau = _tau_of(f.a, f.b, N)
        out.append(eval_j(tau, policy))
    return out


def _product_from_roots(D: Discriminant, bits: int) -> Tuple[List[int], float]:
    forms = reduced_forms(D)
    js = singular_moduli_numeric(D, bits)
    with mpmath.workprec(bits + 32):
        by_form = {(f.a, f.b): j for f, j in zip(forms, js)}
        poly = [mpf(1)]
        for f, j in zip(forms, js):
            if f.b > 0 and (f.a, -f.b) in by_form:
                # the conjugate root is j(tau) for (a, -b, c); multiply once per pair
                factor = [abs(j) ** 2, -2 * j.real, mpf(1)]
            elif f.b < 0 and (f.a, -f.b) in by_form:
                continue
            else:
                if abs(j.imag) > mpf(2) ** (-bits // 2):
                    raise PrecisionInsufficient(f"singular modulus for {f} is not real", bits)
                factor = [-j.real, mpf(1)]
            new = [mpf(0)] * (len(poly) + len(factor) - 1)
            for i, x in enumerate(poly):
                for k, y in enumerate(factor):
                    new[i + k] += x * y
            poly = new
        coeffs = []
        worst = mpf(0)
        # floating values beyond 2**(bits + 32) look integral whatever their
        # error, so the residual includes a bound on the accumulated rounding
        slack = max(abs(c) for c in poly) * mpf(2) ** -(bits + 24) * 4 * len(poly)
        for c in poly:
            r = mpmath.nint(c)
            worst = max(worst, abs(c - r) + slack)
            coeffs.append(int(r))
    return coeffs, float(worst)


_memo: Dict[int, ClassPolynomial] = {}


def _cache_path(D: Discriminant) -> str:
    return f"hclass/D{abs(D)}.json"


def _from_cache(D: Discriminant) -> Optional[ClassPolynomial]:
    obj = cache.read_json(_cache_path(D))
    if not obj or obj.get("D") != D.value:
        return None
    coeffs = [int(c) for c in obj["coeffs"]]
    if len(coeffs) - 1 != obj.get("h") or coeffs[-1] != 1:
        return None
    return ClassPolynomial(D, tuple(coeffs))


def _to_cache(cp: ClassPolynomial) -> None:
    cache.write_json(
        _cache_path(cp.discriminant),
        {"D": cp.discriminant.value, "h": cp.degree, "coeffs": [str(c) for c in cp.coefficients]},
    )


def hilbert_class_poly(
    D, policy: Optional[PrecisionPolicy] = None, use_cache: bool = True
) -> ClassPolynomial:
    """H_D as the product of (X - j(tau_Q)) over reduced forms, with certified rounding."""
    D = as_discriminant(D)
    if abs(D) > MAX_ABS_DISCRIMINANT:
        raise BoundExceeded(f"|D| = {abs(D)} exceeds {MAX_ABS_DISCRIMINANT}")
    if use_cache:
        hit = _memo.get(D.value)
        if hit is not None:
            return hit
        hit = _from_cache(D)
        if hit is not None:
            _memo[D.value] = hit
            return hit
    policy = policy or DEFAULT_POLICY
    bits = max(policy.working_bits, heuristic_bits(D, policy.safety_margin_bits))
    for _ in range(MAX_RETRIES):
        coeffs, worst = _product_from_roots(D, bits)
        if worst < 0.25 and coeffs[-1] == 1:
            break
        bits *= 2
    else:
        raise PrecisionInsufficient(f"rounding of H_{D.value} not certified (residual {worst})", bits)
    cp = ClassPolynomial(D, tuple(coeffs), worst, bits)
    if use_cache:
        _memo[D.value] = cp
        _to_cache(cp)
    return cp


def clear_memory_cache() -> None:
    _memo.clear()


# --- heights ---------------------------------------------------------------


def _arb_mid(x: "flint.arb") -> mpf:
    man, exp = x.mid().man_exp()
    return mpmath.ldexp(mpf(int(man)), int(exp))


def certified_roots(p: Sequence[int], prec: int = 128) -> List[Tuple[mpc, float]]:
    """Complex roots of an integer polynomial as (midpoint, radius) balls, with multiplicity."""
    fp = polys.to_flint(polys.trim(p))
    old = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        roots = fp.complex_roots()
        out = []
        for z, mult in roots:
            with mpmath.workprec(prec + 64):
                mid = mpc(_arb_mid(z.real), _arb_mid(z.imag))
            rad = float(z.real.rad()) + float(z.imag.rad())
            out.extend([(mid, rad)] * int(mult))
    finally:
        flint.ctx.prec = old
    return out


def _log_plus_sum_arb(p: Sequence[int], prec: int) -> "flint.arb":
    fp = polys.to_flint(polys.trim(p))
    old = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        total = flint.arb(0)
        zero = flint.arb(0)
        for z, mult in fp.complex_roots():
            if z == 0:
                continue
            total += int(mult) * abs(z).log().max(zero)
        return total
    finally:
        flint.ctx.prec = old


def weil_height(alpha) -> float:
    """Absolute logarithmic Weil height through the Mahler measure of the minimal polynomial."""
    p = list(alpha.minpoly) if isinstance(alpha, AlgebraicNumber) else polys.primitive(alpha)
    n = len(p) - 1
    if n < 1:
        raise ValueError("need a polynomial of degree >= 1")
    prec = 128
    while True:
        s = _log_plus_sum_arb(p, prec)
        total = (flint.arb(abs(p[-1])).log() + s) / n
        if float(total.rad()) < 1e-14 or prec > 4096:
            return float(total.mid())
        prec *= 2


def singular_modulus_height(D, bits: int = 96) -> float:
    """h_W of any discriminant-D singular modulus, from the analytic conjugates."""
    js = singular_moduli_numeric(D, bits)
    with mpmath.workprec(bits + 32):
        total = sum(max(mpf(0), mpmath.log(abs(j))) if j != 0 else mpf(0) for j in js)
        return float(total / len(js))
