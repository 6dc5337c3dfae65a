import json
import math
import random

import flint
import mpmath
import pytest

from cmlab import classpoly as cp
from cmlab import polys, quadforms as qf
from cmlab.classpoly import AlgebraicNumber, PrecisionPolicy
from cmlab.errors import BoundExceeded, PrecisionInsufficient

P256 = PrecisionPolicy(256)


def _rand_tau(rng):
    return mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 2.5))


def _flint_j(tau, bits):
    flint.ctx.prec = bits + 64
    try:
        z = flint.acb(flint.arb(str(tau.real)), flint.arb(str(tau.imag))).modular_j()
        return complex(z)
    finally:
        flint.ctx.prec = 53


def test_j_special_values():
    with mpmath.workprec(300):
        rho = mpmath.mpc(0.5, mpmath.sqrt(3) / 2)
        t11 = mpmath.mpc(0.5, mpmath.sqrt(11) / 2)
        assert abs(cp.eval_j(rho, P256)) < mpmath.mpf(2) ** -240
        assert abs(cp.eval_j(mpmath.mpc(0, 1), P256) - 1728) < mpmath.mpf(2) ** -240
        assert abs(cp.eval_j(t11, P256) + 32768) < mpmath.mpf(2) ** -230


def test_j_matches_independent_evaluator():
    rng = random.Random(11)
    for _ in range(40):
        tau = _rand_tau(rng)
        ours = complex(cp.eval_j(tau))
        ref = _flint_j(tau, 128)
        assert abs(ours - ref) <= 1e-9 * max(1.0, abs(ref))


def test_j_sl2z_invariance():
    rng = random.Random(5)
    bits = 128
    for _ in range(100):
        tau = _rand_tau(rng)
        while True:
            a, b, c, d = (rng.randint(-6, 6) for _ in range(4))
            if a * d - b * c == 1 and c != 0:
                break
        with mpmath.workprec(bits + 64):
            moved = (a * tau + b) / (c * tau + d)
            j0 = cp.eval_j(tau, PrecisionPolicy(bits))
            j1 = cp.eval_j(moved, PrecisionPolicy(bits))
            assert abs(j0 - j1) < mpmath.mpf(2) ** (-bits + 8) * max(1, abs(j0))


def test_reduce_tau_lands_in_fundamental_domain():
    rng = random.Random(2)
    for _ in range(100):
        tau = mpmath.mpc(rng.uniform(-5, 5), rng.uniform(0.01, 0.5))
        tr, (a, b, c, d) = cp.reduce_tau(tau)
        assert abs(tr.real) <= 0.5 + 1e-12 and abs(tr) >= 1 - 1e-12
        assert a * d - b * c == 1
        assert abs((a * tau + b) / (c * tau + d) - tr) < 1e-9


def test_eta_transformed_matches_direct_series():
    rng = random.Random(9)
    for _ in range(30):
        tau = mpmath.mpc(rng.uniform(-1, 1), rng.uniform(0.15, 0.6))
        with mpmath.workprec(400):
            direct = cp._eta_direct(tau, 380)
        assert abs(complex(cp.eta(tau, 128)) - complex(direct)) < 1e-25


def test_eta_positive_on_imaginary_axis():
    for t in (1, 2, 5):
        v = cp.eval_eta_quotient("eta", mpmath.mpc(0, t))
        assert abs(v.imag) < 1e-30 and v.real > 0


def test_weber_values_at_i():
    with mpmath.workprec(200):
        i = mpmath.mpc(0, 1)
        tol = mpmath.mpf(2) ** (-128 + 4)
        assert abs(cp.eval_eta_quotient("weber_f", i) - mpmath.mpf(2) ** 0.25) < tol
        assert abs(cp.eval_eta_quotient("weber_f1", i) - mpmath.mpf(2) ** 0.125) < tol
        assert abs(cp.eval_eta_quotient("weber_f2", i) - mpmath.mpf(2) ** 0.125) < tol


def test_weber_product_identity():
    rng = random.Random(4)
    taus = [mpmath.mpc(0, 2)] + [_rand_tau(rng) for _ in range(20)]
    for tau in taus:
        with mpmath.workprec(160):
            f, f1, f2 = (cp.eval_eta_quotient(v, tau) for v in ("weber_f", "weber_f1", "weber_f2"))
            assert abs(f * f1 * f2 - mpmath.sqrt(2)) < mpmath.mpf(2) ** -120


@pytest.mark.parametrize("variant,sign", [("weber_f", -1), ("weber_f1", 1), ("weber_f2", 1)])
def test_weber_relations(variant, sign):
    rng = random.Random(hash(variant) & 0xFFFF)
    bits = 192
    for _ in range(100):
        tau = _rand_tau(rng)
        with mpmath.workprec(bits + 64):
            w = cp.eval_eta_quotient(variant, tau, PrecisionPolicy(bits))
            j = cp.eval_j(tau, PrecisionPolicy(bits))
            u = w**24
            val = (u + 16 * sign) ** 3 - u * j
            scale = max(abs(u) ** 3, abs(u * j), 1)
            assert abs(val) / scale < mpmath.mpf(2) ** (-bits + 16)


def test_unknown_variant():
    with pytest.raises(ValueError):
        cp.eval_eta_quotient("weber_f3", mpmath.mpc(0, 1))


def test_hilbert_examples():
    assert cp.hilbert_class_poly(-3).as_list() == [0, 1]
    assert cp.hilbert_class_poly(-4).as_list() == [-1728, 1]
    assert cp.hilbert_class_poly(-11).as_list() == [32768, 1]
    assert cp.hilbert_class_poly(-15).as_list() == [-121287375, 191025, 1]


def test_hilbert_minus_15_roots():
    H = cp.hilbert_class_poly(-15).as_list()
    with mpmath.workprec(320):
        for j in cp.singular_moduli_numeric(-15, 256):
            assert abs(polys.peval(H, j)) < mpmath.mpf(2) ** -200


def test_hilbert_matches_flint():
    for D in qf.discriminants(600):
        ours = cp.hilbert_class_poly(D).as_list()
        ref = [int(c) for c in flint.fmpz_poly.hilbert_class_poly(D.value).coeffs()]
        assert ours == ref, D


def test_hilbert_certified_rounding():
    for D in qf.discriminants(300):
        H = cp.hilbert_class_poly(D, use_cache=False)
        assert H.max_residual < 0.25
        assert H.degree == qf.class_number(D) and H.coefficients[-1] == 1


def test_precision_insufficient(monkeypatch):
    monkeypatch.setattr(cp, "heuristic_bits", lambda D, margin=64: 64)
    monkeypatch.setattr(cp, "MAX_RETRIES", 1)
    with pytest.raises(PrecisionInsufficient):
        cp.hilbert_class_poly(-1999, PrecisionPolicy(64), use_cache=False)


def test_hilbert_guard():
    with pytest.raises(BoundExceeded):
        cp.hilbert_class_poly(-(10**8 + 3))


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(32)


def test_cache_file_format(tmp_cache):
    cp.hilbert_class_poly(-15)
    obj = json.loads((tmp_cache / "hclass" / "D15.json").read_text())
    assert obj == {"D": -15, "h": 2, "coeffs": ["-121287375", "191025", "1"]}


def test_cache_is_read_back(tmp_cache):
    path = tmp_cache / "hclass" / "D23.json"
    path.parent.mkdir(parents=True)
    # a planted (wrong but well-formed) entry proves hits skip analytic work
    path.write_text(json.dumps({"D": -23, "h": 3, "coeffs": ["1", "2", "3", "1"]}))
    assert cp.hilbert_class_poly(-23).as_list() == [1, 2, 3, 1]


def test_height_examples():
    assert cp.weil_height(AlgebraicNumber((-1, 1))) == pytest.approx(0, abs=1e-12)
    assert cp.weil_height(AlgebraicNumber((32768, 1))) == pytest.approx(15 * math.log(2), abs=1e-12)
    assert cp.weil_height(AlgebraicNumber((-1, 2))) == pytest.approx(math.log(2), abs=1e-12)


def test_singular_modulus_height_consistent():
    for D in qf.discriminants(300):
        H = tuple(cp.hilbert_class_poly(D).as_list())
        if H == (0, 1):
            continue
        assert cp.singular_modulus_height(D) == pytest.approx(cp.weil_height(AlgebraicNumber(H)), abs=1e-9)


def test_height_growth_shadow():
    failures = []
    for D in qf.discriminants(2000):
        h = qf.class_number(D)
        if cp.singular_modulus_height(D, bits=64) < 0.2 * math.log(h) - 10:
            failures.append(D.value)
    assert failures == []
