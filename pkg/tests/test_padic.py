import math
import random
from fractions import Fraction

import pytest

from cmlab import modfunc as mf
from cmlab import padic, polys, quadforms as qf
from cmlab.errors import BoundaryTie, BoundExceeded, EqualDiscriminants

F = Fraction
P2, P3, INF = padic.Place.finite(2), padic.Place.finite(3), padic.Place.infinity()


def test_place_validation():
    with pytest.raises(ValueError):
        padic.Place.finite(4)
    with pytest.raises(ValueError):
        padic.Place("adelic")
    assert str(INF) == "inf" and str(P2) == "2"


def test_newton_examples():
    assert padic.newton_polygon([32768, 1], 2).segments == ((F(15), 1),)
    assert padic.newton_polygon([-2, 0, 1], 2).segments == ((F(1, 2), 2),)
    assert sorted(padic.newton_polygon([2, 1, 1], 2).root_valuations()) == [0, 1]
    poly = padic.newton_polygon([0, 0, 3, 1], 3)
    assert poly.zero_roots == 2 and poly.root_valuations() == [1] and poly.degree == 3
    with pytest.raises(ValueError):
        padic.newton_polygon([0], 2)


def _random_constructed(rng, p):
    """A polynomial with known root valuations: a product of X^e - p^a u with p not dividing u."""
    P, vals = [1], []
    while polys.degree(P) < 1 or (polys.degree(P) < 6 and rng.random() < 0.6):
        e = rng.randint(1, 6 - polys.degree(P)) if polys.degree(P) < 6 else 1
        a = rng.randint(0, 5)
        u = rng.choice([1, -1]) * rng.randrange(1, 50)
        while u % p == 0:
            u += 1
        P = polys.mul(P, [-(p**a) * u] + [0] * (e - 1) + [1])
        vals += [F(a, e)] * e
    c = rng.choice([1, -1]) * rng.randrange(1, 20)
    return polys.scale(P, c), sorted(vals)


def test_newton_matches_constructed_valuations():
    rng = random.Random(40)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        P, vals = _random_constructed(rng, p)
        assert sorted(padic.newton_polygon(P, p).root_valuations()) == vals, (P, p)


def test_newton_invariants():
    rng = random.Random(41)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        P = [rng.randint(-1000, 1000) or 1 for _ in range(rng.randint(2, 7))]
        poly = padic.newton_polygon(P, p)
        vals = [v for v, _ in poly.segments]
        assert vals == sorted(set(vals))
        assert poly.degree == len(P) - 1
        # product of the roots has valuation v(a_0) - v(a_n)
        assert sum(poly.root_valuations()) == padic.vp(P[0], p) - padic.vp(P[-1], p)


def test_conjugates_in_disc_examples():
    assert padic.conjugates_in_disc([32768, 1], 0, P2, F(1, 1024)) == 1
    assert padic.conjugates_in_disc([32768, 1], 0, P3, 1) == 0
    assert padic.conjugates_in_disc([-121287375, 191025, 1], 0, INF, 1000) == 1


def test_disc_boundary_is_exact_at_finite_places():
    # |8|_2 = 1/8 lies on the boundary of the disc of radius 1/8, which is open
    assert padic.conjugates_in_disc([-8, 1], 0, P2, F(1, 8)) == 0
    assert padic.conjugates_in_disc([-8, 1], 0, P2, F(1, 7)) == 1
    # v = 1/2 sits between the powers 1/4 and 1/2 of 2
    assert padic.conjugates_in_disc([-2, 0, 1], 0, P2, F(3, 4)) == 2
    assert padic.conjugates_in_disc([-2, 0, 1], 0, P2, F(7, 10)) == 0


def test_disc_excludes_alpha_itself():
    assert padic.conjugates_in_disc([0, 1], 0, P2, F(1, 2)) == 0
    assert padic.conjugates_in_disc([0, 1], 0, INF, 1) == 0


def test_archimedean_exact_boundary_is_outside():
    assert padic.conjugates_in_disc([-1, 1], 0, INF, 1) == 0


def test_archimedean_boundary_tie(monkeypatch):
    import mpmath

    # a root enclosure straddling the circle cannot be classified
    monkeypatch.setattr(padic, "certified_roots", lambda P, prec: [(mpmath.mpc(1), mpmath.mpf("0.01"))])
    with pytest.raises(BoundaryTie):
        padic.conjugates_in_disc([-1, 1], 0, INF, 1)


def test_profile_examples():
    assert padic.pairwise_difference_valuations(-11, -3, 2).valuations == (15,)
    assert padic.pairwise_difference_valuations(-11, -3, 5).valuations == (0,)
    assert padic.pairwise_difference_valuations(-4, -3, 2).valuations == (6,)
    with pytest.raises(EqualDiscriminants):
        padic.pairwise_difference_valuations(-7, -7, 2)


def test_profile_size():
    for D, D0 in [(-15, -23), (-20, -3), (-31, -15)]:
        prof = padic.pairwise_difference_valuations(D, D0, 3)
        assert len(prof.valuations) == qf.class_number(D) * qf.class_number(D0)


def test_approx_ratio_examples():
    assert padic.approx_ratio(-11, -3, 2) == pytest.approx(15 * math.log(2) / math.log(11))
    assert padic.approx_ratio(-4, -3, 3) == pytest.approx(3 * math.log(3) / math.log(4))
    assert padic.approx_ratio(-11, -3, 5) == 0


def test_integrality_small():
    Ds = list(qf.discriminants(60))
    for p in (2, 3, 5):
        for D in Ds:
            for D0 in Ds:
                if D != D0:
                    assert min(padic.pairwise_difference_valuations(D, D0, p).valuations) >= 0


def test_dispersal_examples():
    rel = mf.builtin_relation("identity")
    rows = {r.D: r for r in padic.dispersal_table(rel, 0, P2, F(1, 2), 50)}
    assert rows[-11].fraction == 1
    assert rows[-3].fraction == 0 and rows[-3].orbit_size == 0
    for r in padic.dispersal_table(rel, 0, INF, 1, 50):
        assert 0 <= r.fraction <= 1


def test_dispersal_supersingular_filter():
    rel = mf.builtin_relation("identity")
    rows = padic.dispersal_table(rel, 0, P2, F(1, 16), 200, only_supersingular=True)
    assert rows and all(qf.reduction_type(r.D, 2).supersingular for r in rows)
    assert {r.D for r in rows} == {D.value for D in qf.discriminants(200) if qf.reduction_type(D, 2).supersingular}


def test_table_guards():
    rel = mf.builtin_relation("identity")
    with pytest.raises(BoundExceeded):
        padic.dispersal_table(rel, 0, P2, 1, 10**5 + 1)
    with pytest.raises(BoundExceeded):
        padic.approx_ratio_table(-3, 2, 10**5 + 1)


def test_ratio_table_running_max():
    rows = padic.approx_ratio_table(-3, 2, 100)
    assert all(r.D != -3 for r in rows)
    best = -math.inf
    for r in rows:
        assert r.new_max == (r.ratio > best)
        best = max(best, r.ratio)
        assert r.running_max == best


def test_fraction_str():
    assert padic.fraction_str(F(3, 4)) == "3/4" and padic.fraction_str(1) == "1/1"
