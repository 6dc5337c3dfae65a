from collections import Counter
from fractions import Fraction

import pytest

from cmlab import hecke, quadforms as qf
from cmlab.errors import BoundExceeded, DoesNotSplit, OrdinaryReduction
from cmlab.ffield import field
from cmlab.modpoly import sigma1


def _brute_supersingular(p):
    """j supersingular iff some curve with that j has #E(F_{p^2}) = p^2 + 1 +- 2p (trace = +-2p or 0 mod p)."""
    F = field(p)
    out = []
    els = F.elements()
    squares = Counter(F.mul(y, y) for y in els)
    for j in els:
        A, B = hecke._curve_for_j(F, j)
        if p > 3:
            a3 = F.mul(F.elem(4), F.mul(F.mul(A, A), A))
            disc = F.add(a3, F.mul(F.elem(27), F.mul(B, B)))
            assert F.mul(F.elem(1728), F.mul(a3, F.inv(disc))) == j
        count = 1
        for x in els:
            rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(A, x)), B)
            count += squares[rhs]
        if (p * p + 1 - count) % p == 0:
            out.append(j)
    return out


def test_supersingular_examples():
    assert hecke.supersingular_set(11) == [(0, 0), (1, 0)]
    assert hecke.supersingular_set(5) == [(0, 0)]
    assert hecke.supersingular_set(2) == [(0, 0)] and hecke.supersingular_set(3) == [(0, 0)]
    assert len(hecke.supersingular_set(37)) == 3


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_supersingular_brute_force(p):
    assert hecke.supersingular_set(p) == _brute_supersingular(p)


def test_size_formula_and_mass():
    for p in [q for q in range(5, 400) if qf.is_prime(q)]:
        pts = hecke.supersingular_set(p)
        c = {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]
        assert len(pts) == p // 12 + c == hecke.expected_size(p)
        assert hecke._mass(p, pts) == Fraction(p - 1, 24)


def test_exhaustive_matches_closure():
    for p in (29, 31, 37, 41, 43, 47, 53, 59):
        assert sorted(hecke._exhaustive(p), key=field(p).key) == sorted(hecke._isogeny_closure(p), key=field(p).key)


def test_supersingular_guards():
    with pytest.raises(ValueError):
        hecke.supersingular_set(15)
    with pytest.raises(BoundExceeded):
        hecke.supersingular_set(2003)


def test_hecke_examples():
    assert hecke.hecke_image((5, 0), 1, 11).as_dict() == {(5, 0): 1}
    assert hecke.hecke_image((0, 0), 2, 11).degree == 3
    for j0 in hecke.supersingular_set(11):
        for n in (2, 3):
            assert set(hecke.hecke_image(j0, n, 11).support) <= {(0, 0), (1, 0)}


@pytest.mark.parametrize("p", [11, 13, 23])
def test_degree_identity(p):
    for j0 in hecke.supersingular_set(p):
        for n in range(1, 21):
            if n % p:
                assert hecke.hecke_image(j0, n, p).degree == sigma1(n)


def test_duality_p11():
    pts = hecke.supersingular_set(11)
    for n in range(1, 11):
        if n % 11 == 0:
            continue
        supp = {j: set(hecke.hecke_image(j, n, 11).support) for j in pts}
        for a in pts:
            for b in pts:
                assert (b in supp[a]) == (a in supp[b])


def test_commutativity_p11():
    for j0 in hecke.supersingular_set(11):
        for q, q2 in [(2, 3), (2, 5), (3, 5)]:
            a = hecke.apply_hecke(hecke.apply_hecke({j0: 1}, q2, 11), q, 11)
            b = hecke.apply_hecke(hecke.apply_hecke({j0: 1}, q, 11), q2, 11)
            assert a == b == hecke.hecke_image(j0, q * q2, 11).as_dict()


@pytest.mark.parametrize("p", [11, 13])
def test_direct_matches_recursive(p):
    for j0 in hecke.supersingular_set(p):
        for n in range(2, 21):
            if n % p:
                assert hecke.hecke_image(j0, n, p, "direct") == hecke.hecke_image(j0, n, p, "recursive")


def test_overlap():
    v = hecke.overlap_degree((0, 0), 2, 3, 11)
    assert 0 <= v <= 24
    with pytest.raises(ValueError):
        hecke.overlap_degree((0, 0), 2, 2, 11)


def test_level_divisible_by_p_rejected():
    with pytest.raises(ValueError):
        hecke.hecke_image((0, 0), 11, 11)
    with pytest.raises(ValueError):
        hecke.hecke_image((0, 0), 0, 11)


def test_ordinary_seed_rejected():
    # j = 2 is ordinary at 11, and its 2-isogenous curves need a larger field
    with pytest.raises(DoesNotSplit):
        for n in range(2, 8):
            hecke.hecke_image((2, 0), n, 11)


def test_orbit_measure():
    m = hecke.hecke_orbit_measure((0, 0), 12, 11)
    first = m.rows[0]
    assert first.n == 1 and first.weights[m.points.index((0, 0))] == 1
    for row in m.rows:
        assert sum(row.weights) == 1
        assert row.max_atom == max(row.weights)
    assert [r.n for r in m.rows] == [n for n in range(1, 13) if n != 11]
    with pytest.raises(DoesNotSplit):
        hecke.hecke_orbit_measure((2, 0), 5, 11)


def test_orbit_regression_p31():
    for j0 in hecke.supersingular_set(31):
        m = hecke.hecke_orbit_measure(j0, 50, 31)
        assert m.max_atom_between(30, 50) < Fraction(9, 10)


def test_cm_examples():
    assert hecke.cm_reduction_divisor(-11, 2).as_dict() == {(0, 0): 1}
    assert hecke.cm_reduction_divisor(-3, 5).as_dict() == {(0, 0): 1}
    assert set(hecke.cm_reduction_divisor(-15, 11).support) <= {(0, 0), (1, 0)}
    with pytest.raises(OrdinaryReduction):
        hecke.cm_reduction_divisor(-7, 2)


def test_cm_support():
    for p in (2, 3, 5, 7, 11):
        ss = set(hecke.supersingular_set(p))
        for D in qf.discriminants(500):
            if qf.reduction_type(D, p).supersingular:
                div = hecke.cm_reduction_divisor(D, p)
                assert div.degree == qf.class_number(D)
                assert set(div.support) <= ss, (D, p)


def test_divisor_json():
    div = hecke.hecke_image((0, 0), 2, 11)
    assert div.to_json() == '{"p":11,"entries":[[[1,0],3]]}'
    with pytest.raises(ValueError):
        hecke.HeckeDivisor.from_mapping(11, {(0, 0): -1})
