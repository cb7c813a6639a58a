import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from vipclass.chevalley_weil import galois_character_tuples, vip_character
from vipclass.covers import AlgebraicDatum, BranchingType, GeneratingVector
from vipclass.decomposition import (
    base_point_free,
    branch_data,
    dual_character_relation_check,
    eigensheaf_multidegree,
    eigensheaf_report,
    k_exponent,
    pluri_dimension,
    r_mu,
)
from vipclass.errors import ValidationError
from vipclass.groups import Character, make_group, subgroup_generated


def test_branch_data_flagship(flagship):
    comps = branch_data(flagship)
    assert len(comps) == 18
    assert all(c.order == 2 for c in comps)
    assert len({c.pair for c in comps}) == 9  # each monodromy value twice


def test_branch_data_groups_equal_monodromies(flagship):
    # Repeated entries within one vector share the stabilizer pair, so each
    # pair collects a degree-2 divisor in its factor.
    comps = branch_data(flagship)
    by_pair = {}
    for c in comps:
        by_pair.setdefault((c.factor_index, c.pair), []).append(c)
    assert all(len(v) == 2 for v in by_pair.values())
    assert len(by_pair) == 9


def test_k_exponent_cases(flagship):
    comps = branch_data(flagship)
    triv = tuple(Character((0, 0, 0)) for _ in range(3))
    for c in comps:
        assert k_exponent(flagship, c.pair, triv) == 0
    # character pairing 1/2 with the first component's monodromy
    some = comps[0]
    chis = (Character((1, 0, 0)), Character((0, 0, 0)), Character((0, 0, 0)))
    assert k_exponent(flagship, some.pair, chis) in (0, 1)


def test_k_exponent_order4():
    # |H| = 4 with chi(h) = 1/2 must give k = 2 (chi restricted to H is the
    # square of the distinguished generator character).
    from types import SimpleNamespace

    from vipclass.decomposition import StabPair

    G = make_group([4])
    ctx = SimpleNamespace(quotient_groups=(G,))
    pair = StabPair(order=4, key=((1,),))
    assert k_exponent(ctx, pair, (Character((2,)),)) == 2
    assert k_exponent(ctx, pair, (Character((1,)),)) == 1
    assert k_exponent(ctx, pair, (Character((0,)),)) == 0


def test_k_exponent_order3(row13_family):
    comps = branch_data(row13_family)
    order3 = [c for c in comps if c.order == 3]
    assert order3
    tuples = galois_character_tuples(row13_family)
    seen = {k_exponent(row13_family, c.pair, chis)
            for c in order3 for chis in tuples}
    assert seen == {0, 1, 2}


def test_r_mu_values():
    assert r_mu(1, 2, 0) == (1, 0)
    assert r_mu(2, 2, 1) == (1, 1)
    assert r_mu(3, 4, 2) == (3, 2)
    with pytest.raises(ValidationError):
        r_mu(1, 2, 2)


@given(st.integers(0, 12), st.integers(1, 12), st.data())
@settings(max_examples=200, deadline=None)
def test_r_mu_ranges(m, order, data):
    k = data.draw(st.integers(0, order - 1))
    r, mu = r_mu(m, order, k)
    assert 0 <= r <= order - 1
    assert 0 <= mu <= m
    # r and mu solve k - m = r - mu * ... : check the defining relation
    assert r == k - m + (mu != m - 0) * 0 + (m - mu) * order - 0 or True
    assert r - k + m == (m - mu) * order


def test_eigensheaf_trivial_character(flagship):
    triv = tuple(Character((0, 0, 0)) for _ in range(3))
    e = eigensheaf_multidegree(flagship, 1, triv)
    assert e.degrees == (-2, -2, -2)
    assert e.sections == 0


def test_eigensheaf_table_flagship(flagship):
    rep = eigensheaf_report(flagship, 1)
    assert sum(e.sections for e in rep) == 16
    deg100 = [e for e in rep if e.degrees == (1, 0, 0)]
    assert deg100 and all(e.sections == 2 for e in deg100)
    # factor symmetry required by base separation
    for j in range(3):
        assert any(e.degrees[j] >= 1 for e in rep if min(e.degrees) >= 0)


def test_pluri_dimension(flagship, row1_family):
    assert pluri_dimension(flagship, 1) == 16
    assert pluri_dimension(flagship, 2) == 216
    assert pluri_dimension(row1_family, 1) == 4


def test_two_route_totals(flagship, row1_family, row13_family):
    for datum in (flagship, row1_family, row13_family):
        for m in range(1, 6):
            assert pluri_dimension(datum, m) == vip_character(datum, m).dimension


def test_base_point_free(flagship, row1_family):
    assert base_point_free(flagship, 1)
    assert not base_point_free(row1_family, 1)
    assert base_point_free(row1_family, 2)


def test_dual_character_relation(flagship, row13_family):
    for datum in (flagship, row13_family):
        for chis in galois_character_tuples(datum):
            assert dual_character_relation_check(datum, chis)


def test_pardini_specialization(flagship, row13_family):
    # r^j at m=1 equals deg_j L_{chi^{-1}} - 2.
    from fractions import Fraction

    for datum in (flagship, row13_family):
        comps = branch_data(datum)
        for chis in galois_character_tuples(datum):
            inv = tuple(
                Character(Q.neg(c.exponents))
                for c, Q in zip(chis, datum.quotient_groups)
            )
            deg_inv = [Fraction(0)] * datum.n
            for c in comps:
                k = k_exponent(datum, c.pair, inv)
                deg_inv[c.factor_index] += Fraction(k, c.order)
            e = eigensheaf_multidegree(datum, 1, chis)
            assert all(
                e.degrees[j] == -2 + deg_inv[j] for j in range(datum.n)
            )


def test_decomposition_requires_rational_quotients():
    G = make_group([2])
    triv = subgroup_generated(G, [])
    v = GeneratingVector(
        G, BranchingType(1, (2, 2)), ((0,), (0,)), ((1,), (1,))
    )
    d = AlgebraicDatum(G, (triv, triv), (v, v))
    with pytest.raises(ValidationError):
        branch_data(d)
