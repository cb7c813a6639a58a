from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from vipclass.errors import ValidationError
from vipclass.groups import (
    Character,
    QZValue,
    abelianize,
    automorphisms,
    characters,
    cyclic_subgroups,
    element_order,
    eval_character,
    make_group,
    quotient,
    subgroup_generated,
)

SMALL_FACTORS = [(2,), (3,), (4,), (2, 2), (2, 4), (2, 2, 2), (3, 3), (2, 6), (8,)]
groups_strategy = st.sampled_from([make_group(f) for f in SMALL_FACTORS])


def test_make_group_orders():
    assert make_group([2, 2, 2]).order == 8
    G = make_group([2, 4])
    assert G.order == 8 and G.exponent == 4
    assert make_group([]).order == 1
    assert make_group([1, 2]).invariant_factors == (2,)


def test_make_group_rejects_broken_chain():
    with pytest.raises(ValidationError):
        make_group([4, 2])
    with pytest.raises(ValidationError):
        make_group([2, 3])
    make_group([2, 6])  # valid chain


def test_element_order():
    G = make_group([2, 2, 2])
    assert element_order(G, (0, 0, 0)) == 1
    assert element_order(G, (1, 0, 0)) == 2
    G2 = make_group([2, 4])
    assert element_order(G2, (1, 1)) == 4
    assert element_order(G2, (1, 2)) == 2


def test_characters_count_and_values():
    G = make_group([2, 2, 2])
    chars = characters(G)
    assert len(chars) == 8
    chi = Character((1, 1, 1))
    assert eval_character(G, chi, (1, 0, 0)) == QZValue(1, 2)
    triv = Character((0, 0, 0))
    for g in G.elements:
        assert eval_character(G, triv, g).is_zero()


@given(groups_strategy)
@settings(max_examples=20, deadline=None)
def test_character_additivity(G):
    for chi in characters(G)[: min(6, G.order)]:
        for g in G.elements[:4]:
            for h in G.elements[:4]:
                lhs = eval_character(G, chi, G.add(g, h))
                rhs = eval_character(G, chi, g) + eval_character(G, chi, h)
                assert lhs == rhs


@given(groups_strategy)
@settings(max_examples=12, deadline=None)
def test_character_orthogonality_as_value_multiset(G):
    # For chi != chi', the differences chi(g) - chi'(g) hit every multiple of
    # 1/ord(chi - chi') equally often.
    chars = characters(G)
    for chi in chars[:3]:
        for chip in chars[:3]:
            if chi == chip:
                continue
            diff_char = Character(G.neg(chip.exponents))
            diff = Character(G.add(chi.exponents, diff_char.exponents))
            order = element_order(G, diff.exponents)
            values = [eval_character(G, diff, g).as_fraction() for g in G.elements]
            for k in range(order):
                target = Fraction(k, order)
                assert values.count(target) == G.order // order


def test_subgroup_generated():
    G = make_group([2, 2, 2])
    assert subgroup_generated(G, []).order == 1
    assert subgroup_generated(G, [(1, 0, 0)]).order == 2
    G2 = make_group([2, 4])
    assert subgroup_generated(G2, [(1, 0), (0, 1)]).order == 8


def test_quotient_brute_force_cosets():
    G = make_group([2, 2, 2])
    K = subgroup_generated(G, [(1, 1, 1)])
    Q, pr = quotient(G, K)
    assert Q.invariant_factors == (2, 2)
    # coset count by brute force
    cosets = {tuple(sorted(G.add(g, k) for k in K.elements)) for g in G.elements}
    assert len(cosets) == 4 == Q.order


def test_quotient_identity_and_full():
    G = make_group([2, 4])
    triv = subgroup_generated(G, [])
    Q, pr = quotient(G, triv)
    assert Q.invariant_factors == G.invariant_factors
    assert all(pr.map(g) in Q.elements for g in G.elements)
    full = subgroup_generated(G, [(1, 0), (0, 1)])
    Q2, _ = quotient(G, full)
    assert Q2.order == 1


@pytest.mark.parametrize("factors", SMALL_FACTORS)
def test_quotient_kernel_exactness(factors):
    G = make_group(factors)
    for K in cyclic_subgroups(G):
        Q, pr = quotient(G, K)
        kernel = {g for g in G.elements if pr.map(g) == Q.identity}
        assert kernel == set(K.elements)
        # surjectivity
        assert {pr.map(g) for g in G.elements} == set(Q.elements)
        # homomorphism
        for g in G.elements[:4]:
            for h in G.elements[:4]:
                assert pr.map(G.add(g, h)) == Q.add(pr.map(g), pr.map(h))


def test_cyclic_subgroups_counts():
    assert len(cyclic_subgroups(make_group([2, 2, 2]))) == 8
    assert len(cyclic_subgroups(make_group([4]))) == 3
    # Brute-force oracle: generate <g> for every g, dedup by element set.
    G = make_group([2, 4])
    by_set = {subgroup_generated(G, [g]).elements for g in G.elements}
    assert len(cyclic_subgroups(G)) == len(by_set) == 6


@pytest.mark.parametrize("factors", SMALL_FACTORS)
def test_cyclic_subgroups_match_brute_force(factors):
    G = make_group(factors)
    by_set = {subgroup_generated(G, [g]).elements for g in G.elements}
    subs = cyclic_subgroups(G)
    assert {s.elements for s in subs} == by_set
    # canonical generator: lexicographically least of maximal order
    for s in subs:
        top = max(element_order(G, g) for g in s.elements)
        best = min(g for g in s.elements if element_order(G, g) == top)
        assert s.generators == (best,)


def test_automorphism_counts():
    assert len(automorphisms(make_group([2, 2, 2]))) == 168
    assert len(automorphisms(make_group([4]))) == 2
    assert len(automorphisms(make_group([]))) == 1
    assert len(automorphisms(make_group([2, 4]))) == 8
    with pytest.raises(ValidationError):
        automorphisms(make_group([2, 2, 2, 2, 2]), max_order=16)


def test_automorphisms_are_bijective_homomorphisms():
    G = make_group([2, 4])
    for phi in automorphisms(G):
        assert sorted(phi.perm) == list(range(G.order))
        for g in G.elements:
            for h in G.elements:
                assert phi(G.add(g, h)) == G.add(phi(g), phi(h))


def test_abelianize():
    assert abelianize([[2, 0, 0], [0, 2, 0], [0, 0, 2]]).invariant_factors == (2, 2, 2)
    assert abelianize([[2, 0], [0, 6]]).invariant_factors == (2, 6)
    assert abelianize([[4, 0], [0, 6]]).invariant_factors == (2, 12)
    assert abelianize([[3, 1], [1, 3]]).invariant_factors == (8,)
    with pytest.raises(ValidationError):
        abelianize([[2, 0]])  # infinite quotient


def test_qz_value_arithmetic():
    a = QZValue.make(3, 4)
    b = QZValue.make(1, 2)
    assert a + b == QZValue(1, 4)
    assert -a == QZValue(1, 4)
    assert (a - a).is_zero()
    assert QZValue.make(7, 4) == QZValue(3, 4)
    assert a.order == 4


@given(st.integers(-20, 20), st.integers(1, 12), st.integers(-20, 20), st.integers(1, 12))
@settings(max_examples=60, deadline=None)
def test_qz_matches_fraction_arithmetic(n1, d1, n2, d2):
    a = QZValue.make(n1, d1)
    b = QZValue.make(n2, d2)
    expected = Fraction(n1, d1) + Fraction(n2, d2)
    expected -= int(expected)
    if expected < 0:
        expected += 1
    assert (a + b).as_fraction() == expected
