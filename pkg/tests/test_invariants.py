import pytest

from vipclass.chevalley_weil import curve_character
from vipclass.covers import AlgebraicDatum, BranchingType, GeneratingVector
from vipclass.decomposition import pluri_dimension
from vipclass.errors import ValidationError
from vipclass.groups import Character, make_group, subgroup_generated
from vipclass.invariants import (
    canonical_self_intersection,
    euler_char_sheaf,
    hodge_numbers,
    invariant_set,
    topological_euler,
)


def test_flagship_invariants(flagship):
    inv = invariant_set(flagship)
    assert inv.chi_o == -8
    assert inv.canonical_self_intersection == 384
    assert inv.euler_number == -64
    h30, h20, h10, h11, h21 = inv.hodge
    assert (h30, h20, h10) == (16, 7, 0)
    # chi(O) identity: chi = 1 - h10 + h20 - h30
    assert inv.chi_o == 1 - h10 + h20 - h30
    assert inv.euler_number == 2 - 4 * h10 + 4 * h20 - 2 * h30 + 2 * h11 - 2 * h21


def test_row1_invariants(row1_family):
    inv = invariant_set(row1_family)
    assert inv.chi_o == -1
    assert inv.hodge == (4, 2, 0, 7, 12)
    assert inv.euler_number == -8
    assert inv.canonical_self_intersection == 48


def test_row13_invariants(row13_family):
    inv = invariant_set(row13_family)
    assert inv.chi_o == -1
    assert inv.hodge == (4, 2, 0, 7, 12)
    assert inv.genera == (4, 4, 2)


def test_euler_divisibility_guard():
    # Two genus-2 curves with a Z/2 action on each: chi(O) would be 1/2.
    G = make_group([2])
    triv = subgroup_generated(G, [])
    v = GeneratingVector(G, BranchingType(0, (2,) * 6), (), ((1,),) * 6)
    d = AlgebraicDatum(G, (triv, triv), (v, v))
    with pytest.raises(ValidationError):
        euler_char_sheaf(d)
    assert topological_euler(d) == 2  # (2-4)(2-4)/2, divisible


def make_surface_datum():
    """A free surface datum over Z2^3: one 2^5 and one 2^6 vector with
    disjoint stabilizer sets (genera 3 and 5)."""
    from vipclass.classify import _group_context

    gc = _group_context((2, 2, 2))
    qc = gc.quotient_ctx(1)
    for v1 in qc.vectors_of_type((2,) * 5):
        for v2 in qc.vectors_of_type((2,) * 6):
            if qc.pmask(v1) & qc.pmask(v2) == 1:
                return AlgebraicDatum(
                    gc.group,
                    (qc.kernel, qc.kernel),
                    (
                        GeneratingVector(
                            qc.quotient, BranchingType(0, (2,) * 5), (),
                            tuple(qc.quotient.elements[i] for i in v1),
                        ),
                        GeneratingVector(
                            qc.quotient, BranchingType(0, (2,) * 6), (),
                            tuple(qc.quotient.elements[i] for i in v2),
                        ),
                    ),
                )
    raise RuntimeError("no free surface datum found")


def test_surface_k_squared():
    datum = make_surface_datum()
    chi = euler_char_sheaf(datum)
    assert chi == (1 - 3) * (1 - 5) // 8 == 1
    assert canonical_self_intersection(datum) == 8 * chi == 8


def test_hodge_h10_vanishes_for_rational_quotients(flagship, row13_family):
    assert hodge_numbers(flagship)[2] == 0
    assert hodge_numbers(row13_family)[2] == 0


def test_h30_equals_both_p1_routes(flagship, row1_family, row13_family):
    from vipclass.chevalley_weil import plurigenus_kuenneth

    for d in (flagship, row1_family, row13_family):
        h30 = hodge_numbers(d)[0]
        assert h30 == pluri_dimension(d, 1) == plurigenus_kuenneth(d, 1)


def test_conjugation_symmetry_of_curve_characters(flagship, row13_family):
    # multiplicity of chi in the conjugate character equals that of -chi.
    for datum in (flagship, row13_family):
        for V in datum.vectors:
            cc = curve_character(1, V)
            conj = cc.conjugate()
            G = V.group
            for c in G.elements:
                assert conj[Character(c)] == cc[Character(G.neg(c))]
