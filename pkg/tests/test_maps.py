import pytest

from vipclass.errors import ValidationError
from vipclass.maps import (
    REASON_FOUR_CANONICAL,
    REASON_GENUS_TWO,
    REASON_NECESSARY_FAILS,
    REASON_SEPARATION,
    REASON_SURFACE_EMBEDDING,
    REASON_THREEFOLD_BOUND,
    STATUS_BIRATIONAL,
    STATUS_NON_BIRATIONAL,
    STATUS_UNKNOWN,
    certify_non_hyperelliptic,
    map_status,
    separates_base,
    separates_group,
)


def test_flagship_canonical(flagship):
    assert separates_group(flagship, 1)
    assert separates_base(flagship, 1)
    ms = map_status(flagship, 1)
    assert ms.status == STATUS_BIRATIONAL
    assert ms.reason == REASON_SEPARATION
    assert ms.bpf and ms.normalization_flag
    assert ms.dimension == 16


def test_flagship_higher_m(flagship):
    ms5 = map_status(flagship, 5)
    assert ms5.status == STATUS_BIRATIONAL
    # separation fires first; the unconditional bound also holds
    assert ms5.reason == REASON_SEPARATION
    assert ms5.separates_group and ms5.separates_base


def test_row1_statuses(row1_family):
    ms1 = map_status(row1_family, 1)
    assert ms1.status == STATUS_NON_BIRATIONAL
    assert ms1.reason == REASON_NECESSARY_FAILS
    assert not ms1.bpf and not ms1.normalization_flag
    ms2 = map_status(row1_family, 2)
    assert ms2.status == STATUS_BIRATIONAL and ms2.bpf


def test_row13_bicanonical(row13_family):
    # Genus-2 factor: separation criterion (a) holds, (b) fails, and the
    # genus rule resolves the status to non-birational.
    assert separates_group(row13_family, 2)
    assert not separates_base(row13_family, 2)
    ms = map_status(row13_family, 2)
    assert ms.status == STATUS_NON_BIRATIONAL
    assert ms.reason == REASON_GENUS_TWO
    ms_plain = map_status(row13_family, 2, use_genus2_rule=False)
    assert ms_plain.status == STATUS_UNKNOWN
    assert ms_plain.reason is None


def test_row13_tricanonical_fires(row13_family):
    ms3 = map_status(row13_family, 3)
    assert ms3.status == STATUS_BIRATIONAL
    assert ms3.reason == REASON_SEPARATION


def test_reason_strings_are_stable():
    golden = {
        REASON_SEPARATION: "separates group and base points",
        REASON_NECESSARY_FAILS: "group separation fails (necessary criterion)",
        REASON_GENUS_TWO: "genus-2 factor at m=2",
        REASON_FOUR_CANONICAL: "4-canonical map with p_g >= 5",
        REASON_THREEFOLD_BOUND: "threefold pluricanonical bound (m >= 5)",
        REASON_SURFACE_EMBEDDING: "surface tricanonical embedding (m >= 3)",
    }
    for value, expected in golden.items():
        assert value == expected


def test_status_label_format(flagship):
    ms = map_status(flagship, 1)
    assert ms.status_label() == "Birational (separates group and base points)"


def test_m_validation(flagship):
    with pytest.raises(ValidationError):
        map_status(flagship, 0)


def test_certify_non_hyperelliptic(flagship):
    assert certify_non_hyperelliptic(flagship.vectors[0])
    # cyclic groups embed into automorphisms of the line: inconclusive
    from vipclass.covers import BranchingType, GeneratingVector, enumerate_generating_vectors
    from vipclass.groups import make_group

    Z6 = make_group([6])
    v = next(iter(enumerate_generating_vectors(Z6, BranchingType(0, (2, 2, 3, 3)))))
    assert not certify_non_hyperelliptic(v)
    # Klein four-groups are dihedral inside PGL2: inconclusive
    Z22 = make_group([2, 2])
    w = next(iter(enumerate_generating_vectors(Z22, BranchingType(0, (2,) * 5))))
    assert not certify_non_hyperelliptic(w)


def test_unconditional_rules_on_surface_datum():
    from tests.test_invariants import make_surface_datum

    datum = make_surface_datum()
    ms3 = map_status(datum, 3)
    assert ms3.status == STATUS_BIRATIONAL
    assert ms3.reason in (REASON_SEPARATION, REASON_SURFACE_EMBEDDING)
    ms4 = map_status(datum, 4)
    assert ms4.status == STATUS_BIRATIONAL
