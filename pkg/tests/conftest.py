import json
from pathlib import Path

import pytest

from vipclass.classify import _group_context, _materialize, _search_shape
from vipclass.covers import AlgebraicDatum, BranchingType, GeneratingVector
from vipclass.groups import make_group, subgroup_generated

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def zzz_datum() -> AlgebraicDatum:
    """The chi = -8 threefold over (Z/2)^3 with birational canonical map."""
    G = make_group([2, 2, 2])
    triv = subgroup_generated(G, [])
    T = BranchingType(0, (2,) * 6)

    def s(*xs):
        out = (0, 0, 0)
        for x in xs:
            out = G.add(out, x)
        return out

    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    v1 = GeneratingVector(G, T, (), (e1, e1, e2, e2, e3, e3))
    v2 = GeneratingVector(
        G, T, (), (s(e1, e3), s(e1, e3), s(e1, e2), s(e1, e2), s(e1, e2, e3), s(e1, e2, e3))
    )
    v3 = GeneratingVector(
        G, T, (), (s(e1, e3), s(e1, e3), s(e2, e3), s(e2, e3), s(e1, e2, e3), s(e1, e2, e3))
    )
    return AlgebraicDatum(G, (triv, triv, triv), (v1, v2, v3))


@pytest.fixture(scope="session")
def flagship():
    return zzz_datum()


@pytest.fixture(scope="session")
def flagship_file(tmp_path_factory):
    src = DATA_DIR / "chi8_birational_example.json"
    return str(src)


@pytest.fixture(scope="session")
def row1_family():
    """A (Z/2)^3, trivial-kernel, 2^5-type family with Hodge (4,2,0,7,12)."""
    from vipclass.invariants import hodge_numbers

    gc = _group_context((2, 2, 2))
    kms = (1, 1, 1)
    tys = ((2,) * 5,) * 3
    for vecs in _search_shape(gc, kms, tys):
        datum = _materialize(gc, kms, tys, vecs)
        if hodge_numbers(datum) == (4, 2, 0, 7, 12):
            return datum
    raise RuntimeError("row-1 family not found")


@pytest.fixture(scope="session")
def row13_family():
    """A (Z/3)^2 family with kernel orders (1,1,3) and types 3^4."""
    gc = _group_context((3, 3))
    k3 = subgroup_generated(gc.group, [(0, 1)]).mask
    kms = (1, 1, k3)
    tys = ((3,) * 4,) * 3
    fams = _search_shape(gc, kms, tys)
    assert fams, "expected a (Z/3)^2 family"
    return _materialize(gc, kms, tys, fams[0])


def write_datum(tmp_path, payload, name="datum.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def full_classification():
    """The complete chi = -1, |G| <= 16 classification with m = 1..5.

    Shared between the classification tests and the acceptance suite; this
    is the expensive fixture of the test run (a few minutes).
    """
    from vipclass.classify import SearchSpec, classify

    return classify(
        SearchSpec(chi=-1, max_group_order=16, m_range=(1, 2, 3, 4, 5))
    )
