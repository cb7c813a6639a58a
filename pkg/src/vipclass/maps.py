"""Status of the m-canonical map: birational, non-birational, or undecided.

Two separation conditions drive the decision.  Condition (a) asks that the
characters appearing in the m-canonical representation separate the elements
of the Galois group of the cover of the product of lines; it is necessary
for birationality.  Condition (b) asks that for every factor some appearing
character has multidegree at least one there, so its sections separate base
points.  Together they are sufficient.  A few unconditional facts fill in
the rest: a genus-2 factor kills birationality of the bicanonical map, the
4-canonical map of a threefold with p_g >= 5 is birational, pluricanonical
maps of these threefolds are birational from m = 5 on, and for surfaces the
m-canonical map is an embedding from m = 3 on.

Reason strings are part of the stable output format; change them only with
the golden files.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .chevalley_weil import CharTuple, curve_character
from .covers import AlgebraicDatum, GeneratingVector, curve_genera
from .decomposition import base_point_free, constituent_tuples, pluri_dimension
from .errors import ConsistencyError, ValidationError
from .groups import Element, eval_character

STATUS_BIRATIONAL = "birational"
STATUS_NON_BIRATIONAL = "non-birational"
STATUS_UNKNOWN = "unknown"

REASON_SEPARATION = "separates group and base points"
REASON_NECESSARY_FAILS = "group separation fails (necessary criterion)"
REASON_GENUS_TWO = "genus-2 factor at m=2"
REASON_FOUR_CANONICAL = "4-canonical map with p_g >= 5"
REASON_THREEFOLD_BOUND = "threefold pluricanonical bound (m >= 5)"
REASON_SURFACE_EMBEDDING = "surface tricanonical embedding (m >= 3)"


@dataclass(frozen=True)
class MapAnalysis:
    """Everything decided about one m-canonical map."""

    m: int
    dimension: int
    bpf: bool
    separates_group: bool
    separates_base: bool
    status: str
    reason: str | None
    normalization_flag: bool

    def status_label(self) -> str:
        if self.status == STATUS_BIRATIONAL:
            return f"Birational ({self.reason})"
        if self.status == STATUS_NON_BIRATIONAL:
            return f"NonBirational ({self.reason})"
        return "Unknown"


def _galois_classes(datum: AlgebraicDatum) -> list[tuple[Element, ...]]:
    """One representative per class of the Galois group (identity included)."""
    groups = datum.quotient_groups
    projections = datum.projections
    embedded = sorted(
        {tuple(pr.map(g) for pr in projections) for g in datum.group.elements}
    )
    seen: set[tuple[Element, ...]] = set()
    reps = []
    for combo in iproduct(*(Q.elements for Q in groups)):
        if combo in seen:
            continue
        coset = {
            tuple(Q.add(a, b) for Q, a, b in zip(groups, combo, emb))
            for emb in embedded
        }
        seen |= coset
        reps.append(min(coset))
    return reps


def separates_group(datum: AlgebraicDatum, m: int) -> bool:
    """Condition (a): the appearing characters separate the Galois group.

    True iff for every non-identity class of the Galois group some pair of
    constituents takes different values there.
    """
    from .fastpath import datum_tables

    constituents = constituent_tuples(datum, m)
    if len(constituents) == 0:
        return False
    groups = datum.quotient_groups
    tables = datum_tables(datum)
    constituent_indices = [
        tuple(Q.element_index(chi.exponents) for Q, chi in zip(groups, chis))
        for chis in constituents
    ]
    identity = tuple(Q.identity for Q in groups)
    for rep in _galois_classes(datum):
        if rep == identity:
            continue
        rep_idx = tuple(Q.element_index(u) for Q, u in zip(groups, rep))
        first = tables.value_num(constituent_indices[0], rep_idx)
        if all(
            tables.value_num(ci, rep_idx) == first
            for ci in constituent_indices[1:]
        ):
            return False
    return True


def separates_base(datum: AlgebraicDatum, m: int) -> bool:
    """Condition (b): every factor sees a constituent with multidegree >= 1."""
    from .decomposition import _eigensheaf_table

    table = _eigensheaf_table(datum, m)
    degrees = [deg for deg, _ in table.values() if all(r >= 0 for r in deg)]
    if not degrees:
        return False
    return all(any(deg[j] >= 1 for deg in degrees) for j in range(datum.n))


def map_status(
    datum: AlgebraicDatum, m: int, use_genus2_rule: bool = True
) -> MapAnalysis:
    """Combine the separation criteria with the unconditional rules.

    Any simultaneous firing of a birational rule and a non-birational rule is
    a mathematical contradiction and raises a consistency error rather than
    being resolved by precedence.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    sep_a = separates_group(datum, m)
    sep_b = separates_base(datum, m)
    dim = pluri_dimension(datum, m)
    bpf = base_point_free(datum, m)
    genera = curve_genera(datum)
    n = datum.n
    p1 = pluri_dimension(datum, 1)

    birational_rules = []
    if sep_a and sep_b:
        birational_rules.append(REASON_SEPARATION)
    if n == 3 and m == 4 and p1 >= 5:
        birational_rules.append(REASON_FOUR_CANONICAL)
    if n == 3 and m >= 5:
        birational_rules.append(REASON_THREEFOLD_BOUND)
    if n == 2 and m >= 3:
        birational_rules.append(REASON_SURFACE_EMBEDDING)

    non_birational_rules = []
    if not sep_a:
        non_birational_rules.append(REASON_NECESSARY_FAILS)
    if use_genus2_rule and m == 2 and min(genera) == 2:
        non_birational_rules.append(REASON_GENUS_TWO)

    if birational_rules and non_birational_rules:
        raise ConsistencyError(
            f"contradictory birationality verdicts at m={m}: "
            f"{birational_rules} vs {non_birational_rules}"
        )
    if birational_rules:
        status, reason = STATUS_BIRATIONAL, birational_rules[0]
    elif non_birational_rules:
        status, reason = STATUS_NON_BIRATIONAL, non_birational_rules[0]
    else:
        status, reason = STATUS_UNKNOWN, None
    return MapAnalysis(
        m=m,
        dimension=dim,
        bpf=bpf,
        separates_group=sep_a,
        separates_base=sep_b,
        status=status,
        reason=reason,
        normalization_flag=bpf and status == STATUS_BIRATIONAL,
    )


def certify_non_hyperelliptic(V: GeneratingVector) -> bool:
    """Certify that the curve of a generating vector is not hyperelliptic.

    If it were, the hyperelliptic involution would act as -1 on all
    holomorphic differentials.  When no group element does so, the group
    embeds into the automorphisms of the quotient line, which for an abelian
    group forces it to be cyclic or a Klein four-group.  The certificate is
    one-sided: False means undecided, never "hyperelliptic".
    """
    G = V.group
    factors = G.invariant_factors
    is_cyclic = len(factors) <= 1
    is_klein = factors == (2, 2)
    if is_cyclic or is_klein:
        return False
    cc = curve_character(1, V)
    constituents = [chi for chi, mult in cc.mults.items() if mult > 0]
    half = Fraction(1, 2)
    for g in G.elements:
        if all(
            eval_character(G, chi, g).as_fraction() == half for chi in constituents
        ):
            return False  # some element acts as -identity; inconclusive
    return True
