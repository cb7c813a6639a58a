"""Generating vectors, branching types, and algebraic data of curve quotients.

A branched Galois cover C -> C/H with quotient genus g' and branching indices
n_1 <= ... <= n_r is encoded by a generating vector: a tuple of 2g' + r group
elements generating H whose product relation holds and whose last r entries
have orders exactly n_i.  For abelian H the commutators vanish, so the product
relation collapses to "the branch entries sum to zero".

An algebraic datum bundles one generating vector per factor of the product
together with the kernels of the per-factor actions; validity means each
vector generates its quotient, the kernels form a minimal realization, and
the induced action on the product is free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from .errors import ValidationError
from .groups import (
    AbelianGroup,
    Element,
    QuotientMap,
    Subgroup,
    element_order,
    quotient,
    subgroup_generated,
)

_TYPE_RE = re.compile(r"^\[\s*(\d+)\s*;\s*([0-9,\s]*)\]$")


@dataclass(frozen=True)
class BranchingType:
    """Quotient genus g' plus the sorted branching indices n_1 <= ... <= n_r."""

    genus_prime: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.genus_prime < 0:
            raise ValidationError("quotient genus must be >= 0")
        if any(n < 2 for n in self.indices):
            raise ValidationError("branching indices must be >= 2")
        if tuple(sorted(self.indices)) != self.indices:
            raise ValidationError("branching indices must be sorted nondecreasing")

    @property
    def num_branch_points(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        inner = ",".join(str(n) for n in self.indices)
        return f"[{self.genus_prime}; {inner}]"

    @staticmethod
    def parse(text: str) -> "BranchingType":
        m = _TYPE_RE.match(text.strip())
        if not m:
            raise ValidationError(f"cannot parse branching type {text!r}")
        gp = int(m.group(1))
        body = m.group(2).strip()
        indices = tuple(int(p) for p in body.split(",")) if body else ()
        return BranchingType(gp, indices)


def hurwitz_genus(group_order: int, btype: BranchingType) -> int:
    """Genus of the cover from 2g - 2 = |H| (2g' - 2 + sum (n_i - 1)/n_i).

    Rejects combinations where the right-hand side is odd, fractional, or
    forces g < 0; those branching types are inadmissible for that order.
    """
    if group_order < 1:
        raise ValidationError("group order must be positive")
    rhs = Fraction(2 * btype.genus_prime - 2)
    for n in btype.indices:
        rhs += Fraction(n - 1, n)
    rhs *= group_order
    if rhs.denominator != 1:
        raise ValidationError(
            f"non-integral Hurwitz genus for order {group_order}, type {btype}"
        )
    val = rhs.numerator
    if val % 2 != 0:
        raise ValidationError(
            f"odd Hurwitz value {val} for order {group_order}, type {btype}"
        )
    g = val // 2 + 1
    if g < 0:
        raise ValidationError(
            f"negative Hurwitz genus for order {group_order}, type {btype}"
        )
    return g


@dataclass(frozen=True)
class GeneratingVector:
    """A (2g'+r)-tuple over the faithfully acting group of one factor."""

    group: AbelianGroup
    btype: BranchingType
    hyperbolic_pairs: tuple[Element, ...]
    branch_elements: tuple[Element, ...]

    def __post_init__(self):
        if len(self.hyperbolic_pairs) != 2 * self.btype.genus_prime:
            raise ValidationError(
                "need 2g' hyperbolic entries for quotient genus g'"
            )
        if len(self.branch_elements) != self.btype.num_branch_points:
            raise ValidationError("branch entry count does not match the type")
        for g in self.hyperbolic_pairs + self.branch_elements:
            if not self.group.contains(g):
                raise ValidationError(f"{g} is not an element of {self.group}")

    @property
    def genus(self) -> int:
        return hurwitz_genus(self.group.order, self.btype)

    def entries(self) -> tuple[Element, ...]:
        return self.hyperbolic_pairs + self.branch_elements


def is_generating_vector(G: AbelianGroup, V: GeneratingVector) -> tuple[bool, str | None]:
    """Check generation, the product-one relation, and the order conditions.

    Returns (True, None) or (False, reason).  For abelian groups the
    commutators in the product relation vanish, so it reduces to the branch
    entries summing to zero.
    """
    if V.group != G:
        return False, "vector is defined over a different group"
    for i, (h, n) in enumerate(zip(V.branch_elements, V.btype.indices)):
        if element_order(G, h) != n:
            return False, f"entry {i} has order {element_order(G, h)}, expected {n}"
    total = G.identity
    for h in V.branch_elements:
        total = G.add(total, h)
    if total != G.identity:
        return False, "branch entries do not sum to zero"
    span = subgroup_generated(G, list(V.entries()))
    if span.order != G.order:
        return False, "entries do not generate the group"
    return True, None


def enumerate_generating_vectors(
    G: AbelianGroup, btype: BranchingType
) -> Iterator[GeneratingVector]:
    """All generating vectors of the given type, in lexicographic order.

    Only quotient genus 0 is supported here (the classification is of regular
    quotients); data with g' > 0 can still be built from files and fed to the
    character machinery.
    """
    if btype.genus_prime != 0:
        raise ValidationError("vector enumeration only supports quotient genus 0")
    r = btype.num_branch_points
    order_tab = G.order_table
    add_tab = G.add_table
    neg_tab = G.neg_table
    els = G.elements
    n_el = len(els)
    pool = [
        [i for i in range(n_el) if order_tab[i] == n] for n in btype.indices
    ]
    # Span of every element usable at positions >= p; prunes branches whose
    # partial span can no longer grow to the whole group.
    suffix_span_order = [0] * (r + 1)
    suffix_span_order[r] = 1
    for p in range(r - 1, -1, -1):
        gens = sorted({i for q in range(p, r) for i in pool[q]})
        suffix_span_order[p] = subgroup_generated(G, [els[i] for i in gens]).order

    span_cache: dict[frozenset[int], frozenset[int]] = {}

    def close(span: frozenset[int], g: int) -> frozenset[int]:
        if g in span:
            return span
        key = span | {g}
        cached = span_cache.get(key)
        if cached is not None:
            return cached
        out = set(span)
        frontier = [g]
        out.add(g)
        while frontier:
            nxt = []
            for a in frontier:
                row = add_tab[a]
                for b in list(out):
                    c = row[b]
                    if c not in out:
                        out.add(c)
                        nxt.append(c)
            frontier = nxt
        res = frozenset(out)
        span_cache[key] = res
        return res

    full = G.order
    id_span = frozenset([0])

    def rec(pos: int, chosen: list[int], total: int, span: frozenset[int]):
        if pos == r - 1:
            last = neg_tab[total]
            if order_tab[last] == btype.indices[-1]:
                if len(close(span, last)) == full:
                    yield tuple(chosen) + (last,)
            return
        for g in pool[pos]:
            nspan = close(span, g)
            if len(nspan) * suffix_span_order[pos + 1] < full:
                continue
            yield from rec(pos + 1, chosen + [g], add_tab[total][g], nspan)

    if r == 0:
        if full == 1:
            yield GeneratingVector(G, btype, (), ())
        return
    for idxs in rec(0, [], 0, id_span):
        yield GeneratingVector(G, btype, (), tuple(els[i] for i in idxs))


def stabilizer_set(V: GeneratingVector) -> frozenset[Element]:
    """Elements with fixed points on the curve: the union of the <h_i>."""
    out = {V.group.identity}
    for h in V.branch_elements:
        out.update(subgroup_generated(V.group, [h]).elements)
    return frozenset(out)


@dataclass(frozen=True)
class AlgebraicDatum:
    """Group, per-factor kernels, and one generating vector per factor.

    Vector i lives over the quotient G_i = G/K_i in the canonical coordinates
    produced by :func:`vipclass.groups.quotient`.
    """

    group: AbelianGroup
    kernels: tuple[Subgroup, ...]
    vectors: tuple[GeneratingVector, ...]

    def __post_init__(self):
        if len(self.kernels) != len(self.vectors):
            raise ValidationError("need one kernel per vector")
        if len(self.vectors) < 2:
            raise ValidationError("an algebraic datum needs at least two factors")
        for K in self.kernels:
            if K.parent != self.group:
                raise ValidationError("kernel does not live in the ambient group")

    @property
    def n(self) -> int:
        return len(self.vectors)

    @cached_property
    def projections(self) -> tuple[QuotientMap, ...]:
        maps = []
        for K, V in zip(self.kernels, self.vectors):
            Q, pr = quotient(self.group, K)
            if Q != V.group:
                raise ValidationError(
                    f"vector group {V.group} does not match quotient {Q}"
                )
            maps.append(pr)
        return tuple(maps)

    @property
    def quotient_groups(self) -> tuple[AbelianGroup, ...]:
        return tuple(pr.target for pr in self.projections)

    @cached_property
    def types(self) -> tuple[BranchingType, ...]:
        return tuple(V.btype for V in self.vectors)


def is_minimal_realization(kernels: tuple[Subgroup, ...] | list[Subgroup]) -> bool:
    """True iff every intersection of all-but-one kernel is trivial."""
    kernels = list(kernels)
    if not kernels:
        return True
    G = kernels[0].parent
    full = (1 << G.order) - 1
    for i in range(len(kernels)):
        inter = full
        for j, K in enumerate(kernels):
            if j != i:
                inter &= K.mask
        if inter != 1:
            return False
    return True


def _stabilizer_preimage_mask(datum: AlgebraicDatum, i: int) -> int:
    """Bitmask over G of the full preimage of the stabilizer set of vector i."""
    pr = datum.projections[i]
    sigma = stabilizer_set(datum.vectors[i])
    sigma_idx = {pr.target.element_index(q) for q in sigma}
    mask = 0
    for gi, qi in enumerate(pr.index_map):
        if qi in sigma_idx:
            mask |= 1 << gi
    return mask


def is_free_action(datum: AlgebraicDatum) -> bool:
    """Freeness of the product action: the preimages of the stabilizer sets
    intersect only in the identity."""
    inter = (1 << datum.group.order) - 1
    for i in range(datum.n):
        inter &= _stabilizer_preimage_mask(datum, i)
        if inter == 1:
            return True
    return inter == 1


def curve_genera(datum: AlgebraicDatum) -> tuple[int, ...]:
    """Per-factor genera via the Hurwitz formula; every factor must have g >= 2."""
    out = []
    for Q, V in zip(datum.quotient_groups, datum.vectors):
        g = hurwitz_genus(Q.order, V.btype)
        if g < 2:
            raise ValidationError(
                f"factor of genus {g} < 2: not isogenous to a higher product"
            )
        out.append(g)
    return tuple(out)


def validate_datum(datum: AlgebraicDatum) -> None:
    """Raise ValidationError naming the first violated admissibility condition."""
    for i, (Q, V) in enumerate(zip(datum.quotient_groups, datum.vectors)):
        ok, reason = is_generating_vector(Q, V)
        if not ok:
            raise ValidationError(f"vector {i + 1}: {reason}")
    if not is_minimal_realization(datum.kernels):
        raise ValidationError(
            "kernels are not a minimal realization "
            "(some intersection of all-but-one kernel is non-trivial)"
        )
    curve_genera(datum)
    if not is_free_action(datum):
        shared = _shared_stabilizer(datum)
        raise ValidationError(f"freeness violated: shared stabilizer {shared}")


def _shared_stabilizer(datum: AlgebraicDatum) -> Element:
    inter = (1 << datum.group.order) - 1
    for i in range(datum.n):
        inter &= _stabilizer_preimage_mask(datum, i)
    inter &= ~1
    g_idx = inter.bit_length() - 1
    return datum.group.elements[g_idx]
