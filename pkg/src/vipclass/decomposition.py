"""Eigensheaf decomposition of pluricanonical systems over a product of lines.

The quotient variety X of a curve product by a free abelian action covers
Y = (P^1)^n whenever every quotient curve is rational.  The pushforward of
K_X^m splits into line-bundle eigensheaves indexed by characters chi of the
Galois group of that cover, and each eigensheaf is a multidegree
O_Y(r^1, ..., r^n).  This module extracts the branch data of the cover from
an algebraic datum, computes the exponent triple (k, r, mu) attached to a
cyclic stabilizer with its distinguished character, assembles the
multidegrees, and decides base-point-freeness of |K_X^m|.

Branch components are grouped by their stabilizer/character pair; for these
covers that pair is the same thing as the class in the Galois group of the
embedded local monodromy, so components are keyed by that class.  Two
components in different factors can share a class when kernels are
non-trivial, and the grouping below handles that.

Exponent arithmetic, for a cyclic stabilizer of order h and the unique
0 <= k <= h-1 with chi restricted to the stabilizer the k-th power of the
distinguished generator character:

    r(m)  = k - m + ceil((m-k)/h) * h        (in {0, ..., h-1})
    mu(m) = m - ceil((m-k)/h)                (in {0, ..., m})

and the multidegree of the chi-eigensheaf of K_X^m is, per factor j,

    r^j = -2m + sum over branch points i of factor j of (mu_ij - k_ij/n_ij),

where the per-factor sums of k/n are the integral degrees of the character's
building-data line bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .chevalley_weil import CharTuple, galois_character_tuples
from .covers import AlgebraicDatum, curve_genera, is_free_action, validate_datum
from .errors import ConsistencyError, ValidationError
from .groups import Character, Element, eval_character

ClassKey = tuple[Element, ...]


@dataclass(frozen=True)
class StabPair:
    """A cyclic stabilizer subgroup with its distinguished generator character.

    ``key`` is the lexicographically least member of the class (a coset of the
    embedded ambient group) of the embedded local monodromy; the pair (H, psi)
    is recovered from it, and two branch components carry the same pair
    exactly when their keys agree.  ``order`` is |H|.
    """

    order: int
    key: ClassKey


@dataclass(frozen=True)
class BranchComponent:
    """One branch divisor of the cover: point ``point_index`` in factor
    ``factor_index``, with its local monodromy and stabilizer pair."""

    factor_index: int
    point_index: int
    monodromy: Element
    order: int
    pair: StabPair


@dataclass(frozen=True)
class EigensheafDegrees:
    """Multidegree of the chi-eigensheaf of the pushforward of K_X^m."""

    chis: CharTuple
    m: int
    degrees: tuple[int, ...]

    @property
    def sections(self) -> int:
        total = 1
        for r in self.degrees:
            total *= max(r + 1, 0)
        return total


def _embedded_coset_key(datum: AlgebraicDatum, factor: int, h: Element) -> ClassKey:
    """Canonical key of the class of (1,...,h,...,1) modulo the embedded group."""
    groups = datum.quotient_groups
    projections = datum.projections
    emb = [Q.identity for Q in groups]
    emb[factor] = h
    best: ClassKey | None = None
    for g in datum.group.elements:
        member = tuple(
            Q.add(e, pr.map(g)) for Q, e, pr in zip(groups, emb, projections)
        )
        if best is None or member < best:
            best = member
    assert best is not None
    return best


@lru_cache(maxsize=1024)
def branch_data(datum: AlgebraicDatum) -> tuple[BranchComponent, ...]:
    """All branch components of the cover of the product of lines.

    Requires a valid free datum whose quotient curves are all rational.
    """
    for V in datum.vectors:
        if V.btype.genus_prime != 0:
            raise ValidationError(
                "eigensheaf decomposition needs all quotient curves rational"
            )
    if not is_free_action(datum):
        raise ValidationError("datum does not act freely")
    out = []
    for j, V in enumerate(datum.vectors):
        for i, (h, n) in enumerate(zip(V.branch_elements, V.btype.indices)):
            key = _embedded_coset_key(datum, j, h)
            out.append(
                BranchComponent(
                    factor_index=j,
                    point_index=i,
                    monodromy=h,
                    order=n,
                    pair=StabPair(n, key),
                )
            )
    return tuple(out)


def k_exponent(datum: AlgebraicDatum, pair: StabPair, chis: CharTuple) -> int:
    """The unique 0 <= k < |H| with chi restricted to H the k-th power of psi."""
    total = Fraction(0)
    for chi, Q, member in zip(chis, datum.quotient_groups, pair.key):
        total += eval_character(Q, chi, member).as_fraction()
    total -= int(total)  # reduce mod 1, keeping exactness
    if total < 0:
        total += 1
    scaled = total * pair.order
    if scaled.denominator != 1:
        raise ConsistencyError(
            f"character value {total} has denominator not dividing {pair.order}"
        )
    return int(scaled) % pair.order


def r_mu(m: int, order: int, k: int) -> tuple[int, int]:
    """The twist exponent r and divisor multiplier mu for one stabilizer pair."""
    if m < 0:
        raise ValidationError("m must be >= 0")
    if not 0 <= k < order:
        raise ValidationError(f"k must lie in [0, {order}), got {k}")
    ceil_term = -((k - m) // order)  # ceil((m-k)/order) for exact ints
    r = k - m + ceil_term * order
    mu = m - ceil_term
    return r, mu


@lru_cache(maxsize=4096)
def _eigensheaf_table(
    datum: AlgebraicDatum, m: int
) -> dict[CharTuple, tuple[tuple[int, ...], dict[StabPair, int]]]:
    """chi -> (multidegree, r-exponent per stabilizer pair).

    Runs on integer numerators over the common denominator of the factor
    exponents; the per-factor degree of the building-data line bundle must
    clear that denominator, which is asserted.
    """
    from .fastpath import datum_tables

    comps = branch_data(datum)
    groups = datum.quotient_groups
    n = datum.n
    tables = datum_tables(datum)
    L = tables.denominator
    chis_list = galois_character_tuples(datum)
    # distinct stabilizer pairs with the element indices of their key
    pairs: list[tuple[StabPair, tuple[int, ...]]] = []
    seen_pairs = set()
    for comp in comps:
        if comp.pair not in seen_pairs:
            seen_pairs.add(comp.pair)
            key_idx = tuple(
                Q.element_index(member)
                for Q, member in zip(groups, comp.pair.key)
            )
            pairs.append((comp.pair, key_idx))
    # component layout per factor: (pair position, order), with the lcm of
    # the orders as the common degree denominator of that factor
    pair_pos = {pair: i for i, (pair, _) in enumerate(pairs)}
    per_factor: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for comp in comps:
        per_factor[comp.factor_index].append((pair_pos[comp.pair], comp.order))
    factor_den = [
        lcm(*(order for _, order in per_factor[j])) if per_factor[j] else 1
        for j in range(n)
    ]

    table: dict[CharTuple, tuple[tuple[int, ...], dict[StabPair, int]]] = {}
    for combo, chis in zip(tables.galois_index_tuples, chis_list):
        ks = []
        r_of_pair: dict[StabPair, int] = {}
        for pair, key_idx in pairs:
            s = tables.value_num(combo, key_idx)
            scaled = s * pair.order
            if scaled % L != 0:
                raise ConsistencyError(
                    f"character value {s}/{L} incompatible with stabilizer "
                    f"order {pair.order}"
                )
            k = (scaled // L) % pair.order
            ks.append(k)
            r_of_pair[pair] = r_mu(m, pair.order, k)[0]
        degrees = []
        for j in range(n):
            den = factor_den[j]
            num = 0
            for pos, order in per_factor[j]:
                k = ks[pos]
                mu = r_mu(m, order, k)[1]
                num += (mu * order - k) * (den // order)
            if num % den != 0:
                raise ConsistencyError(
                    f"building-data line bundle has non-integral degree "
                    f"in factor {j}"
                )
            degrees.append(-2 * m + num // den)
        table[chis] = (tuple(degrees), r_of_pair)
    return table


def eigensheaf_multidegree(
    datum: AlgebraicDatum, m: int, chis: CharTuple
) -> EigensheafDegrees:
    """Multidegree of the chi-eigensheaf of the pushforward of K_X^m."""
    table = _eigensheaf_table(datum, m)
    if chis not in table:
        raise ValidationError("character tuple is not trivial on the ambient group")
    return EigensheafDegrees(chis, m, table[chis][0])


def eigensheaf_report(datum: AlgebraicDatum, m: int) -> list[EigensheafDegrees]:
    table = _eigensheaf_table(datum, m)
    return [
        EigensheafDegrees(chis, m, deg)
        for chis, (deg, _) in sorted(
            table.items(), key=lambda kv: tuple(c.exponents for c in kv[0])
        )
    ]


def pluri_dimension(datum: AlgebraicDatum, m: int) -> int:
    """P_m via the decomposition route: sections of all eigensheaves.

    On a product of lines h^0 of O(a_1,...,a_n) is the product of (a_j + 1)
    clipped at zero, so each character contributes a box of monomials.
    """
    table = _eigensheaf_table(datum, m)
    total = 0
    for degrees, _ in table.values():
        prodval = 1
        for r in degrees:
            prodval *= max(r + 1, 0)
        total += prodval
    return total


def constituent_tuples(datum: AlgebraicDatum, m: int) -> list[CharTuple]:
    """Characters appearing in the m-canonical representation: those whose
    eigensheaf has every multidegree component >= 0."""
    table = _eigensheaf_table(datum, m)
    out = [
        chis
        for chis, (degrees, _) in table.items()
        if all(r >= 0 for r in degrees)
    ]
    out.sort(key=lambda t: tuple(c.exponents for c in t))
    return out


def base_point_free(datum: AlgebraicDatum, m: int) -> bool:
    """Set-theoretic base-point-freeness of |K_X^m| over the product of lines.

    Eigensheaf sections vanish on the ramification above a branch class
    exactly to the order of its twist exponent r, and a nonnegative
    multidegree on a product of lines is globally generated away from any
    prescribed point.  A point of X above y in Y is therefore not a base
    point iff some character with all multidegrees >= 0 has r = 0 for every
    branch class through y.  Since branch divisors within one factor are
    disjoint, y meets at most one branch point per factor, and it suffices to
    sweep all such strata (plus the empty stratum off the branch locus).
    """
    table = _eigensheaf_table(datum, m)
    constituents = [
        (degrees, rmap)
        for degrees, rmap in table.values()
        if all(r >= 0 for r in degrees)
    ]
    if not constituents:
        return False
    comps = branch_data(datum)
    per_factor: list[list[StabPair]] = [[] for _ in range(datum.n)]
    for comp in comps:
        if comp.pair not in per_factor[comp.factor_index]:
            per_factor[comp.factor_index].append(comp.pair)

    def stratum_covered(chosen: frozenset[StabPair]) -> bool:
        for _, rmap in constituents:
            if all(rmap[p] == 0 for p in chosen):
                return True
        return False

    def rec(j: int, chosen: frozenset[StabPair]) -> bool:
        if j == datum.n:
            if not chosen:
                return True  # the empty stratum is covered by any constituent
            return stratum_covered(chosen)
        if not rec(j + 1, chosen):
            return False
        for pair in per_factor[j]:
            if not rec(j + 1, chosen | {pair}):
                return False
        return True

    return rec(0, frozenset())


def dual_character_relation_check(datum: AlgebraicDatum, chis: CharTuple) -> bool:
    """Degree bookkeeping between a character and its inverse.

    Per factor, deg L_{chi^{-1}} + deg L_chi must count the branch points on
    which chi restricts non-trivially to the stabilizer.
    """
    comps = branch_data(datum)
    inv = tuple(
        Character(Q.neg(chi.exponents))
        for chi, Q in zip(chis, datum.quotient_groups)
    )
    n = datum.n
    deg = [Fraction(0)] * n
    deg_inv = [Fraction(0)] * n
    count = [0] * n
    k_cache: dict[StabPair, tuple[int, int]] = {}
    for comp in comps:
        if comp.pair not in k_cache:
            k_cache[comp.pair] = (
                k_exponent(datum, comp.pair, chis),
                k_exponent(datum, comp.pair, inv),
            )
        k, k_inv = k_cache[comp.pair]
        deg[comp.factor_index] += Fraction(k, comp.order)
        deg_inv[comp.factor_index] += Fraction(k_inv, comp.order)
        if k != 0:
            count[comp.factor_index] += 1
    return all(deg[j] + deg_inv[j] == count[j] for j in range(n))


def analyzed_genera(datum: AlgebraicDatum) -> tuple[int, ...]:
    """Genera after full validation (kept here for CLI convenience)."""
    validate_datum(datum)
    return curve_genera(datum)
