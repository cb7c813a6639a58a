"""Characters of pluricanonical representations of curves and their products.

Multiplicities are computed for the action by pullback along g itself (not
g^{-1}); with this convention the chi-eigenspace of H^0(C, K^m) is exactly
the space of sections on which every g acts by chi(g), matching the
eigensheaf decomposition of the quotient cover.  Switching conventions is
complex conjugation, i.e. negation of the exponent values; it is applied in
exactly one place (inside the m >= 2 multiplicity) and nowhere else.

For a vector of type [g'; n_1,...,n_r] with branch entries h_i and a
character chi with chi(h_i) = zeta_{n_i}^{k_i}:

* m = 1:  mult(trivial) = g', and for chi nontrivial
  mult(chi) = g' - 1 + sum_i <-k_i/n_i> with <.> the fractional part;
* m >= 2: mult(chi) = (2m/|G|)(g-1) - (g'-1) - sum_i [k_i - m]_{n_i}/n_i,
  where [.]_n is the residue in {0,...,n-1}.

Both expressions are exact integers for every valid generating vector; a
non-integral value trips a consistency error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .covers import AlgebraicDatum, GeneratingVector
from .errors import ConsistencyError, ValidationError
from .groups import AbelianGroup, Character, eval_character

CharTuple = tuple[Character, ...]


@dataclass(frozen=True, eq=True)
class CharacterMultiset:
    """A character in decomposed form: irreducible -> multiplicity (>= 0)."""

    group: AbelianGroup
    mults: dict[Character, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "mults", {c: m for c, m in self.mults.items() if m != 0}
        )

    def __getitem__(self, chi: Character) -> int:
        return self.mults.get(chi, 0)

    @property
    def dimension(self) -> int:
        return sum(self.mults.values())

    def conjugate(self) -> "CharacterMultiset":
        G = self.group
        neg = {Character(G.neg(c.exponents)): m for c, m in self.mults.items()}
        return CharacterMultiset(G, neg)

    def __iter__(self):
        return iter(sorted(self.mults.items(), key=lambda cm: cm[0].exponents))


def _branch_exponents(chi: Character, V: GeneratingVector) -> list[tuple[int, int]]:
    """Pairs (k_i, n_i) with chi(h_i) = zeta_{n_i}^{k_i} for each branch entry."""
    G = V.group
    out = []
    for h, n in zip(V.branch_elements, V.btype.indices):
        v = eval_character(G, chi, h)
        if n % v.denominator != 0:
            raise ConsistencyError(
                f"character value {v} incompatible with branching index {n}"
            )
        out.append((v.numerator * (n // v.denominator), n))
    return out


def canonical_multiplicity(chi: Character, V: GeneratingVector) -> int:
    """Multiplicity of chi in H^0(C, K_C) for the action on the cover C."""
    gp = V.btype.genus_prime
    if chi.is_trivial():
        return gp
    total = Fraction(gp - 1)
    for k, n in _branch_exponents(chi, V):
        total += Fraction((-k) % n, n)
    if total.denominator != 1:
        raise ConsistencyError(f"non-integral canonical multiplicity {total}")
    mult = int(total)
    if mult < 0:
        raise ConsistencyError(f"negative canonical multiplicity {mult}")
    return mult


def pluricanonical_multiplicity(chi: Character, m: int, V: GeneratingVector) -> int:
    """Multiplicity of chi in H^0(C, K_C^m) for m >= 2."""
    if m < 2:
        raise ValidationError("use canonical_multiplicity for m = 1")
    g = V.genus
    gp = V.btype.genus_prime
    total = Fraction(2 * m * (g - 1), V.group.order) - (gp - 1)
    for k, n in _branch_exponents(chi, V):
        total -= Fraction((k - m) % n, n)
    if total.denominator != 1:
        raise ConsistencyError(f"non-integral pluricanonical multiplicity {total}")
    mult = int(total)
    if mult < 0:
        raise ConsistencyError(f"negative pluricanonical multiplicity {mult}")
    return mult


def curve_character(m: int, V: GeneratingVector) -> CharacterMultiset:
    """The full m-canonical character of one curve, with its dimension check.

    The total dimension must be g for m = 1 and (2m-1)(g-1) for m >= 2.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    G = V.group
    mults: dict[Character, int] = {}
    for c in G.elements:
        chi = Character(c)
        if m == 1:
            mult = canonical_multiplicity(chi, V)
        else:
            mult = pluricanonical_multiplicity(chi, m, V)
        if mult:
            mults[chi] = mult
    cm = CharacterMultiset(G, mults)
    g = V.genus
    expected = g if m == 1 else (2 * m - 1) * (g - 1)
    if cm.dimension != expected:
        raise ConsistencyError(
            f"dimension {cm.dimension} != expected {expected} for m={m}"
        )
    return cm


def sym2_character(c: CharacterMultiset) -> CharacterMultiset:
    """Character of the symmetric square of a representation given by ``c``."""
    G = c.group
    items = sorted(c.mults.items(), key=lambda cm: cm[0].exponents)
    out: dict[Character, int] = {}
    for i, (chi1, m1) in enumerate(items):
        for j in range(i, len(items)):
            chi2, m2 = items[j]
            tot = Character(G.add(chi1.exponents, chi2.exponents))
            contrib = m1 * (m1 + 1) // 2 if i == j else m1 * m2
            out[tot] = out.get(tot, 0) + contrib
    return CharacterMultiset(G, out)


@dataclass(frozen=True)
class VIPCharacter:
    """The m-canonical character of the quotient variety.

    Characters of the Galois group of the cover over the product of lines are
    carried as tuples (chi_1, ..., chi_n) of characters of the per-factor
    groups whose pullback to the ambient group is trivial.
    """

    groups: tuple[AbelianGroup, ...]
    m: int
    mults: dict[CharTuple, int] = field(default_factory=dict)

    def __getitem__(self, chis: CharTuple) -> int:
        return self.mults.get(chis, 0)

    @property
    def dimension(self) -> int:
        return sum(self.mults.values())

    def constituents(self) -> list[CharTuple]:
        return sorted(
            (t for t, m in self.mults.items() if m > 0),
            key=lambda t: tuple(c.exponents for c in t),
        )


@lru_cache(maxsize=1024)
def galois_character_tuples(datum: AlgebraicDatum) -> tuple[CharTuple, ...]:
    """All character tuples of the factor groups that are trivial on the
    ambient group; these are exactly the characters of the Galois group of
    the induced cover of the product of lines."""
    from .fastpath import datum_tables

    groups = datum.quotient_groups
    tables = datum_tables(datum)
    return tuple(
        tuple(Character(Q.elements[c]) for Q, c in zip(groups, combo))
        for combo in tables.galois_index_tuples
    )


def vip_character(datum: AlgebraicDatum, m: int) -> VIPCharacter:
    """Kuenneth route: the m-canonical character of the quotient variety.

    The multiplicity of a Galois character tuple is the product of the
    per-curve multiplicities of its components; tuples not trivial on the
    ambient group do not appear.
    """
    curve_chars = [curve_character(m, V) for V in datum.vectors]
    mults: dict[CharTuple, int] = {}
    for chis in galois_character_tuples(datum):
        total = 1
        for chi, cc in zip(chis, curve_chars):
            total *= cc[chi]
            if total == 0:
                break
        if total:
            mults[chis] = total
    return VIPCharacter(datum.quotient_groups, m, mults)


def plurigenus_kuenneth(datum: AlgebraicDatum, m: int) -> int:
    """P_m of the quotient variety via the Kuenneth/character route."""
    return vip_character(datum, m).dimension
