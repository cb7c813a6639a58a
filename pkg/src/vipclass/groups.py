"""Exact arithmetic for finite abelian groups.

Groups are kept in invariant-factor form ``Z/d1 x ... x Z/dk`` with
``d1 | d2 | ... | dk``; elements are coordinate tuples, addition is
componentwise.  Characters of such a group are again coordinate tuples
(the dual group has the same invariant factors) and evaluate to exact
rationals modulo 1 -- no complex floats appear anywhere, since every
downstream formula only ever needs the exponent ``a`` of a root of unity
``zeta_n^a``.

Subgroups, quotients (via Smith normal form of the relation lattice),
cyclic subgroups with canonical generators, and brute-force automorphism
enumeration round out the toolbox.  Everything is an immutable value and
safe to share between processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from math import gcd, lcm, prod

from .errors import ConsistencyError, ValidationError

Element = tuple[int, ...]


@dataclass(frozen=True, order=True)
class QZValue:
    """An exact element of Q/Z: ``numerator/denominator`` with 0 <= num < den."""

    numerator: int
    denominator: int

    @staticmethod
    def make(numerator: int, denominator: int) -> "QZValue":
        if denominator <= 0:
            raise ValidationError(f"denominator must be positive, got {denominator}")
        numerator %= denominator
        g = gcd(numerator, denominator)
        return QZValue(numerator // g, denominator // g)

    @staticmethod
    def zero() -> "QZValue":
        return QZValue(0, 1)

    def __add__(self, other: "QZValue") -> "QZValue":
        den = lcm(self.denominator, other.denominator)
        num = self.numerator * (den // self.denominator) + other.numerator * (
            den // other.denominator
        )
        return QZValue.make(num, den)

    def __neg__(self) -> "QZValue":
        return QZValue.make(-self.numerator, self.denominator)

    def __sub__(self, other: "QZValue") -> "QZValue":
        return self + (-other)

    def scaled(self, k: int) -> "QZValue":
        return QZValue.make(self.numerator * k, self.denominator)

    @property
    def order(self) -> int:
        """Additive order in Q/Z (1 for the zero class)."""
        return self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class Character:
    """A character of an abelian group, stored by its exponent tuple.

    The character with exponents ``(c1, ..., ck)`` sends an element
    ``(g1, ..., gk)`` to ``sum(ci * gi / di) mod 1``.
    """

    exponents: Element

    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.exponents)


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group in invariant-factor form (empty tuple = trivial)."""

    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements in mixed-radix (row-major) order; identity comes first."""
        return tuple(iproduct(*(range(d) for d in self.invariant_factors)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def element_index(self, g: Element) -> int:
        try:
            return self._index[tuple(g)]
        except KeyError:
            raise ValidationError(f"{g} is not an element of {self}") from None

    def contains(self, g: Element) -> bool:
        return tuple(g) in self._index

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def scale(self, k: int, a: Element) -> Element:
        return tuple((k * x) % d for x, d in zip(a, self.invariant_factors))

    # Index-based fast tables used by the combinatorial search.

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        els = self.elements
        idx = self._index
        return tuple(
            tuple(idx[self.add(a, b)] for b in els) for a in els
        )

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        idx = self._index
        return tuple(idx[self.neg(a)] for a in self.elements)

    @cached_property
    def order_table(self) -> tuple[int, ...]:
        return tuple(element_order(self, g) for g in self.elements)

    @cached_property
    def char_num_table(self) -> tuple[tuple[int, ...], ...]:
        """``table[c][g]`` = numerator of chi_c(g) over the common denominator
        ``exponent``; both ``c`` and ``g`` are element indices."""
        e = self.exponent
        weights = [e // d for d in self.invariant_factors]
        els = self.elements
        out = []
        for c in els:
            cw = [ci * w for ci, w in zip(c, weights)]
            out.append(tuple(sum(x * gi for x, gi in zip(cw, g)) % e for g in els))
        return tuple(out)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "C1"
        return "x".join(f"C{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by generators together with its sorted element list."""

    parent: AbelianGroup
    generators: tuple[Element, ...]
    elements: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, g: Element) -> bool:
        return tuple(g) in self._element_set

    @cached_property
    def _element_set(self) -> frozenset[Element]:
        return frozenset(self.elements)

    @cached_property
    def mask(self) -> int:
        """Bitmask over parent element indices (parents have order <= 2**20)."""
        m = 0
        for g in self.elements:
            m |= 1 << self.parent.element_index(g)
        return m

    def is_trivial(self) -> bool:
        return self.order == 1


def make_group(invariant_factors: list[int] | tuple[int, ...]) -> AbelianGroup:
    """Build a group from invariant factors; factors equal to 1 are dropped.

    The divisibility chain d_i | d_{i+1} is required (after dropping 1s); a
    list violating it is rejected rather than silently reordered -- use
    :func:`abelianize` to normalize arbitrary cyclic decompositions.
    """
    factors = tuple(int(d) for d in invariant_factors if int(d) != 1)
    if any(d < 1 for d in factors):
        raise ValidationError(f"invariant factors must be >= 1, got {invariant_factors}")
    for a, b in zip(factors, factors[1:]):
        if b % a != 0:
            raise ValidationError(
                f"invariant factors must form a divisibility chain, got {factors}"
            )
    return AbelianGroup(factors)


def element_order(G: AbelianGroup, g: Element) -> int:
    """Least n >= 1 with n*g = 0; equals lcm_i d_i/gcd(d_i, g_i)."""
    n = 1
    for x, d in zip(g, G.invariant_factors):
        n = lcm(n, d // gcd(d, x))
    return n


def characters(G: AbelianGroup) -> list[Character]:
    """All |G| characters, indexed by the same coordinate tuples as elements."""
    return [Character(c) for c in G.elements]


def eval_character(G: AbelianGroup, chi: Character, g: Element) -> QZValue:
    """chi(g) = sum_i c_i g_i / d_i as an exact element of Q/Z."""
    val = QZValue.zero()
    for c, x, d in zip(chi.exponents, g, G.invariant_factors):
        val = val + QZValue.make(c * x, d)
    return val


def subgroup_generated(G: AbelianGroup, gens: list[Element] | tuple[Element, ...]) -> Subgroup:
    """Closure of ``gens`` under the group law, with a canonical element list."""
    gens = tuple(tuple(g) for g in gens)
    for g in gens:
        if not G.contains(g):
            raise ValidationError(f"{g} is not an element of {G}")
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.add(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return Subgroup(G, gens, tuple(sorted(seen)))


def subgroup_from_elements(G: AbelianGroup, elements) -> Subgroup:
    """Wrap a set already known to be closed (checked) as a Subgroup."""
    elems = tuple(sorted(tuple(e) for e in elements))
    sub = subgroup_generated(G, elems)
    if sub.elements != elems:
        raise ValidationError("element set is not closed under the group law")
    return sub


def smith_normal_form(rows: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Diagonalize an integer matrix by row and column operations.

    Returns ``(diag, V)`` where ``diag`` is the length-``ncols`` diagonal of
    the Smith form (with the divisibility chain ``diag[i] | diag[i+1]``) and
    ``V`` is the unimodular column-operation matrix, so that the row span of
    the input equals the row span of ``diag`` in the coordinates ``x @ V``.
    Row operations are not tracked.  Entries of ``diag`` may be 0 if the
    lattice has lower rank.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    V = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_col(src, dst, q):
        # col[dst] += q * col[src]
        for r in m:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]

    def add_row(src, dst, q):
        m[dst] = [a + q * b for a, b in zip(m[dst], m[src])]

    t = 0
    while t < min(nrows, ncols):
        # Find a pivot of least absolute value in the remaining block.
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = m[i][j]
                if v != 0 and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        # Clear row and column t; restart whenever a reduction leaves a remainder.
        while True:
            dirty = False
            for i in range(t + 1, nrows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        # Enforce divisibility of the remaining block by the pivot.
        p = m[t][t]
        fixed = True
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if m[i][j] % p != 0:
                    add_row(i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if m[t][t] < 0:
                for r in m:
                    r[t] = -r[t]  # pragma: no cover - pivots stay positive here
            t += 1
    diag = [m[i][i] if i < min(nrows, ncols) else 0 for i in range(ncols)]
    diag = [abs(d) for d in diag]
    return diag, V


def abelianize(relations: list[list[int]], num_generators: int | None = None) -> AbelianGroup:
    """Normalize a presentation ``Z^k / rows`` to invariant factors.

    ``relations`` is a list of relator rows over the integers; ``num_generators``
    defaults to the row length.  Infinite (free) quotients are rejected.
    """
    if num_generators is None:
        if not relations:
            raise ValidationError("need num_generators when no relations are given")
        num_generators = len(relations[0])
    for r in relations:
        if len(r) != num_generators:
            raise ValidationError("ragged relation matrix")
    diag, _ = smith_normal_form(relations, num_generators)
    if any(d == 0 for d in diag):
        raise ValidationError("presentation has infinite quotient")
    return make_group([d for d in diag if d > 1])


@dataclass(frozen=True)
class QuotientMap:
    """Surjection G -> Q with kernel K, as coordinate arithmetic plus tables."""

    source: AbelianGroup
    target: AbelianGroup
    kernel: Subgroup
    _matrix: tuple[tuple[int, ...], ...]  # ncols(source.rank) x rank(target)
    _moduli: tuple[int, ...]

    def map(self, g: Element) -> Element:
        return tuple(
            sum(x * col[i] for x, col in zip(g, self._matrix)) % d
            for i, d in enumerate(self._moduli)
        )

    def __call__(self, g: Element) -> Element:
        return self.map(g)

    @cached_property
    def index_map(self) -> tuple[int, ...]:
        """Source element index -> target element index."""
        tgt = self.target
        return tuple(tgt.element_index(self.map(g)) for g in self.source.elements)

    @cached_property
    def sections(self) -> tuple[Element, ...]:
        """One preimage per target element (the first in element order)."""
        out: dict[Element, Element] = {}
        for g in self.source.elements:
            q = self.map(g)
            if q not in out:
                out[q] = g
        return tuple(out[q] for q in self.target.elements)

    def fiber(self, q: Element) -> tuple[Element, ...]:
        return tuple(
            g for g in self.source.elements if self.map(g) == tuple(q)
        )


def quotient(G: AbelianGroup, K: Subgroup) -> tuple[AbelianGroup, QuotientMap]:
    """Quotient G/K in invariant-factor form plus the canonical projection.

    The presentation lattice is spanned by the diagonal relations of G and by
    all elements of K (using the full element list keeps the labeling
    independent of the choice of generators).
    """
    if K.parent != G:
        raise ValidationError("subgroup does not live in the given group")
    k = G.rank
    rows = [[G.invariant_factors[i] if j == i else 0 for j in range(k)] for i in range(k)]
    rows += [list(g) for g in K.elements if any(g)]
    if k == 0:
        Q = make_group([])
        return Q, QuotientMap(G, Q, K, (), ())
    diag, V = smith_normal_form(rows, k)
    keep = [i for i, d in enumerate(diag) if d > 1]
    Q = make_group([diag[i] for i in keep])
    matrix = tuple(tuple(V[row][i] % diag[i] for i in keep) for row in range(k))
    moduli = tuple(diag[i] for i in keep)
    if Q.order * K.order != G.order:  # pragma: no cover - bug trap
        raise ConsistencyError(
            f"quotient size mismatch: |{G}|={G.order}, |K|={K.order}, got {Q}"
        )
    return Q, QuotientMap(G, Q, K, matrix, moduli)


def cyclic_subgroups(G: AbelianGroup) -> list[Subgroup]:
    """All cyclic subgroups, each once, generated by its canonical generator.

    The canonical generator of a cyclic subgroup is the lexicographically
    least element of maximal order, which makes downstream labeling of
    stabilizer/character pairs deterministic.
    """
    by_elements: dict[tuple[Element, ...], list[Element]] = {}
    for g in G.elements:
        sub = subgroup_generated(G, [g])
        by_elements.setdefault(sub.elements, []).append(g)
    out = []
    for elems, gens in sorted(by_elements.items(), key=lambda kv: (len(kv[0]), kv[0])):
        top = max(element_order(G, g) for g in gens)
        canonical = min(g for g in gens if element_order(G, g) == top)
        out.append(Subgroup(G, (canonical,), elems))
    return out


@dataclass(frozen=True)
class Automorphism:
    """An automorphism determined by the images of the standard generators."""

    group: AbelianGroup
    images: tuple[Element, ...]

    def __call__(self, g: Element) -> Element:
        G = self.group
        out = G.identity
        for x, img in zip(g, self.images):
            out = G.add(out, G.scale(x, img))
        return out

    @cached_property
    def perm(self) -> tuple[int, ...]:
        """The permutation of element indices induced on ``group.elements``."""
        G = self.group
        return tuple(G.element_index(self(g)) for g in G.elements)


def automorphisms(G: AbelianGroup, max_order: int = 16) -> list[Automorphism]:
    """All automorphisms, by brute force over generator images.

    A tuple of images (one per standard generator e_i, each killed by d_i)
    extends to an endomorphism; it is an automorphism iff the images generate.
    The ceiling guards against accidental use far beyond the classification
    range.
    """
    if G.order > max_order:
        raise ValidationError(
            f"automorphism enumeration capped at order {max_order}, got |G|={G.order}"
        )
    k = G.rank
    if k == 0:
        return [Automorphism(G, ())]
    candidates = [
        [g for g in G.elements if G.scale(d, g) == G.identity]
        for d in G.invariant_factors
    ]
    # |span(images so far)| * |span(remaining candidate pool)| >= |G| is
    # necessary for the images to generate, and prunes most branches.
    pool_span = [0] * (k + 1)
    pool_span[k] = 1
    for pos in range(k - 1, -1, -1):
        gens: list[Element] = []
        for j in range(pos, k):
            gens.extend(candidates[j])
        pool_span[pos] = subgroup_generated(G, gens).order
    out: list[Automorphism] = []
    span_cache: dict[tuple[Element, ...], int] = {}

    def span_size(gens: tuple[Element, ...]) -> int:
        if gens not in span_cache:
            span_cache[gens] = subgroup_generated(G, list(gens)).order
        return span_cache[gens]

    def rec(pos: int, chosen: tuple[Element, ...]):
        if pos == k:
            # A surjective endomorphism of a finite group is bijective.
            if span_size(chosen) == G.order:
                out.append(Automorphism(G, chosen))
            return
        for g in candidates[pos]:
            nxt = chosen + (g,)
            if span_size(nxt) * pool_span[pos + 1] >= G.order:
                rec(pos + 1, nxt)

    rec(0, ())
    return out


def automorphism_perms(G: AbelianGroup, max_order: int = 16) -> list[tuple[int, ...]]:
    """Sorted element-index permutations of Aut(G); perms[0] is the identity."""
    perms = sorted(a.perm for a in automorphisms(G, max_order=max_order))
    return perms


def _perm_closure(gens: list[tuple[int, ...]], n: int) -> set[tuple[int, ...]]:
    identity = tuple(range(n))
    closure = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple(a[i] for i in g)
                if b not in closure:
                    closure.add(b)
                    nxt.append(b)
        frontier = nxt
    return closure


def perm_generators(perms: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """A small generating set of a permutation group given by all its elements."""
    if not perms:
        return []
    n = len(perms[0])
    gens: list[tuple[int, ...]] = []
    closure: set[tuple[int, ...]] = {tuple(range(n))}
    for p in perms:
        if p in closure:
            continue
        gens.append(p)
        closure = _perm_closure(gens, n)
        if len(closure) == len(perms):
            break
    return gens
