"""Integer-arithmetic tables shared by the character and eigensheaf routes.

All character values live in (1/L)Z/Z for L the least common exponent of the
factor groups, so the bulk computations (Galois character enumeration,
exponent extraction at branch classes, class separation) run on machine
integers modulo L.  The public modules keep their exact rational API and
delegate the loops here; tables are cached per datum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from math import lcm

from .covers import AlgebraicDatum
from .errors import ConsistencyError


@dataclass(frozen=True)
class DatumTables:
    datum: AlgebraicDatum
    denominator: int
    # per factor: character value table (numerators mod the factor exponent)
    # and the scale lifting them to the common denominator
    value_tables: tuple[tuple[tuple[tuple[int, ...], ...], int], ...]
    # per-factor character indices of every Galois character of the cover
    galois_index_tuples: tuple[tuple[int, ...], ...]

    def value_num(self, chi_indices, element_indices) -> int:
        """Numerator over ``denominator`` of chi evaluated at a tuple."""
        total = 0
        for (tab, scale), c, g in zip(self.value_tables, chi_indices, element_indices):
            total += tab[c][g] * scale
        return total % self.denominator


@lru_cache(maxsize=2048)
def datum_tables(datum: AlgebraicDatum) -> DatumTables:
    G = datum.group
    groups = datum.quotient_groups
    projections = datum.projections
    L = lcm(*(max(Q.exponent, 1) for Q in groups)) if groups else 1
    value_tables = tuple(
        (Q.char_num_table, L // max(Q.exponent, 1)) for Q in groups
    )
    gens = [
        tuple(1 if j == i else 0 for j in range(G.rank)) for i in range(G.rank)
    ]
    gen_images = [
        tuple(pr.target.element_index(pr.map(e)) for pr in projections)
        for e in gens
    ]
    out = []
    for combo in iproduct(*(range(Q.order) for Q in groups)):
        ok = True
        for imgs in gen_images:
            total = 0
            for (tab, scale), c, g in zip(value_tables, combo, imgs):
                total += tab[c][g] * scale
            if total % L != 0:
                ok = False
                break
        if ok:
            out.append(combo)
    expected = 1
    for Q in groups:
        expected *= Q.order
    expected //= G.order
    if len(out) != expected:
        raise ConsistencyError(
            f"found {len(out)} Galois characters, expected {expected}"
        )
    return DatumTables(datum, L, value_tables, tuple(out))
