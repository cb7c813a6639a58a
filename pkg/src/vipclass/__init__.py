"""Pluricanonical geometry of quotients of curve products by free abelian actions.

The package builds and analyzes regular threefolds (and surfaces) of the form
(C_1 x ... x C_n)/G with G finite abelian acting freely and diagonally.  It
computes the characters of pluricanonical representations exactly, decomposes
pluricanonical systems of the induced abelian cover of (P^1)^n into eigensheaf
multidegrees, decides base-point-freeness and birationality of m-canonical
maps, and classifies all families with a prescribed holomorphic Euler
characteristic and bounded group order.
"""

from .errors import ConsistencyError, ValidationError, VipclassError
from .groups import (
    AbelianGroup,
    Automorphism,
    Character,
    QZValue,
    Subgroup,
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

__all__ = [
    "AbelianGroup",
    "Automorphism",
    "Character",
    "ConsistencyError",
    "QZValue",
    "Subgroup",
    "ValidationError",
    "VipclassError",
    "abelianize",
    "automorphisms",
    "characters",
    "cyclic_subgroups",
    "element_order",
    "eval_character",
    "make_group",
    "quotient",
    "subgroup_generated",
]
