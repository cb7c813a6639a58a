"""Reading and writing algebraic data as structured JSON files.

A datum file carries the ambient group (invariant factors), one kernel per
factor (as a list of generator coordinate tuples), and one generating vector
per factor.  Vector entries are given either in ambient coordinates (the
default; they are projected to the quotient) or natively in quotient
coordinates via a ``"coords": "quotient"`` flag, settable per file or per
vector.  Parsing failures raise :class:`ValidationError` with the offending
field named.
"""

from __future__ import annotations

import json
from typing import Any

from .covers import AlgebraicDatum, BranchingType, GeneratingVector
from .errors import ValidationError
from .groups import make_group, quotient, subgroup_generated


def _as_coords(value: Any, rank: int, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or len(value) != rank:
        raise ValidationError(
            f"{where}: expected a coordinate list of length {rank}, got {value!r}"
        )
    try:
        return tuple(int(x) for x in value)
    except (TypeError, ValueError):
        raise ValidationError(f"{where}: non-integer coordinate in {value!r}") from None


def parse_datum(payload: dict) -> AlgebraicDatum:
    """Build an AlgebraicDatum from a decoded datum file."""
    if not isinstance(payload, dict):
        raise ValidationError("datum file must be a JSON object")
    try:
        G = make_group(payload["group"])
    except KeyError:
        raise ValidationError("missing field 'group'") from None
    vectors_raw = payload.get("vectors")
    if not isinstance(vectors_raw, list) or len(vectors_raw) < 2:
        raise ValidationError("'vectors' must list at least two factors")
    n = payload.get("n", len(vectors_raw))
    if n != len(vectors_raw):
        raise ValidationError(
            f"'n' = {n} does not match the {len(vectors_raw)} vectors given"
        )
    kernels_raw = payload.get("kernels", [[] for _ in range(n)])
    if not isinstance(kernels_raw, list) or len(kernels_raw) != n:
        raise ValidationError("'kernels' must list one kernel per factor")
    default_coords = payload.get("coords", "ambient")
    if default_coords not in ("ambient", "quotient"):
        raise ValidationError("'coords' must be 'ambient' or 'quotient'")

    kernels = []
    for i, gens_raw in enumerate(kernels_raw):
        if not isinstance(gens_raw, list):
            raise ValidationError(f"kernels[{i}] must be a list of generators")
        gens = [
            _as_coords(g, G.rank, f"kernels[{i}][{j}]")
            for j, g in enumerate(gens_raw)
        ]
        for j, g in enumerate(gens):
            if not G.contains(g):
                raise ValidationError(f"kernels[{i}][{j}]: {g} is not in the group")
        kernels.append(subgroup_generated(G, gens))

    vectors = []
    for i, vec_raw in enumerate(vectors_raw):
        if not isinstance(vec_raw, dict):
            raise ValidationError(f"vectors[{i}] must be an object")
        try:
            btype = BranchingType.parse(str(vec_raw["type"]))
        except KeyError:
            raise ValidationError(f"vectors[{i}]: missing 'type'") from None
        coords_mode = vec_raw.get("coords", default_coords)
        if coords_mode not in ("ambient", "quotient"):
            raise ValidationError(
                f"vectors[{i}]: 'coords' must be 'ambient' or 'quotient'"
            )
        Q, proj = quotient(G, kernels[i])
        rank = G.rank if coords_mode == "ambient" else Q.rank

        def read_entries(key: str, expected: int) -> tuple[tuple[int, ...], ...]:
            raw = vec_raw.get(key, [])
            if not isinstance(raw, list) or len(raw) != expected:
                raise ValidationError(
                    f"vectors[{i}].{key}: expected {expected} entries"
                )
            out = []
            for j, e in enumerate(raw):
                c = _as_coords(e, rank, f"vectors[{i}].{key}[{j}]")
                if coords_mode == "ambient":
                    if not G.contains(c):
                        raise ValidationError(
                            f"vectors[{i}].{key}[{j}]: {c} is not in the group"
                        )
                    c = proj.map(c)
                elif not Q.contains(c):
                    raise ValidationError(
                        f"vectors[{i}].{key}[{j}]: {c} is not in the quotient"
                    )
                out.append(c)
            return tuple(out)

        branch = read_entries("elements", btype.num_branch_points)
        hyperbolic = read_entries("hyperbolic", 2 * btype.genus_prime)
        vectors.append(GeneratingVector(Q, btype, hyperbolic, branch))

    return AlgebraicDatum(G, tuple(kernels), tuple(vectors))


def load_datum(path: str) -> AlgebraicDatum:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    return parse_datum(payload)


def serialize_datum(datum: AlgebraicDatum) -> dict:
    """Canonical JSON form of a datum (quotient coordinates, sorted kernels)."""
    return {
        "group": list(datum.group.invariant_factors),
        "n": datum.n,
        "kernels": [
            [list(g) for g in K.elements if any(g)] for K in datum.kernels
        ],
        "coords": "quotient",
        "vectors": [
            {
                "type": str(V.btype),
                "elements": [list(h) for h in V.branch_elements],
                **(
                    {"hyperbolic": [list(h) for h in V.hyperbolic_pairs]}
                    if V.hyperbolic_pairs
                    else {}
                ),
            }
            for V in datum.vectors
        ],
    }
