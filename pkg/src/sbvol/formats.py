"""Interchange formats: polytope documents, subdivision and ledger exports.

Documents are JSON with sorted keys; rationals are rendered "p/q" (or "p"
when integral) so round-trips are bit-exact.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import DegenerateInputError
from .intlinalg import dot
from .ledger import Ledger, Verdict
from .polytope import LatticePolytope, hull
from .subdivision import Subdivision


def fraction_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


def polytope_to_dict(p: LatticePolytope, name: str = "") -> dict:
    return {
        "name": name,
        "ambient_dim": p.ambient_dim,
        "vertices": [list(v) for v in p.vertices],
    }


def polytope_from_dict(doc: dict) -> tuple:
    """(name, polytope); vertices are re-verified through the hull."""
    try:
        name = doc.get("name", "")
        ambient = int(doc["ambient_dim"])
        vertices = [tuple(int(x) for x in v) for v in doc["vertices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DegenerateInputError(f"malformed polytope document: {exc}") from exc
    if not vertices:
        raise DegenerateInputError("polytope document has no vertices")
    if any(len(v) != ambient for v in vertices):
        raise DegenerateInputError("vertex length does not match ambient_dim")
    return name, hull(vertices)


def dump_polytope(p: LatticePolytope, name: str = "") -> str:
    return json.dumps(polytope_to_dict(p, name), sort_keys=True, indent=2) + "\n"


def load_polytope(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DegenerateInputError(f"not a JSON document: {exc}") from exc
    return polytope_from_dict(doc)


def heights_to_doc(heights: dict) -> dict:
    return {
        "heights": [[list(k), fraction_str(v)] for k, v in sorted(heights.items())]
    }


def heights_from_doc(doc: dict) -> dict:
    try:
        return {
            tuple(int(x) for x in k): parse_fraction(v) for k, v in doc["heights"]
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise DegenerateInputError(f"malformed height table: {exc}") from exc


def subdivision_to_dict(s: Subdivision) -> dict:
    """Cells with dimensions and boundary flags, plus the height table."""
    system = s.polytope.facet_system()
    cells = []
    for c in s.cells:
        boundary = any(all(dot(n, v) == off for v in c.vertices) for n, off in system)
        cells.append(
            {
                "vertices": [list(v) for v in c.vertices],
                "dim": c.dim(),
                "boundary": boundary,
                "maximal": c in s.maximal_cells,
            }
        )
    doc = {
        "polytope": polytope_to_dict(s.polytope),
        "cells": cells,
    }
    if s.heights is not None:
        doc.update(heights_to_doc(dict(s.heights)))
    return doc


def ledger_to_dict(ledger: Ledger, v: Verdict | None = None) -> dict:
    doc = {
        "provenance": ledger.provenance,
        "point_coefficient": ledger.point_coefficient,
        "classes": [
            {
                "coefficient": e.coefficient,
                "members": e.members,
                "tag": e.tag.kind,
                "justification": e.tag.justification,
                "seed": e.tag.seed_name,
                "fingerprint": list(_flatten_fingerprint(e.fingerprint)),
                "representative": [list(x) for x in e.representative.vertices],
            }
            for e in ledger.entries
        ],
    }
    if v is not None:
        doc["verdict"] = v.status
        doc["justification"] = v.justification
    return doc


def _flatten_fingerprint(fp):
    for x in fp:
        if isinstance(x, tuple):
            yield list(x)
        else:
            yield x


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"
