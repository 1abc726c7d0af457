"""JSON documents for polytopes and Horn matrices."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .polyalg import as_fraction, format_rational
from .polytope import Facet, LatticePolytope
from .statistics import HornMatrix


def polytope_to_doc(P: LatticePolytope, weights: Sequence | None = None, name: str | None = None) -> dict:
    doc = {
        "dim": P.dim,
        "facets": [{"normal": list(f.normal), "offset": f.offset} for f in P.facets],
        "lattice_points": [list(m) for m in P.lattice_points],
        "vertices": [[format_rational(x) for x in v] for v in P.vertices],
    }
    if weights is not None:
        doc["weights"] = [format_rational(x) for x in weights]
    if name or P.name:
        doc["name"] = name or P.name
    return doc


def polytope_from_doc(doc: dict) -> tuple[LatticePolytope, tuple[Fraction, ...]]:
    """Build the polytope; weights default to all ones.

    ``lattice_points`` (optional) fixes the labeling that ``weights`` refer to;
    otherwise the canonical graded order is used. ``vertices`` is ignored on
    input since it is derived.
    """
    facets = [Facet(tuple(f["normal"]), f["offset"]) for f in doc["facets"]]
    if "dim" in doc and any(len(f.normal) != doc["dim"] for f in facets):
        raise ValueError("facet normals do not match the declared dimension")
    P = LatticePolytope(facets, lattice_points=doc.get("lattice_points"), name=doc.get("name"))
    if doc.get("weights") is None:
        w = (Fraction(1),) * P.num_points
    else:
        w = tuple(as_fraction(x) for x in doc["weights"])
        if len(w) != P.num_points:
            raise ValueError(f"{len(w)} weights for {P.num_points} lattice points")
    return P, w


def load_polytope(path) -> tuple[LatticePolytope, tuple[Fraction, ...]]:
    return polytope_from_doc(json.loads(Path(path).read_text()))


def load_horn(path) -> HornMatrix:
    return HornMatrix.from_dict(json.loads(Path(path).read_text()))


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
