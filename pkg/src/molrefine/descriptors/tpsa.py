"""Topological polar surface area (fragment-additive, N/O only)."""

from __future__ import annotations

import math

from ..molgraph import MolGraph
from .patterns import MolView, match_from
from .tables import ParameterTables, default_tables


def ertl_tpsa(mol: MolGraph, tables: ParameterTables | None = None) -> float:
    tables = tables or default_tables()
    view = MolView(mol)
    parts: list[float] = []
    for idx, atom in enumerate(mol.atoms):
        if atom.element not in ("N", "O"):
            continue
        for rule in tables.tpsa_rules:
            if rule.anchor_elem is not None and view.elem[idx] != rule.anchor_elem:
                continue
            if rule.anchor_arom is not None and view.aromatic[idx] != rule.anchor_arom:
                continue
            if match_from(view, rule.pattern, idx):
                parts.append(rule.value)
                break
    # fsum keeps the sum identical under atom reordering.
    return math.fsum(parts)
