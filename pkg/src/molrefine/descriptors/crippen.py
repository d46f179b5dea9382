"""Atom-contribution partition coefficient (LogP).

Each heavy atom takes the contribution of the first matching rule in
the shipped table; each implicit hydrogen takes the contribution of
the first matching carrier-anchored hydrogen rule. The sum over atoms
and hydrogens is the estimate.
"""

from __future__ import annotations

import math

from ..molgraph import MolGraph
from .patterns import MolView, match_from
from .tables import ParameterTables, default_tables


def atom_types(mol: MolGraph, tables: ParameterTables | None = None) -> list[str]:
    """First-matching rule label per heavy atom (diagnostic helper)."""
    tables = tables or default_tables()
    view = MolView(mol)
    labels = []
    for idx in range(len(mol.atoms)):
        label = ""
        for rule in tables.crippen_atom_rules:
            if _rule_applies(rule, view, idx) and match_from(view, rule.pattern, idx):
                label = rule.label
                break
        labels.append(label)
    return labels


def _rule_applies(rule, view: MolView, idx: int) -> bool:
    if rule.anchor_elem is not None and view.elem[idx] != rule.anchor_elem:
        return False
    if rule.anchor_arom is not None and view.aromatic[idx] != rule.anchor_arom:
        return False
    return True


def crippen_logp(mol: MolGraph, tables: ParameterTables | None = None) -> float:
    tables = tables or default_tables()
    view = MolView(mol)
    parts: list[float] = []
    for idx in range(len(mol.atoms)):
        for rule in tables.crippen_atom_rules:
            if _rule_applies(rule, view, idx) and match_from(view, rule.pattern, idx):
                parts.append(rule.value)
                break
        h_count = mol.total_h(idx)
        if h_count:
            for rule in tables.crippen_h_rules:
                if _rule_applies(rule, view, idx) and match_from(view, rule.pattern, idx):
                    parts.append(h_count * rule.value)
                    break
    # fsum is exact, so the result is identical under atom reordering.
    return math.fsum(parts)
