"""Sub-descriptors feeding the drug-likeness score.

MW      molecular weight from standard atomic weights, implicit H in
HBD     hydrogen-bond donors, counted per hydrogen on N/O
HBA     hydrogen-bond acceptors: N/O atoms, minus pyrrole-type
        nitrogens (aromatic N carrying an H) and minus double-bonded
        oxygens in carboxyl/amide-like context
ROTB    rotatable bonds: non-ring single bonds between non-terminal
        atoms, excluding triple-bond ends and amide C-N
AROM    perceived rings whose atoms are all aromatic
ALERTS  structural-alert rules with at least one embedding
"""

from __future__ import annotations

import math

from ..molgraph import BondOrder, MolGraph
from ..molgraph.elements import ATOMIC_WEIGHTS
from .patterns import MolView, match_from
from .tables import ParameterTables, default_tables


def molecular_weight(mol: MolGraph) -> float:
    parts = []
    for idx, atom in enumerate(mol.atoms):
        parts.append(ATOMIC_WEIGHTS[atom.element])
        parts.append(mol.total_h(idx) * ATOMIC_WEIGHTS["H"])
    return math.fsum(parts)


def hbd_count(mol: MolGraph) -> int:
    return sum(
        mol.total_h(idx)
        for idx, atom in enumerate(mol.atoms)
        if atom.element in ("N", "O")
    )


def _is_excluded_carbonyl_o(mol: MolGraph, idx: int) -> bool:
    """Double-bonded O on a carbon that also binds O or N (acid, ester,
    amide and relatives); plain ketone/aldehyde oxygens still accept."""
    for nbr, bidx in mol.adjacency[idx]:
        bond = mol.bonds[bidx]
        if bond.order is not BondOrder.DOUBLE or mol.atoms[nbr].element != "C":
            continue
        for other, obidx in mol.adjacency[nbr]:
            if other == idx:
                continue
            obond = mol.bonds[obidx]
            if obond.order is BondOrder.SINGLE and mol.atoms[other].element in ("N", "O"):
                return True
    return False


def hba_count(mol: MolGraph) -> int:
    count = 0
    for idx, atom in enumerate(mol.atoms):
        if atom.element == "N":
            if atom.aromatic_flag and mol.total_h(idx) >= 1:
                continue  # pyrrole-type
            count += 1
        elif atom.element == "O":
            if _is_excluded_carbonyl_o(mol, idx):
                continue
            count += 1
    return count


def _in_triple(mol: MolGraph, idx: int) -> bool:
    return any(
        mol.bonds[bidx].order is BondOrder.TRIPLE for _, bidx in mol.adjacency[idx]
    )


def _is_amide_cn(mol: MolGraph, a: int, b: int) -> bool:
    for c, n in ((a, b), (b, a)):
        if mol.atoms[c].element != "C" or mol.atoms[n].element != "N":
            continue
        for nbr, bidx in mol.adjacency[c]:
            if (
                mol.bonds[bidx].order is BondOrder.DOUBLE
                and mol.atoms[nbr].element == "O"
            ):
                return True
    return False


def rotb_count(mol: MolGraph) -> int:
    count = 0
    for bidx, bond in enumerate(mol.bonds):
        if bond.order is not BondOrder.SINGLE or bidx in mol.ring_bonds:
            continue
        if mol.heavy_degree(bond.a) < 2 or mol.heavy_degree(bond.b) < 2:
            continue
        if _in_triple(mol, bond.a) or _in_triple(mol, bond.b):
            continue
        if _is_amide_cn(mol, bond.a, bond.b):
            continue
        count += 1
    return count


def arom_count(mol: MolGraph) -> int:
    return sum(
        1 for ring in mol.rings if all(mol.atoms[i].aromatic_flag for i in ring)
    )


def alerts_count(mol: MolGraph, tables: ParameterTables | None = None) -> int:
    tables = tables or default_tables()
    view = MolView(mol)
    count = 0
    for rule in tables.alert_rules:
        anchors = range(len(mol.atoms))
        if rule.anchor_elem is not None:
            anchors = [i for i in anchors if view.elem[i] == rule.anchor_elem]
        if rule.anchor_arom is not None:
            anchors = [i for i in anchors if view.aromatic[i] == rule.anchor_arom]
        if any(match_from(view, rule.pattern, i) for i in anchors):
            count += 1
    return count


def sub_descriptors(mol: MolGraph, tables: ParameterTables | None = None) -> dict[str, float]:
    tables = tables or default_tables()
    return {
        "MW": molecular_weight(mol),
        "HBA": float(hba_count(mol)),
        "HBD": float(hbd_count(mol)),
        "ROTB": float(rotb_count(mol)),
        "AROM": float(arom_count(mol)),
        "ALERTS": float(alerts_count(mol, tables)),
    }
