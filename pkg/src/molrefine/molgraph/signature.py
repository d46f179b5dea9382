"""Relabeling-invariant graph signatures.

Per-atom codes start from local invariants and are refined by folding
in sorted neighbor codes until the partition stops splitting; the
signature hashes the sorted multiset of final codes. Isomorphic
attributed graphs get equal signatures within the discriminating power
of this refinement, which is ample for drug-sized molecules.
"""

from __future__ import annotations

from ..hashing import mix64
from .elements import ATOMIC_NUMBER
from .graph import BondOrder, MolGraph

_BOND_TAG = {
    BondOrder.SINGLE: 1,
    BondOrder.DOUBLE: 2,
    BondOrder.TRIPLE: 3,
    BondOrder.AROMATIC: 4,
}


def atom_codes(mol: MolGraph) -> list[int]:
    """Stable per-atom refinement codes (shared with fingerprints)."""
    codes = [
        mix64(
            ATOMIC_NUMBER[atom.element],
            atom.formal_charge,
            atom.isotope or 0,
            int(atom.aromatic_flag),
            mol.total_h(idx),
            mol.degree(idx),
            int(idx in mol.ring_atoms),
        )
        for idx, atom in enumerate(mol.atoms)
    ]
    return codes


def refine_codes(mol: MolGraph, codes: list[int], rounds: int) -> list[int]:
    for _ in range(rounds):
        codes = [
            mix64(
                codes[idx],
                *(
                    part
                    for tag_code in sorted(
                        (_BOND_TAG[mol.bonds[bidx].order], codes[nbr])
                        for nbr, bidx in mol.adjacency[idx]
                    )
                    for part in tag_code
                ),
            )
            for idx in range(len(mol.atoms))
        ]
    return codes


def graph_signature(mol: MolGraph) -> str:
    codes = atom_codes(mol)
    distinct = len(set(codes))
    for _ in range(len(mol.atoms)):
        codes = refine_codes(mol, codes, 1)
        now = len(set(codes))
        if now == distinct:
            break
        distinct = now
    final = mix64(len(mol.atoms), len(mol.bonds), *sorted(codes))
    return f"{final:016x}"
