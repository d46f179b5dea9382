"""Deterministic SMILES output.

Depth-first from the lowest atom index of each component, branches in
index order. Aromatic atoms keep their lowercase notation so a round
trip preserves the graph signature. Atoms are bracketed only when a
bare symbol would re-parse with the wrong hydrogen count, charge,
isotope, or element.
"""

from __future__ import annotations

from dataclasses import replace

from .elements import AROMATIC_SUBSET, ORGANIC_SUBSET, allowed_valences
from .graph import BondOrder, MolGraph
from .kekulize import NUMERIC, needs_double_bond

_BOND_TEXT = {
    BondOrder.SINGLE: "",
    BondOrder.DOUBLE: "=",
    BondOrder.TRIPLE: "#",
    BondOrder.AROMATIC: "",
}


def _inferred_bare_h(mol: MolGraph, idx: int) -> int | None:
    """Hydrogen count a re-parse would assign to the bare symbol."""
    atom = mol.atoms[idx]
    allowed = allowed_valences(atom.element, 0)
    if allowed is None:
        return None
    if atom.aromatic_flag:
        bare = replace(atom, explicit_h=0, bracketed=False, formal_charge=0)
        total = 0
        exo_multiple = False
        for _, bidx in mol.adjacency[idx]:
            order = mol.bonds[bidx].order
            if order is BondOrder.AROMATIC:
                total += 1
            else:
                total += NUMERIC[order]
                if order in (BondOrder.DOUBLE, BondOrder.TRIPLE):
                    exo_multiple = True
        if needs_double_bond(bare, mol.degree(idx), exo_multiple):
            total += 1
    else:
        total = sum(NUMERIC[mol.bonds[bidx].order] for _, bidx in mol.adjacency[idx])
    target = min((v for v in allowed if v >= total), default=None)
    if target is None:
        return None
    return target - total


def _atom_text(mol: MolGraph, idx: int) -> str:
    atom = mol.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic_flag else atom.element
    bare_ok = (
        atom.formal_charge == 0
        and atom.isotope is None
        and atom.element in ORGANIC_SUBSET
        and (not atom.aromatic_flag or atom.element.lower() in AROMATIC_SUBSET)
        and _inferred_bare_h(mol, idx) == mol.total_h(idx)
    )
    if bare_ok:
        return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    h = mol.total_h(idx)
    if h == 1:
        parts.append("H")
    elif h > 1:
        parts.append(f"H{h}")
    charge = atom.formal_charge
    if charge == 1:
        parts.append("+")
    elif charge == -1:
        parts.append("-")
    elif charge > 1:
        parts.append(f"+{charge}")
    elif charge < -1:
        parts.append(f"-{-charge}")
    parts.append("]")
    return "".join(parts)


def _bond_text(mol: MolGraph, bidx: int) -> str:
    bond = mol.bonds[bidx]
    if bond.order is BondOrder.SINGLE:
        # An explicit single bond is required between two aromatic
        # atoms (biphenyl), otherwise it would re-parse as aromatic.
        if mol.atoms[bond.a].aromatic_flag and mol.atoms[bond.b].aromatic_flag:
            return "-"
        return ""
    return _BOND_TEXT[bond.order]


def write_smiles(mol: MolGraph) -> str:
    n = len(mol.atoms)
    if n == 0:
        raise ValueError("cannot write an empty molecule")

    visited = [False] * n
    emit_pos: dict[int, int] = {}
    order: list[int] = []
    tree_children: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    ring_bond_ids: list[int] = []
    seen_bonds: set[int] = set()
    roots: list[int] = []

    def visit(node: int) -> None:
        visited[node] = True
        emit_pos[node] = len(order)
        order.append(node)
        for nbr, bidx in mol.adjacency[node]:
            if bidx in seen_bonds:
                continue
            seen_bonds.add(bidx)
            if visited[nbr]:
                ring_bond_ids.append(bidx)
            else:
                tree_children[node].append((nbr, bidx))
                visit(nbr)

    for root in range(n):
        if not visited[root]:
            roots.append(root)
            visit(root)

    # Preorder emit positions are fixed; assign ring closure digits by
    # interval overlap so digits can be reused once closed.
    events: list[tuple[int, int, int]] = []
    for bidx in ring_bond_ids:
        bond = mol.bonds[bidx]
        first, second = sorted((bond.a, bond.b), key=lambda a: emit_pos[a])
        events.append((emit_pos[first], emit_pos[second], bidx))
    events.sort()
    in_use: list[tuple[int, int]] = []  # (close position, digit)
    digit_of: dict[int, int] = {}
    for open_pos, close_pos, bidx in events:
        in_use = [(c, d) for c, d in in_use if c >= open_pos]
        used = {d for _, d in in_use}
        digit = 1
        while digit in used:
            digit += 1
        if digit > 99:
            raise ValueError("too many simultaneously open ring closures")
        digit_of[bidx] = digit
        in_use.append((close_pos, digit))

    ring_suffix: dict[int, list[tuple[int, str]]] = {i: [] for i in range(n)}
    for open_pos, close_pos, bidx in events:
        digit = digit_of[bidx]
        text = str(digit) if digit <= 9 else f"%{digit:02d}"
        opener = order[open_pos]
        closer = order[close_pos]
        ring_suffix[opener].append((digit, _bond_text(mol, bidx) + text))
        ring_suffix[closer].append((digit, text))

    def emit(node: int) -> str:
        parts = [_atom_text(mol, node)]
        for _, text in sorted(ring_suffix[node]):
            parts.append(text)
        children = tree_children[node]
        for i, (child, bidx) in enumerate(children):
            sub = _bond_text(mol, bidx) + emit(child)
            if i < len(children) - 1:
                parts.append(f"({sub})")
            else:
                parts.append(sub)
        return "".join(parts)

    return ".".join(emit(root) for root in roots)
