"""Kekulization and aromatic-system validation.

Aromatic atoms that must carry exactly one double bond in the kekule
structure form a matching problem over the aromatic bonds; a perfect
matching on those atoms is an alternating single/double assignment.
Failure to match, an aromatic atom outside any ring, an aromatic bond
between non-aromatic atoms, or an isolated aromatic monocycle with a
non-4n+2 pi count all surface as the aromaticity error category.
"""

from __future__ import annotations

from .errors import ErrorCategory, ParseIssue, SmilesError
from .graph import Atom, Bond, BondOrder


def needs_double_bond(atom: Atom, degree: int, exo_multiple: bool = False) -> bool:
    """Whether an aromatic atom must receive one in-ring double bond.

    Classification is by element, charge, and sigma-connection count
    (explicit bonds plus any bracket hydrogens): pyridine-type nitrogen
    takes a double bond, pyrrole-type does not, neutral aromatic oxygen
    and sulfur contribute a lone pair instead. An atom that already
    carries a non-aromatic double or triple bond (aromatic pyridones,
    exocyclic imines) is satisfied and never matched.
    """
    if exo_multiple:
        return False
    nconn = degree + (atom.explicit_h or 0)
    element = atom.element
    charge = atom.formal_charge
    if element == "C":
        return charge == 0
    if element in ("N", "P"):
        if charge == 0:
            return nconn <= 2
        if charge > 0:
            return nconn <= 3
        return False
    if element in ("O", "S"):
        return charge > 0
    if element == "B":
        return False
    return False


def _pi_contribution(atom: Atom, matched: bool, exo_multiple: bool) -> int:
    if matched:
        return 1
    if exo_multiple or atom.formal_charge > 0:
        # The pi system is exocyclic, or an empty p orbital (tropylium).
        return 0
    # Unmatched neutral/anionic atoms bring a lone pair into the ring.
    return 2


def kekulize(
    atoms: list[Atom],
    bonds: list[Bond],
    rings: list[tuple[int, ...]],
    atom_positions: list[int | None] | None = None,
) -> list[Bond]:
    """Assign kekule multiplicities, validating the aromatic subgraph.

    Returns bonds with kekule set; raises SmilesError(aromaticity) when
    no consistent assignment exists.
    """
    positions = atom_positions or [None] * len(atoms)
    degree = [0] * len(atoms)
    exo_multiple = [False] * len(atoms)
    for bond in bonds:
        degree[bond.a] += 1
        degree[bond.b] += 1
        if bond.order in (BondOrder.DOUBLE, BondOrder.TRIPLE):
            exo_multiple[bond.a] = True
            exo_multiple[bond.b] = True

    ring_atoms: set[int] = set()
    for ring in rings:
        ring_atoms.update(ring)

    for idx, atom in enumerate(atoms):
        if atom.aromatic_flag and idx not in ring_atoms:
            raise SmilesError(ParseIssue(
                ErrorCategory.AROMATICITY,
                "non-ring atom marked aromatic",
                positions[idx],
            ))
    for bond in bonds:
        if bond.order is BondOrder.AROMATIC:
            if not (atoms[bond.a].aromatic_flag and atoms[bond.b].aromatic_flag):
                raise SmilesError(ParseIssue(
                    ErrorCategory.AROMATICITY,
                    "aromatic bond between non-aromatic atoms",
                    positions[bond.a],
                ))

    needs = {
        idx: needs_double_bond(atom, degree[idx], exo_multiple[idx])
        for idx, atom in enumerate(atoms)
        if atom.aromatic_flag
    }
    # Candidate edges for the matching: aromatic bonds joining two
    # atoms that both still need a double bond.
    cand: dict[int, list[int]] = {idx: [] for idx, need in needs.items() if need}
    for bond in bonds:
        if bond.order is BondOrder.AROMATIC and needs.get(bond.a) and needs.get(bond.b):
            cand[bond.a].append(bond.b)
            cand[bond.b].append(bond.a)

    match = _perfect_matching(cand)
    if match is None:
        unmatched = sorted(cand)
        pos = positions[unmatched[0]] if unmatched else None
        raise SmilesError(ParseIssue(
            ErrorCategory.AROMATICITY,
            "aromatic ring system cannot be kekulized",
            pos,
        ))

    kekulized: list[Bond] = []
    for bond in bonds:
        if bond.order is BondOrder.AROMATIC:
            order = 2 if match.get(bond.a) == bond.b else 1
            kekulized.append(Bond(bond.a, bond.b, bond.order, order))
        else:
            kekulized.append(Bond(bond.a, bond.b, bond.order, NUMERIC[bond.order]))

    _check_isolated_monocycles(atoms, kekulized, rings, match, exo_multiple, positions)
    return kekulized


NUMERIC = {BondOrder.SINGLE: 1, BondOrder.DOUBLE: 2, BondOrder.TRIPLE: 3, BondOrder.AROMATIC: 1}


def _perfect_matching(cand: dict[int, list[int]]) -> dict[int, int] | None:
    """Exact matching covering every key of cand, by backtracking.

    Degree-one atoms are forced first, which resolves almost all
    drug-sized aromatic systems without branching.
    """
    match: dict[int, int] = {}

    def solve(unmatched: set[int]) -> bool:
        if not unmatched:
            return True
        # Pick the most constrained atom.
        best = min(
            unmatched,
            key=lambda a: (sum(1 for n in cand[a] if n in unmatched), a),
        )
        partners = [n for n in cand[best] if n in unmatched]
        if not partners:
            return False
        for partner in partners:
            match[best] = partner
            match[partner] = best
            rest = unmatched - {best, partner}
            if solve(rest):
                return True
            del match[best]
            del match[partner]
        return False

    if solve(set(cand)):
        return match
    return None


def _check_isolated_monocycles(
    atoms: list[Atom],
    bonds: list[Bond],
    rings: list[tuple[int, ...]],
    match: dict[int, int],
    exo_multiple: list[bool],
    positions: list[int | None],
) -> None:
    """Reject isolated all-aromatic monocycles with 4n pi electrons.

    Fused systems are accepted on matching alone; the electron-count
    rule is only meaningful for a standalone ring (benzene yes,
    cyclobutadiene written in lowercase no).
    """
    aromatic_rings = [
        ring for ring in rings
        if all(atoms[i].aromatic_flag for i in ring)
    ]
    counts: dict[int, int] = {}
    for ring in aromatic_rings:
        for idx in ring:
            counts[idx] = counts.get(idx, 0) + 1

    aromatic_adj: dict[int, set[int]] = {}
    for bond in bonds:
        if bond.order is BondOrder.AROMATIC:
            aromatic_adj.setdefault(bond.a, set()).add(bond.b)
            aromatic_adj.setdefault(bond.b, set()).add(bond.a)

    for ring in aromatic_rings:
        members = set(ring)
        if any(counts[i] > 1 for i in ring):
            continue
        # Aromatic bonds leaving the ring mean this is not isolated.
        if any(aromatic_adj.get(i, set()) - members for i in ring):
            continue
        pi = sum(
            _pi_contribution(atoms[i], match.get(i) in members, exo_multiple[i])
            for i in ring
        )
        if pi % 4 != 2:
            raise SmilesError(ParseIssue(
                ErrorCategory.AROMATICITY,
                f"aromatic ring of size {len(ring)} has {pi} pi electrons, "
                "causing a kekulization conflict",
                positions[min(ring)],
            ))
