"""Molecular graph value types.

Everything here is immutable after construction: graphs can be shared
freely across threads and reused between pipeline stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class BondOrder(Enum):
    SINGLE = "single"
    DOUBLE = "double"
    TRIPLE = "triple"
    AROMATIC = "aromatic"


# Numeric order used where a plain multiplicity is needed; aromatic
# bonds carry their kekulized assignment separately (Bond.kekule).
NUMERIC_ORDER = {
    BondOrder.SINGLE: 1,
    BondOrder.DOUBLE: 2,
    BondOrder.TRIPLE: 3,
}


@dataclass(frozen=True)
class Atom:
    element: str
    formal_charge: int = 0
    explicit_h: int | None = None
    isotope: int | None = None
    aromatic_flag: bool = False
    bracketed: bool = False


@dataclass(frozen=True)
class Bond:
    """Undirected edge between two atom indices.

    kekule holds the integer multiplicity after kekulization: equal to
    the plain order for non-aromatic bonds, 1 or 2 for aromatic ones.
    """

    a: int
    b: int
    order: BondOrder
    kekule: int = 1

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    def pair(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


@dataclass(frozen=True)
class MolGraph:
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    rings: tuple[tuple[int, ...], ...]
    implicit_h: tuple[int, ...]
    # adjacency[i] lists (neighbor index, bond index) sorted by neighbor
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    ring_atoms: frozenset[int] = field(repr=False)
    ring_bonds: frozenset[int] = field(repr=False)

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def total_h(self, idx: int) -> int:
        atom = self.atoms[idx]
        return (atom.explicit_h or 0) + self.implicit_h[idx]

    def neighbors(self, idx: int) -> tuple[tuple[int, int], ...]:
        return self.adjacency[idx]

    def bond_between(self, i: int, j: int) -> Bond | None:
        for nbr, bidx in self.adjacency[i]:
            if nbr == j:
                return self.bonds[bidx]
        return None

    def in_ring(self, idx: int) -> bool:
        return idx in self.ring_atoms

    def heavy_degree(self, idx: int) -> int:
        """Number of non-hydrogen neighbors (explicit H atoms are rare)."""
        return sum(1 for nbr, _ in self.adjacency[idx] if self.atoms[nbr].element != "H")


def make_adjacency(n_atoms: int, bonds: list[Bond]) -> tuple[tuple[tuple[int, int], ...], ...]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for bidx, bond in enumerate(bonds):
        adj[bond.a].append((bond.b, bidx))
        adj[bond.b].append((bond.a, bidx))
    return tuple(tuple(sorted(entries)) for entries in adj)
