"""Ring perception: a smallest-set-of-smallest-rings style cycle basis.

The basis has exactly E - V + C members (edges minus vertices plus
connected components). Candidates are the shortest cycles through each
non-bridge edge; a greedy pass keeps the smallest candidates that are
linearly independent over GF(2) on edge-incidence vectors, so every
ring bond is covered by at least one returned ring.
"""

from __future__ import annotations

from collections import deque

from .graph import Bond


def cycle_rank(n_atoms: int, bonds: list[Bond]) -> int:
    parent = list(range(n_atoms))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n_atoms
    for bond in bonds:
        ra, rb = find(bond.a), find(bond.b)
        if ra != rb:
            parent[ra] = rb
            components -= 1
    return len(bonds) - n_atoms + components


def perceive_rings(n_atoms: int, bonds: list[Bond]) -> list[tuple[int, ...]]:
    rank = cycle_rank(n_atoms, bonds)
    if rank == 0:
        return []

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for bidx, bond in enumerate(bonds):
        adj[bond.a].append((bond.b, bidx))
        adj[bond.b].append((bond.a, bidx))
    for entries in adj:
        entries.sort()

    pair_to_bond = {bond.pair(): i for i, bond in enumerate(bonds)}

    def shortest_cycle_through(bidx: int) -> tuple[int, ...] | None:
        """BFS from one endpoint to the other with the edge removed."""
        src, dst = bonds[bidx].a, bonds[bidx].b
        prev: dict[int, int] = {src: -1}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            if node == dst:
                break
            for nbr, eidx in adj[node]:
                if eidx == bidx or nbr in prev:
                    continue
                prev[nbr] = node
                queue.append(nbr)
        if dst not in prev:
            return None
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        return tuple(reversed(path))

    candidates: list[tuple[int, tuple[int, ...], int]] = []
    for bidx in range(len(bonds)):
        cycle = shortest_cycle_through(bidx)
        if cycle is None:
            continue
        mask = 0
        for i in range(len(cycle)):
            pair = tuple(sorted((cycle[i], cycle[(i + 1) % len(cycle)])))
            mask |= 1 << pair_to_bond[pair]
        candidates.append((len(cycle), cycle, mask))
    candidates.sort(key=lambda c: (c[0], c[1]))

    # Greedy GF(2) independence on edge-incidence bitmasks.
    basis: list[int] = []
    rings: list[tuple[int, ...]] = []
    seen_masks: set[int] = set()
    for _, cycle, mask in candidates:
        if mask in seen_masks:
            continue
        seen_masks.add(mask)
        reduced = mask
        for vec in basis:
            reduced = min(reduced, reduced ^ vec)
        if reduced == 0:
            continue
        basis.append(reduced)
        basis.sort(reverse=True)
        rings.append(cycle)
        if len(rings) == rank:
            break
    return rings
