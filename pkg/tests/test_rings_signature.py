from __future__ import annotations

import random

from molrefine.molgraph import cycle_rank, graph_signature, parse_smiles

from conftest import permute_graph


def brute_force_cycle_rank(n_atoms: int, edges: list[tuple[int, int]]) -> int:
    parent = list(range(n_atoms))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    components = n_atoms
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            components -= 1
    return len(edges) - n_atoms + components


def test_benzene_single_ring():
    mol = parse_smiles("c1ccccc1").mol
    assert len(mol.rings) == 1
    assert len(mol.rings[0]) == 6


def test_acyclic_no_rings():
    assert parse_smiles("CC").mol.rings == ()
    assert parse_smiles("CC(C)CCO").mol.rings == ()


def test_naphthalene_two_six_rings():
    mol = parse_smiles("c1ccc2ccccc2c1").mol
    # Independent check: rank = E - V + C computed by union-find.
    edges = [(b.a, b.b) for b in mol.bonds]
    assert brute_force_cycle_rank(len(mol.atoms), edges) == 2
    assert len(mol.rings) == 2
    assert sorted(len(r) for r in mol.rings) == [6, 6]


def test_ring_count_matches_cycle_rank(druglike):
    for smiles in druglike[:300]:
        mol = parse_smiles(smiles).mol
        edges = [(b.a, b.b) for b in mol.bonds]
        assert len(mol.rings) == brute_force_cycle_rank(len(mol.atoms), edges), smiles


def test_every_ring_bond_covered():
    # Spiro and fused systems: every cycle edge appears in >= 1 ring.
    for smiles in ("C1CC2(CC1)CCC2", "c1ccc2ccccc2c1", "C1CC1C1CC1",
                   "C1CC2CCC1CC2", "Cn1cnc2c1c(=O)n(C)c(=O)n2C"):
        mol = parse_smiles(smiles).mol
        covered = set()
        pair_to_idx = {b.pair(): i for i, b in enumerate(mol.bonds)}
        for ring in mol.rings:
            for i in range(len(ring)):
                pair = tuple(sorted((ring[i], ring[(i + 1) % len(ring)])))
                covered.add(pair_to_idx[pair])
        cyclic_bonds = set()
        edges = [(b.a, b.b) for b in mol.bonds]
        full_rank = brute_force_cycle_rank(len(mol.atoms), edges)
        for bidx in range(len(mol.bonds)):
            without = edges[:bidx] + edges[bidx + 1 :]
            if brute_force_cycle_rank(len(mol.atoms), without) == full_rank - 1:
                cyclic_bonds.add(bidx)
        assert covered == cyclic_bonds, smiles


def test_rings_are_chordless_smallest_for_simple_cases():
    mol = parse_smiles("C1CCCCC1").mol
    assert [len(r) for r in mol.rings] == [6]
    spiro = parse_smiles("C1CC2(CC1)CCC2").mol
    assert sorted(len(r) for r in spiro.rings) == [4, 5]


def test_signature_relabeling_invariance():
    assert graph_signature(parse_smiles("CCO").mol) == graph_signature(parse_smiles("OCC").mol)
    assert graph_signature(parse_smiles("CCO").mol) != graph_signature(parse_smiles("CCC").mol)


def test_signature_charge_isotope_h_sensitivity():
    sig = lambda s: graph_signature(parse_smiles(s).mol)
    assert sig("[13CH4]") != sig("C")
    assert sig("[NH4+]") != sig("N")
    assert sig("[CH3]") != sig("C")


def test_signature_permutation_stability():
    rng = random.Random(11)
    mol = parse_smiles("CC(=O)Oc1ccccc1C(=O)OCCN(C)C").mol  # 20 heavy atoms
    reference = graph_signature(mol)
    for _ in range(100):
        assert graph_signature(permute_graph(mol, rng)) == reference


def test_signature_distinguishes_isomers():
    sig = lambda s: graph_signature(parse_smiles(s).mol)
    pairs = [
        ("CCO", "COC"),
        ("c1ccc(C)cc1C", "c1ccc(C)c(C)c1"),
        ("CC(C)C", "CCCC"),
        ("C1CCCCC1", "CCCCCC"),
    ]
    for a, b in pairs:
        assert sig(a) != sig(b), (a, b)


def test_cycle_rank_helper():
    mol = parse_smiles("C1CC1.C1CC1").mol
    assert cycle_rank(len(mol.atoms), list(mol.bonds)) == 2
