from __future__ import annotations

import random
from pathlib import Path

import pytest

from molrefine.molgraph import Bond, MolGraph
from molrefine.molgraph.parser import finish_graph

DATA_DIR = Path(__file__).parent / "data"


def permute_graph(mol: MolGraph, rng: random.Random) -> MolGraph:
    """Rebuild the molecule with atoms in a random order."""
    n = len(mol.atoms)
    perm = list(range(n))
    rng.shuffle(perm)  # perm[new_index] = old_index
    old_to_new = {old: new for new, old in enumerate(perm)}
    atoms = [mol.atoms[old] for old in perm]
    bonds = [
        Bond(old_to_new[b.a], old_to_new[b.b], b.order)
        for b in mol.bonds
    ]
    return finish_graph(atoms, bonds)


def load_corpus() -> list[tuple[str, str]]:
    cases = []
    for line in (DATA_DIR / "error_corpus.txt").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        category, smiles = line.split("\t")
        cases.append((category, " " if smiles == "\\s" else smiles))
    return cases


def druglike_sample() -> list[str]:
    return (DATA_DIR / "druglike_1000.smi").read_text().splitlines()


@pytest.fixture(scope="session")
def druglike():
    return druglike_sample()
