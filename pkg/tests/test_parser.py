from __future__ import annotations

import random

import pytest

from molrefine.molgraph import (
    BondOrder,
    ErrorCategory,
    graph_signature,
    parse_smiles,
    write_smiles,
)

from conftest import load_corpus


@pytest.mark.parametrize("smiles,category", [
    ("C1CC", "unclosed_ring"),
    ("C(C", "parentheses"),
    ("C12CC12", "duplicate_bond"),
    ("CC(C)(C)(C)C", "valence"),
    ("c1ccc1", "aromaticity"),
    ("", "syntax"),
    ("   ", "syntax"),
])
def test_taxonomy_headline_cases(smiles, category):
    outcome = parse_smiles(smiles)
    assert not outcome.valid
    assert outcome.error.category.value == category


def test_empty_input_message():
    outcome = parse_smiles("  ")
    assert outcome.error.detail == "empty SMILES"


def test_benzene_shape():
    mol = parse_smiles("c1ccccc1").mol
    assert len(mol.atoms) == 6
    assert len(mol.bonds) == 6
    assert len(mol.rings) == 1
    assert all(a.aromatic_flag for a in mol.atoms)
    assert all(mol.total_h(i) == 1 for i in range(6))


def test_error_message_format():
    error = parse_smiles("C1CC").error
    assert error.render() == "unclosed_ring: ring bond 1 opened but never closed at position 1"


def test_position_reporting():
    assert parse_smiles("C(C").error.position == 1
    assert parse_smiles("CC(C)(C)(C)C").error.position == 1
    assert parse_smiles("CCX").error.position == 2


def test_error_corpus_classification():
    corpus = load_corpus()
    per_category = {}
    for category, smiles in corpus:
        outcome = parse_smiles(smiles)
        assert not outcome.valid, f"{smiles!r} unexpectedly parsed"
        assert outcome.error.category.value == category, (
            f"{smiles!r}: expected {category}, got {outcome.error.category.value}"
        )
        per_category[category] = per_category.get(category, 0) + 1
    assert len(per_category) == 6
    assert all(count >= 20 for count in per_category.values())
    assert sum(per_category.values()) >= 120


@pytest.mark.parametrize("smiles", [
    "c1ccccc1", "C", "CCO", "[13CH4]", "[NH4+]", "[O-]C(=O)C",
    "F/C=C/F", "C[C@H](N)C(=O)O", "C%12CCCCC%12", "C1.CC1",
    "O=c1cccc[nH]1", "c1cc[nH]c1", "N(=O)=O", "[nH]1cccc1C",
    "CC(=O)Oc1ccccc1C(=O)O", "[CH3]", "[BH4-]", "S(=O)(=O)(O)O",
])
def test_accepts_valid_grammar(smiles):
    assert parse_smiles(smiles).valid, parse_smiles(smiles).error.render()


@pytest.mark.parametrize("smiles", ["[NH4]", "[N+](C)(C)(C)(C)C", "[CH5]", "[OH3]"])
def test_bracket_valence_between_allowed_is_invalid(smiles):
    outcome = parse_smiles(smiles)
    assert not outcome.valid
    assert outcome.error.category is ErrorCategory.VALENCE


def test_valence_table_per_element():
    # One past the maximum allowed valence for each organic-subset element.
    over = {
        "B": "B(C)(C)(C)C",
        "C": "C(C)(C)(C)(C)C",
        "N": "N(C)(C)(C)(C)(C)C",
        "O": "O(C)(C)C",
        "P": "P(C)(C)(C)(C)(C)C",
        "S": "S(C)(C)(C)(C)(C)(C)C",
        "F": "F(C)C",
        "Cl": "Cl(C)C",
        "Br": "Br(C)C",
        "I": "I(C)C",
    }
    for element, smiles in over.items():
        outcome = parse_smiles(smiles)
        assert not outcome.valid, f"{element}: {smiles} parsed"
        assert outcome.error.category is ErrorCategory.VALENCE, element


def test_stereo_markers_discarded():
    plain = parse_smiles("FC=CF").mol
    marked = parse_smiles("F/C=C/F").mol
    assert graph_signature(plain) == graph_signature(marked)
    chiral = parse_smiles("C[C@H](N)C(=O)O").mol
    flat = parse_smiles("CC(N)C(=O)O").mol
    assert graph_signature(chiral) == graph_signature(flat)


def test_implicit_hydrogens():
    mol = parse_smiles("CCO").mol
    assert [mol.total_h(i) for i in range(3)] == [3, 2, 1]
    pyrrole = parse_smiles("c1cc[nH]c1").mol
    n_idx = next(i for i, a in enumerate(pyrrole.atoms) if a.element == "N")
    assert pyrrole.total_h(n_idx) == 1
    pyridine = parse_smiles("c1ccncc1").mol
    n_idx = next(i for i, a in enumerate(pyridine.atoms) if a.element == "N")
    assert pyridine.total_h(n_idx) == 0


def test_pentavalent_unbracketed_nitrogen_fills_to_allowed():
    mol = parse_smiles("N(C)(C)(C)C").mol
    assert mol.total_h(0) == 1  # fills to the next allowed valence, 5


def test_kekulized_orders_alternate():
    mol = parse_smiles("c1ccccc1").mol
    orders = sorted(b.kekule for b in mol.bonds)
    assert orders == [1, 1, 1, 2, 2, 2]
    for idx in range(6):
        doubles = sum(
            1 for _, bidx in mol.adjacency[idx] if mol.bonds[bidx].kekule == 2
        )
        assert doubles == 1


def test_kekulize_pyridine_and_fused():
    for smiles in ("c1ccncc1", "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1",
                   "c1cnc2[nH]ccc2c1", "Cn1cnc2c1c(=O)n(C)c(=O)n2C"):
        assert parse_smiles(smiles).valid, smiles


def test_kekulize_conflicts():
    for smiles in ("c1ccc1", "c1ccccccc1", "c1ccnc1", "s1ccccc1"):
        outcome = parse_smiles(smiles)
        assert not outcome.valid and outcome.error.category is ErrorCategory.AROMATICITY, smiles


def test_aromatic_atom_outside_ring():
    outcome = parse_smiles("Cc")
    assert outcome.error.category is ErrorCategory.AROMATICITY
    assert "non-ring atom" in outcome.error.detail


def test_precedence_when_multiple_errors_present():
    # parentheses beats unclosed ring
    assert parse_smiles("C1CC(C").error.category is ErrorCategory.PARENTHESES
    # unclosed ring beats duplicate bond
    assert parse_smiles("C11C1").error.category is ErrorCategory.UNCLOSED_RING
    # duplicate bond beats valence
    assert parse_smiles("C11CC(C)(C)(C)C").error.category is ErrorCategory.DUPLICATE_BOND
    # valence beats aromaticity
    assert parse_smiles("CC(C)(C)(C)Cc1ccc1").error.category is ErrorCategory.VALENCE
    # syntax beats everything
    assert parse_smiles("C1CC(C$").error.category is ErrorCategory.SYNTAX


def test_fuzz_never_crashes_and_always_classifies():
    rng = random.Random(7)
    alphabet = "CNOPSFIclnos0123456789()[]=#+-@/\\.%Br"
    categories = {c.value for c in ErrorCategory}
    for _ in range(20_000):
        length = rng.randint(1, 30)
        text = "".join(rng.choice(alphabet) for _ in range(length))
        outcome = parse_smiles(text)
        if not outcome.valid:
            assert outcome.error.category.value in categories


def test_druglike_sample_parses(druglike):
    invalid = [s for s in druglike if not parse_smiles(s).valid]
    assert len(invalid) <= len(druglike) // 100, invalid[:10]


def test_round_trip_signature(druglike):
    rng = random.Random(3)
    for smiles in rng.sample(druglike, 150):
        mol = parse_smiles(smiles).mol
        rewritten = write_smiles(mol)
        reparsed = parse_smiles(rewritten)
        assert reparsed.valid, f"{smiles} -> {rewritten}: {reparsed.error}"
        assert graph_signature(reparsed.mol) == graph_signature(mol), smiles


def test_graph_is_simple(druglike):
    for smiles in druglike[:100]:
        mol = parse_smiles(smiles).mol
        pairs = [b.pair() for b in mol.bonds]
        assert len(pairs) == len(set(pairs))
        assert all(b.a != b.b for b in mol.bonds)


def test_aromatic_bond_endpoints_are_aromatic(druglike):
    for smiles in druglike[:200]:
        mol = parse_smiles(smiles).mol
        for bond in mol.bonds:
            if bond.order is BondOrder.AROMATIC:
                assert mol.atoms[bond.a].aromatic_flag
                assert mol.atoms[bond.b].aromatic_flag


def test_kekulized_matching_invariant(druglike):
    # every aromatic atom that takes an in-ring double bond gets exactly
    # one, across the whole sample
    from dataclasses import replace

    from molrefine.molgraph import BondOrder, needs_double_bond

    for smiles in druglike[:400]:
        mol = parse_smiles(smiles).mol
        for idx, atom in enumerate(mol.atoms):
            if not atom.aromatic_flag:
                continue
            exo_multiple = any(
                mol.bonds[b].order in (BondOrder.DOUBLE, BondOrder.TRIPLE)
                for _, b in mol.adjacency[idx]
            )
            needs = needs_double_bond(atom, mol.degree(idx), exo_multiple)
            aromatic_doubles = sum(
                1
                for _, b in mol.adjacency[idx]
                if mol.bonds[b].order is BondOrder.AROMATIC and mol.bonds[b].kekule == 2
            )
            assert aromatic_doubles == (1 if needs else 0), (smiles, idx)


def test_parse_never_raises_on_arbitrary_text():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @given(st.text(max_size=60))
    @settings(max_examples=1500, deadline=None)
    def check(text):
        outcome = parse_smiles(text)
        if not outcome.valid:
            assert outcome.error.category is not None

    check()
