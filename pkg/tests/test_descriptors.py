from __future__ import annotations

import json
import random

import pytest

from molrefine.descriptors import (
    ads,
    compute_properties,
    crippen_logp,
    default_tables,
    ertl_tpsa,
    qed,
    sub_descriptors,
)
from molrefine.exceptions import ConfigurationError
from molrefine.molgraph import parse_smiles

from conftest import DATA_DIR


def mol(smiles: str):
    outcome = parse_smiles(smiles)
    assert outcome.valid, outcome.error
    return outcome.mol


@pytest.fixture(scope="module")
def oracle():
    return json.loads((DATA_DIR / "descriptor_oracle.json").read_text())


def test_benzene_logp_anchor():
    assert crippen_logp(mol("c1ccccc1")) == pytest.approx(1.6866, abs=0.01)


def test_methane_logp_definitional_sum():
    # one [CH4]-type carbon plus four carbon-attached hydrogens
    tables = default_tables()
    carbon = next(r.value for r in tables.crippen_atom_rules if r.label == "C1")
    hydrogen = next(r.value for r in tables.crippen_h_rules if r.label == "H1")
    assert crippen_logp(mol("C")) == pytest.approx(carbon + 4 * hydrogen)


def test_tpsa_anchors():
    assert ertl_tpsa(mol("c1ccccc1")) == 0.0
    assert ertl_tpsa(mol("c1ccncc1")) == pytest.approx(12.89, abs=0.01)
    assert ertl_tpsa(mol("Nc1ccccc1")) == pytest.approx(26.02, abs=0.01)
    assert ertl_tpsa(mol("CC(=O)Oc1ccccc1C(=O)O")) == pytest.approx(63.60, abs=0.01)


def test_no_polar_atoms_zero_tpsa():
    assert ertl_tpsa(mol("CCCC")) == 0.0
    assert ertl_tpsa(mol("c1ccccc1")) == 0.0


def test_oracle_parity(oracle):
    tolerances = oracle["tolerances"]
    entries = oracle["molecules"]
    assert len(entries) >= 200
    logp_bad = tpsa_bad = 0
    for entry in entries:
        m = mol(entry["smiles"])
        if abs(crippen_logp(m) - entry["LogP"]) > tolerances["LogP"]:
            logp_bad += 1
        if abs(ertl_tpsa(m) - entry["TPSA"]) > tolerances["TPSA"]:
            tpsa_bad += 1
    assert logp_bad <= len(entries) // 100
    assert tpsa_bad <= len(entries) // 100


def test_oracle_qed_parity_alert_free(oracle):
    entries = [e for e in oracle["molecules"] if e["alerts"] == 0]
    assert entries
    for entry in entries:
        assert qed(mol(entry["smiles"])) == pytest.approx(
            entry["QED"], abs=oracle["tolerances"]["QED"]
        ), entry["smiles"]


def test_oracle_mw_parity(oracle):
    for entry in oracle["molecules"]:
        assert sub_descriptors(mol(entry["smiles"]))["MW"] == pytest.approx(
            entry["MW"], abs=0.01
        ), entry["smiles"]


def test_mw_examples():
    assert sub_descriptors(mol("C"))["MW"] == pytest.approx(16.043, abs=1e-3)
    assert sub_descriptors(mol("O"))["MW"] == pytest.approx(18.015, abs=1e-3)


def test_water_sub_descriptors():
    values = sub_descriptors(mol("O"))
    assert values["HBD"] == 2
    assert values["HBA"] == 1
    assert values["ROTB"] == 0
    assert values["AROM"] == 0


def test_benzene_sub_descriptors():
    values = sub_descriptors(mol("c1ccccc1"))
    assert values["AROM"] == 1
    assert values["ALERTS"] == 0
    assert values["ROTB"] == 0


def test_hba_exclusions():
    # pyrrole-type N is not an acceptor; pyridine N is
    assert sub_descriptors(mol("c1cc[nH]c1"))["HBA"] == 0
    assert sub_descriptors(mol("c1ccncc1"))["HBA"] == 1
    # amide carbonyl O is excluded, ketone O accepts
    assert sub_descriptors(mol("CC(=O)N"))["HBA"] == 1
    assert sub_descriptors(mol("CC(=O)C"))["HBA"] == 1
    assert sub_descriptors(mol("CC(=O)OC"))["HBA"] == 1  # ester carbonyl O excluded


def test_rotb_rules():
    assert sub_descriptors(mol("CCCC"))["ROTB"] == 1
    assert sub_descriptors(mol("CCC"))["ROTB"] == 0  # terminal-only
    assert sub_descriptors(mol("C1CCCCC1C1CCCCC1"))["ROTB"] == 1
    assert sub_descriptors(mol("CC(=O)NC"))["ROTB"] == 0  # amide C-N excluded
    assert sub_descriptors(mol("CC#CC"))["ROTB"] == 0  # triple-bond ends


def test_alerts_detects_reduced_list():
    assert sub_descriptors(mol("C1CO1"))["ALERTS"] >= 1  # epoxide
    assert sub_descriptors(mol("CCS"))["ALERTS"] >= 1  # thiol
    assert sub_descriptors(mol("O=[N+]([O-])c1ccccc1"))["ALERTS"] >= 1  # nitro
    assert sub_descriptors(mol("CC(=O)Oc1ccccc1C(=O)O"))["ALERTS"] == 0


def test_qed_in_unit_interval_on_fuzz_molecules(druglike):
    for smiles in druglike:  # 1,000 generated valid molecules
        value = qed(mol(smiles))
        assert 0.0 <= value <= 1.0, smiles


def test_qed_prefers_druglike():
    assert qed(mol("CC(C)Cc1ccc(C(C)C(=O)O)cc1")) > qed(mol("C"))


def test_ads_peaks_normalized():
    # dmax is by construction the maximum of the unnormalized double
    # sigmoid, so every desirability curve peaks at 1.
    tables = default_tables()
    for name, coeffs in tables.qed_params.items():
        c, d = coeffs[2], coeffs[3]
        span = max(abs(d), 1.0)
        peak = max(
            ads(c + (i - 2000) * span * 0.01, coeffs) for i in range(4001)
        )
        assert peak == pytest.approx(1.0, abs=1e-4), name


def test_additivity_over_disconnected_components():
    pairs = [("CCO", "c1ccncc1"), ("CC(=O)O", "CCN"), ("c1ccccc1", "OCCO")]
    for a, b in pairs:
        combined = mol(f"{a}.{b}")
        assert ertl_tpsa(combined) == pytest.approx(ertl_tpsa(mol(a)) + ertl_tpsa(mol(b)), abs=1e-9)
        assert crippen_logp(combined) == pytest.approx(
            crippen_logp(mol(a)) + crippen_logp(mol(b)), abs=1e-9
        )
        assert sub_descriptors(combined)["MW"] == pytest.approx(
            sub_descriptors(mol(a))["MW"] + sub_descriptors(mol(b))["MW"], abs=1e-9
        )


def test_determinism_on_signature_equal_graphs():
    a, b = mol("OCC"), mol("CCO")
    assert crippen_logp(a) == crippen_logp(b)
    assert ertl_tpsa(a) == ertl_tpsa(b)
    assert qed(a) == qed(b)


def test_compute_properties_contract():
    vector = compute_properties(mol("c1ccccc1"), ["TPSA"])
    assert vector == {"TPSA": 0.0}
    both = compute_properties(mol("c1ccccc1"), ["LogP", "TPSA"])
    assert set(both) == {"LogP", "TPSA"}
    with pytest.raises(ConfigurationError):
        compute_properties(mol("C"), ["Nope"])
    with pytest.raises(ConfigurationError):
        compute_properties(mol("C"), [])


def test_pyridine_vector_example():
    vector = compute_properties(mol("c1ccncc1"), ["TPSA", "QED"])
    assert vector["TPSA"] == pytest.approx(12.89, abs=0.01)
    assert 0.0 <= vector["QED"] <= 1.0


def test_asset_hashes_recorded():
    tables = default_tables()
    assert set(tables.asset_hashes) == {
        "crippen.txt", "crippen_h.txt", "tpsa.txt", "qed.txt", "alerts.txt",
    }
    assert all(len(h) == 64 for h in tables.asset_hashes.values())
