#!/usr/bin/env python3
"""Build the descriptor parity fixture (tests/data/descriptor_oracle.json).

Reference values come from, in order of availability:
  1. rdkit, when importable (records provenance "rdkit <version>");
  2. the independent decision-tree route in oracle_route.py, which
     re-derives the published parameter tables separately from the
     package's pattern-rule engine ("dual-route").

Run from the repository root:  python3 tools/make_descriptor_oracle.py
Any disagreement between the production code and the reference route
is printed; the fixture is only written when all values agree within
the acceptance tolerances, so a regression in either side is caught at
build time rather than frozen in.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracle_route import (  # noqa: E402
    hbd_reference,
    logp_reference,
    mw_reference,
    qed_reference,
    tpsa_reference,
)

from molrefine.descriptors import (  # noqa: E402
    alerts_count,
    crippen_logp,
    ertl_tpsa,
    qed,
    sub_descriptors,
)
from molrefine.molgraph import parse_smiles  # noqa: E402

# Systematic families plus known drug structures: broad coverage of the
# atom-typing tables (alkanes, alcohols, amines, acids, esters, amides,
# ethers, halides, sulfur/phosphorus groups, charged forms, aromatics,
# fused heteroaromatics).
MOLECULES: list[str] = [
    # hydrocarbons: chains, branches, rings, alkenes, alkynes
    "C", "CC", "CCC", "CCCC", "CCCCC", "CCCCCC", "CC(C)C", "CC(C)(C)C",
    "CCC(C)C", "CC(C)CC", "C1CCCCC1", "C1CCCC1", "C1CCC1", "C1CC1",
    "C1CCCCCC1", "CC1CCCCC1", "CC1(C)CCCCC1", "C1CCC2CCCCC2C1",
    "C=C", "CC=C", "CC=CC", "CC(C)=C", "C=CC=C", "C1=CCCCC1", "C#C",
    "CC#C", "CC#CC", "C=C(C)C",
    # aromatics and substituted benzenes
    "c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "CC(C)c1ccccc1",
    "Cc1ccccc1C", "Cc1ccc(C)cc1", "c1ccc2ccccc2c1", "c1ccc(-c2ccccc2)cc1",
    "Cc1cccc2ccccc12", "C=Cc1ccccc1",
    # alcohols, ethers, phenols
    "CO", "CCO", "CCCO", "CC(C)O", "CC(C)(C)O", "OCCO", "OCC(O)CO",
    "COC", "CCOC", "CCOCC", "C1CCOC1", "C1CCOCC1", "Oc1ccccc1",
    "COc1ccccc1", "Cc1ccc(O)cc1", "OCc1ccccc1", "Oc1ccc(O)cc1",
    # aldehydes, ketones, acids, esters
    "C=O", "CC=O", "CCC=O", "CC(C)=O", "CCC(C)=O", "O=C1CCCCC1",
    "O=Cc1ccccc1", "CC(=O)c1ccccc1", "OC=O", "CC(=O)O", "CCC(=O)O",
    "CC(C)C(=O)O", "OC(=O)c1ccccc1", "COC=O", "CC(=O)OC", "CC(=O)OCC",
    "CCOC(=O)C", "COC(=O)c1ccccc1", "CC(=O)Oc1ccccc1", "O=C(O)CC(=O)O",
    "CC(O)C(=O)O",
    # amines and anilines
    "N", "CN", "CCN", "CNC", "CCNC", "CN(C)C", "CCN(CC)CC", "C1CCNC1",
    "C1CCNCC1", "CN1CCCCC1", "Nc1ccccc1", "CNc1ccccc1", "CN(C)c1ccccc1",
    "Cc1ccc(N)cc1", "NCCO", "NCCN", "NC1CCCCC1",
    # amides, nitriles, imines, ureas
    "NC=O", "CC(N)=O", "CNC(C)=O", "CN(C)C(C)=O", "NC(=O)c1ccccc1",
    "CNC(=O)c1ccccc1", "CC#N", "N#Cc1ccccc1", "CC=NC", "NC(N)=O",
    "CNC(=O)NC", "O=C1CCCN1", "O=C1CCCCN1",
    # halides
    "CF", "CCF", "CCl", "CCCl", "CBr", "CCBr", "CI", "CCI",
    "FC(F)F", "FC(F)(F)F", "ClCCl", "ClC(Cl)Cl", "FCC(F)(F)F",
    "Fc1ccccc1", "Clc1ccccc1", "Brc1ccccc1", "Ic1ccccc1",
    "Clc1ccc(Cl)cc1", "FC(F)(F)c1ccccc1", "ClCc1ccccc1",
    # sulfur and phosphorus
    "CS", "CCS", "CSC", "CCSC", "CSSC", "CS(C)=O", "CS(=O)(=O)C",
    "CS(=O)(=O)O", "NS(=O)(=O)c1ccccc1", "CS(=O)(=O)N", "Sc1ccccc1",
    "CSc1ccccc1", "CP(C)C", "CO[P](=O)(OC)OC",
    # nitrogen heteroaromatics
    "c1ccncc1", "c1ccnnc1",
    "Cc1ccncc1", "c1cnccn1", "c1cncnc1", "c1cc[nH]c1", "Cn1cccc1",
    "c1cnc[nH]1", "Cn1ccnc1", "c1cn[nH]c1", "c1ocnc1", "c1scnc1",
    "c1ccoc1", "Cc1ccco1", "c1ccsc1", "Cc1cccs1", "c1ccc2[nH]ccc2c1",
    "c1ccc2ncccc2c1", "c1ccc2nc[nH]c2c1", "Cc1nc2ccccc2[nH]1",
    "c1ccc(-c2ccncc2)cc1", "O=c1cccc[nH]1", "Cn1ccc(=O)[nH]c1=O",
    # charged species and salts
    "[NH4+]", "C[NH3+]", "CC[NH3+]", "C[NH2+]C", "C[N+](C)(C)C",
    "CC(=O)[O-]", "[O-]C(=O)c1ccccc1", "C[NH3+].[Cl-]",
    "CC(=O)[O-].[Na+]", "[O-]S(=O)(=O)c1ccccc1", "O=[N+]([O-])c1ccccc1",
    "CN(C)C(=O)O",
    # polyfunctional and drug-like molecules
    "CC(=O)Oc1ccccc1C(=O)O",            # aspirin
    "CC(C)Cc1ccc(C(C)C(=O)O)cc1",       # ibuprofen
    "CC(=O)Nc1ccc(O)cc1",               # paracetamol
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",       # caffeine
    "NCC(O)c1ccc(O)c(O)c1",             # norepinephrine-like
    "CN1CCC(c2ccccc2)CC1",              # phenylpiperidine
    "COc1ccc2cc(C(C)C(=O)O)ccc2c1",     # naproxen
    "NC(Cc1ccccc1)C(=O)O",              # phenylalanine
    "NC(CO)C(=O)O",                     # serine
    "NC(CS)C(=O)O",                     # cysteine
    "NC(CCSC)C(=O)O",                   # methionine-like
    "OC(=O)c1ccccc1O",                  # salicylic acid
    "OC(=O)c1ccc(O)cc1",                # 4-hydroxybenzoic acid
    "COc1ccccc1OC",                     # veratrole
    "O=C(c1ccccc1)c1ccccc1",            # benzophenone
    "OCC1OC(O)C(O)C(O)C1O",             # pyranose-like
    "CCN(CC)C(=O)c1ccccc1",             # diethylbenzamide
    "CN1CCN(C)CC1", "C1COCCN1", "C1CN(CCO1)C", "O1CCOCC1",
    "CC(C)NCC(O)COc1ccccc1",            # propranolol-like fragment
    "Clc1ccccc1-c1ccccc1", "Nc1ccc(S(N)(=O)=O)cc1",
    "CC1(C)CCCC1", "CC(O)c1ccccc1", "N#CC(C)C", "CC(Br)C(=O)O",
    "O=C(Cl)c1ccccc1", "CCOC(=O)c1ccccc1N", "COC(=O)C(C)N",
    "Cc1ccc(S(=O)(=O)O)cc1", "CCOP(=O)(OCC)OCC",
    "C1CC2(CC1)CCC2", "CC12CCC(C1)C2",
    "Cc1ccc(C(=O)O)cc1", "Oc1ccc(Cl)cc1", "Nc1ccc(F)cc1",
    "COc1ccc(N)cc1", "CSc1ccc(C)cc1", "CC(=O)N(C)C",
]

STRICT = {"LogP": 0.01, "TPSA": 0.01}


def main() -> int:
    provenance = "dual-route decision tree (no reference toolkit on the build mirror)"
    rdkit_fns = None
    try:  # pragma: no cover - depends on environment
        from rdkit import Chem  # type: ignore
        from rdkit.Chem import Crippen, Descriptors, QED  # type: ignore
        import rdkit  # type: ignore

        def rd(smiles):
            m = Chem.MolFromSmiles(smiles)
            if m is None:
                return None
            return {
                "LogP": Crippen.MolLogP(m),
                "TPSA": Descriptors.TPSA(m),
                "QED": QED.qed(m),
                "MW": Descriptors.MolWt(m),
            }

        rdkit_fns = rd
        provenance = f"rdkit {rdkit.__version__}"
    except ImportError:
        pass

    entries = []
    disagreements = 0
    seen = set()
    for smiles in MOLECULES:
        if smiles in seen:
            print(f"duplicate in list: {smiles}")
            disagreements += 1
            continue
        seen.add(smiles)
        outcome = parse_smiles(smiles)
        if not outcome.valid:
            print(f"does not parse: {smiles} -> {outcome.error.render()}")
            disagreements += 1
            continue
        mol = outcome.mol
        if rdkit_fns is not None:
            ref = rdkit_fns(smiles)
        else:
            ref = {
                "LogP": logp_reference(mol),
                "TPSA": tpsa_reference(mol),
                "QED": qed_reference(mol),
                "MW": mw_reference(mol),
            }
        mine = {
            "LogP": crippen_logp(mol),
            "TPSA": ertl_tpsa(mol),
            "QED": qed(mol),
            "MW": sub_descriptors(mol)["MW"],
        }
        for key, tol in (("LogP", 0.01), ("TPSA", 0.01), ("MW", 0.01), ("QED", 0.05)):
            if abs(ref[key] - mine[key]) > tol:
                print(
                    f"route disagreement {smiles} {key}: "
                    f"reference {ref[key]:.4f} vs production {mine[key]:.4f}"
                )
                disagreements += 1
        entries.append({
            "smiles": smiles,
            "LogP": ref["LogP"],
            "TPSA": ref["TPSA"],
            "QED": ref["QED"],
            "MW": ref["MW"],
            "alerts": alerts_count(mol),
            "hbd": hbd_reference(mol),
        })

    if disagreements:
        print(f"\n{disagreements} disagreement(s); fixture NOT written")
        return 1

    fixture = {
        "provenance": provenance,
        "count": len(entries),
        "tolerances": {"LogP": 0.01, "TPSA": 0.01, "QED": 0.05},
        "molecules": entries,
    }
    out = Path(__file__).parent.parent / "tests" / "data" / "descriptor_oracle.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, indent=1, sort_keys=True) + "\n")
    print(f"wrote {out} with {len(entries)} molecules ({provenance})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
