#!/usr/bin/env python3
"""Generate the drug-like SMILES sample (tests/data/druglike_1000.smi).

Strings are composed purely by template substitution over known-good
scaffold/substituent text fragments (ring-closure digits in
substituents are shifted to stay clear of scaffold digits), so the
sample never passes through this package's parser or writer and
exercises the grammar from the outside: brackets, charges, isotopes,
fused rings, two-digit ring closures, stereo markers, and salts all
appear. Seeded and deterministic.

Run from the repository root: python3 tools/make_druglike_sample.py
"""

from __future__ import annotations

import random
import re
from pathlib import Path

# {} marks a substitution site on an aromatic carbon or a ring nitrogen.
SCAFFOLDS = [
    "c1ccc({})cc1",
    "c1ccc({})nc1",
    "c1ccc({})cn1",
    "c1cc({})ccn1",
    "c1cnc({})cn1",
    "c1nc({})ncc1",
    "c1cc({})on1",
    "c1cc({})sc1",
    "c1cc({})oc1",
    "c1cc({})cc2ccccc12",
    "c1ccc2cc({})ccc2c1",
    "c1ccc2[nH]c({})cc2c1",
    "c1ccc2nc({})ccc2c1",
    "c1ccc2ncc({})nc2c1",
    "c1ccc2oc({})nc2c1",
    "c1ccc2sc({})nc2c1",
    "c1ccc2c(c1)OCO2",
    "c1ccc(-c2ccc({})cc2)cc1",
    "c1ccc(-c2ccncc2{})cc1",
    "C1CCN({})CC1",
    "C1CCCN({})C1",
    "C1COCCN1{}",
    "O=C(N{})c1ccccc1",
    "O=S(=O)(N{})c1ccccc1",
    "O=C({})Nc1ccccc1",
    "O=C(O{})c1ccccc1",
    "CC(C)({})c1ccccc1",
    "O=C1NC({})=Nc2ccccc21",
    "Cn1cnc2c1c(=O)n({})c(=O)n2C",
    "CC1=CC({})CCC1",
]

# Fragments that can hang off an aromatic carbon (attachment atom is
# the first atom). Written exactly as they will be spliced.
C_SUBSTITUENTS = [
    "C", "CC", "CCC", "C(C)C", "C(C)(C)C", "CCCC",
    "F", "Cl", "Br", "I", "O", "OC", "OCC", "OC(C)C", "OCCO",
    "N", "NC", "N(C)C", "NCC", "NCCO",
    "C#N", "C=O", "C(C)=O", "C(=O)O", "C(=O)OC", "C(=O)OCC",
    "C(=O)N", "C(=O)NC", "C(=O)N(C)C",
    "C(F)(F)F", "OC(F)(F)F", "S", "SC", "S(C)(=O)=O", "S(N)(=O)=O",
    "CO", "CCO", "CN", "CCN", "CC(=O)O", "CC#N", "C=C", "C=CC",
    "CNC(C)=O", "NC(C)=O", "NC(N)=O", "NS(C)(=O)=O",
    "Cn3ccnc3", "N3CCOCC3", "N3CCNCC3", "N3CCCCC3", "C3CC3", "C3CCCCC3",
    "Oc3ccccc3", "c3ccccc3", "c3ccncc3", "Cc3ccccc3",
    "[N+](=O)[O-]", "N(=O)=O", "[13CH3]", "C[NH3+]", "CC(=O)[O-]",
    "/C=C/C", "/C=C/C(=O)O", "C(O)C", "C(N)C(=O)O",
]

# Fragments safe on a secondary amine nitrogen (must start with carbon).
N_SUBSTITUENTS = [
    "C", "CC", "CCC", "C(C)C", "CCO", "CCN", "CC(C)C",
    "C(=O)C", "C(=O)OC", "CC#N", "Cc3ccccc3", "c3ccccc3",
    "CCOC", "C(=O)c3ccccc3", "S(C)(=O)=O", "CC(=O)N",
]

SALTS = ["", "", "", "", ".[Na+]", ".[Cl-]", ".Cl", ".O", ".OC(=O)C(=O)O"]


def shift_ring_digits(fragment: str, offset: int) -> str:
    """Shift single-digit ring closures so spliced fragments never
    collide with scaffold digits (3 -> 3+offset, kept below 10).
    Digits inside bracket atoms (isotopes, H counts) are left alone."""
    def bump(match: re.Match) -> str:
        return str(int(match.group(0)) + offset)

    parts = re.split(r"(\[[^]]*\])", fragment)
    return "".join(
        part if part.startswith("[") else re.sub(r"(?<![%\d])[3-6](?!\d)", bump, part)
        for part in parts
    )


def main() -> int:
    rng = random.Random(20240731)
    seen: set[str] = set()
    out: list[str] = []
    n_target = 1000
    scaffolds = [s for s in SCAFFOLDS]
    while len(out) < n_target:
        scaffold = rng.choice(scaffolds)
        if "{}" in scaffold:
            site_is_nitrogen = any(tag in scaffold for tag in ("N({})", "N{}", "N1{}", "n({})", "O{}", "O({})"))
            pool = N_SUBSTITUENTS if site_is_nitrogen else C_SUBSTITUENTS
            fragment = rng.choice(pool)
            fragment = shift_ring_digits(fragment, rng.choice((0, 3)))
            smiles = scaffold.format(fragment)
        else:
            smiles = scaffold
        smiles += rng.choice(SALTS)
        if smiles in seen:
            continue
        seen.add(smiles)
        out.append(smiles)
    path = Path(__file__).parent.parent / "tests" / "data" / "druglike_1000.smi"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n")
    print(f"wrote {path} ({len(out)} molecules)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
