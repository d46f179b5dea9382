"""Independent descriptor computations used to build the parity fixture.

This module deliberately re-derives LogP atom typing and TPSA
environment classification as explicit decision trees, written
separately from the package's pattern-rule engine, so the fixture
captures a second opinion: a bug in either route (or a mistranscribed
rule) shows up as a disagreement at fixture-build time.

If a reference cheminformatics toolkit (rdkit) is importable, its
values are used instead and recorded as such; the sandbox this package
was developed in has none, which is noted in the fixture header.
"""

from __future__ import annotations

import math

from molrefine.descriptors.qed import QED_DESCRIPTOR_ORDER
from molrefine.descriptors.subdesc import (
    alerts_count,
    arom_count,
    hba_count,
    rotb_count,
)
from molrefine.descriptors.tables import default_tables
from molrefine.molgraph import BondOrder, MolGraph
from molrefine.molgraph.elements import ATOMIC_WEIGHTS

# ---------------------------------------------------------------- helpers


def _counts(mol: MolGraph, idx: int) -> dict:
    single = double = triple = aromatic = 0
    for _, bidx in mol.adjacency[idx]:
        order = mol.bonds[bidx].order
        if order is BondOrder.SINGLE:
            single += 1
        elif order is BondOrder.DOUBLE:
            double += 1
        elif order is BondOrder.TRIPLE:
            triple += 1
        else:
            aromatic += 1
    atom = mol.atoms[idx]
    return {
        "elem": atom.element,
        "arom": atom.aromatic_flag,
        "chg": atom.formal_charge,
        "h": mol.total_h(idx),
        "s": single,
        "d": double,
        "t": triple,
        "a": aromatic,
        "deg": mol.degree(idx),
        "in3ring": any(len(r) == 3 and idx in r for r in mol.rings),
    }


def _neighbor_elems(mol: MolGraph, idx: int, order: BondOrder | None = None):
    out = []
    for nbr, bidx in mol.adjacency[idx]:
        if order is None or mol.bonds[bidx].order is order:
            out.append((mol.atoms[nbr].element, mol.atoms[nbr].aromatic_flag, nbr))
    return out


# ---------------------------------------------------------------- TPSA

def tpsa_reference(mol: MolGraph) -> float:
    """Ertl fragment sums via an explicit environment decision tree."""
    total = 0.0
    for idx, atom in enumerate(mol.atoms):
        if atom.element == "N":
            total += _tpsa_n(_counts(mol, idx))
        elif atom.element == "O":
            total += _tpsa_o(_counts(mol, idx))
    return total


def _tpsa_n(c: dict) -> float:
    h, chg = c["h"], c["chg"]
    s, d, t, a = c["s"], c["d"], c["t"], c["a"]
    if c["arom"]:
        if chg == 0:
            if h == 0 and a == 2 and s == 0 and d == 0:
                return 12.89
            if h == 0 and a == 3:
                return 4.41
            if h == 0 and a == 2 and s == 1:
                return 4.93
            if h == 0 and a == 2 and d == 1:
                return 8.39
            if h == 1 and a == 2:
                return 15.79
        elif chg == 1:
            if h == 0 and a == 3:
                return 4.10
            if h == 0 and a == 2 and s == 1:
                return 3.88
            if h == 1 and a == 2:
                return 14.14
        return 0.0
    if chg == 0:
        if h == 0:
            if s == 3 and d == 0 and t == 0:
                return 3.01 if c["in3ring"] else 3.24
            if s == 1 and d == 1 and t == 0:
                return 12.36
            if s == 0 and d == 0 and t == 1:
                return 23.79
            if s == 1 and d == 2:
                return 11.68
            if d == 1 and t == 1:
                return 13.60
        elif h == 1:
            if s == 2 and d == 0:
                return 21.94 if c["in3ring"] else 12.03
            if s == 0 and d == 1:
                return 23.85
        elif h == 2 and s == 1:
            return 26.02
    elif chg == 1:
        if h == 0:
            if s == 4:
                return 0.0
            if s == 2 and d == 1:
                return 3.01
            if s == 1 and t == 1:
                return 4.36
        elif h == 1:
            if s == 3:
                return 4.44
            if s == 1 and d == 1:
                return 13.97
        elif h == 2:
            if s == 2:
                return 16.61
            if d == 1:
                return 25.59
        elif h == 3 and s == 1:
            return 27.64
    return 0.0


def _tpsa_o(c: dict) -> float:
    h, chg = c["h"], c["chg"]
    s, d, a = c["s"], c["d"], c["a"]
    if c["arom"]:
        return 13.14 if a == 2 and chg == 0 and h == 0 else 0.0
    if chg == 0:
        if h == 0 and s == 2 and d == 0:
            return 12.53 if c["in3ring"] else 9.23
        if h == 0 and d == 1 and s == 0:
            return 17.07
        if h == 1 and s == 1:
            return 20.23
    elif chg == -1:
        if h == 0 and s == 1 and d == 0:
            return 23.06
    return 0.0


# ---------------------------------------------------------------- LogP

_HETERO = {"N", "O", "P", "S", "F", "Cl", "Br", "I"}


def logp_reference(mol: MolGraph) -> float:
    """Wildman-Crippen contributions via an explicit decision tree."""
    total = 0.0
    for idx in range(len(mol.atoms)):
        total += _carbon(mol, idx) if mol.atoms[idx].element == "C" else 0.0
        elem = mol.atoms[idx].element
        if elem == "N":
            total += _nitrogen(mol, idx)
        elif elem == "O":
            total += _oxygen(mol, idx)
        elif elem in ("F", "Cl", "Br", "I"):
            total += _halogen(mol, idx)
        elif elem == "P":
            total += 0.8612
        elif elem == "S":
            total += _sulfur(mol, idx)
        elif elem in ("Li", "Be", "Na", "Mg", "K", "Ca", "Rb", "Sr", "Cs", "Ba"):
            total += -0.3808
        elif elem in ("Al", "Si", "Ga", "Ge", "As", "Se", "In", "Sn", "Sb", "Te"):
            total += -0.0025
        elif elem not in ("C", "H"):
            total += 0.0
        total += _hydrogens(mol, idx)
    return total


def _carbon(mol: MolGraph, idx: int) -> float:
    c = _counts(mol, idx)
    h = c["h"]
    nbrs = _neighbor_elems(mol, idx)
    nbr_elems = [e for e, _, _ in nbrs]
    arom_nbrs = [ar for _, ar, _ in nbrs]
    x = c["deg"] + h

    if c["arom"]:
        if any(e == "F" and not ar for e, ar, _ in nbrs):
            return 0.0  # C14
        if any(e == "Cl" and not ar for e, ar, _ in nbrs):
            return 0.245  # C15
        if any(e == "Br" and not ar for e, ar, _ in nbrs):
            return 0.198  # C16
        if any(e == "I" and not ar for e, ar, _ in nbrs):
            return 0.0  # C17
        if h == 0:
            exotic = [
                e for e, ar, _ in nbrs
                if not ar and e not in ("C", "N", "O", "S", "F", "Cl", "Br", "I", "H")
            ]
            if exotic and c["s"] >= 1:
                return -0.5443  # C13
        if h == 1:
            return 0.1581  # C18
        if c["a"] == 3:
            return 0.2955  # C19
        if c["d"] == 1:
            doubles = _neighbor_elems(mol, idx, BondOrder.DOUBLE)
            if doubles and doubles[0][0] in ("C", "N", "O"):
                return -0.8186  # C25
        if c["s"] == 1:
            other = [(e, ar) for e, ar, _ in nbrs if True]
            single_nbr = _neighbor_elems(mol, idx, BondOrder.SINGLE)[0]
            e, ar, _ = single_nbr
            if ar:
                return 0.2713  # C20
            if e == "C":
                return 0.136  # C21
            if e == "N":
                return 0.4619  # C22
            if e == "O":
                return 0.5437  # C23
            if e == "S":
                return 0.1893  # C24
        return 0.08129  # CS fallback

    # aliphatic carbon
    if c["d"] == 0 and c["t"] == 0 and c["a"] == 0:
        hetero = [e for e, ar, _ in nbrs if e in _HETERO and not ar]
        arom_attached = any(ar for _, ar, _ in nbrs)
        if x == 4:
            if hetero:
                return -0.2035 if h >= 2 else -0.2051  # C3 / C4
            if arom_attached:
                if h == 3:
                    return 0.08452 if all(
                        e == "C" for e, ar, _ in nbrs if ar
                    ) else -0.1444  # C8 / C9 (c vs other aromatic)
                if h == 2:
                    return -0.0516  # C10
                if h == 1:
                    return 0.1193  # C11
                return -0.0967  # C12
            if all(e == "C" for e in nbr_elems) or not nbrs:
                return 0.1441 if h >= 2 else 0.0  # C1 / C2
            return 0.2148  # C27 (attached to exotic atom)
        return 0.08129
    if c["t"] >= 1:
        return 0.0017  # C7
    # sp2 aliphatic carbon
    doubles = _neighbor_elems(mol, idx, BondOrder.DOUBLE)
    if doubles:
        e, ar, _ = doubles[0]
        if ar and e == "C":
            return 0.264  # C26 ([C]=c)
        if e != "C":
            return -0.2783  # C5 (carbonyl and relatives)
        # C=C: aromatic-substituted sp2 goes to C26, else C6
        others = [(oe, oar) for oe, oar, _ in nbrs]
        if any(oar for oe, oar in others):
            return 0.264  # C26
        return 0.1551  # C6
    return 0.08129


def _nitrogen(mol: MolGraph, idx: int) -> float:
    c = _counts(mol, idx)
    h, chg = c["h"], c["chg"]
    nbrs = _neighbor_elems(mol, idx)
    if c["arom"]:
        return -0.3239 if chg == 0 else (-1.119 if chg > 0 else -0.4806)
    if chg == 0:
        arom_attached = any(ar for _, ar, _ in nbrs)
        if h == 2 and c["deg"] == 1:
            return -1.027 if arom_attached else -1.019  # N3 / N1
        if h == 1 and c["deg"] == 2 and c["d"] == 0:
            return -0.5188 if arom_attached else -0.7096  # N4 / N2
        if h == 1 and c["d"] == 1:
            return 0.08387  # N5
        if h == 0 and c["d"] == 1 and c["deg"] == 2:
            return 0.1836  # N6
        if h == 0 and c["deg"] == 3 and c["d"] == 0:
            return -0.4458 if arom_attached else -0.3187  # N8 / N7
        if c["t"] == 1 and c["deg"] == 1:
            return 0.01508  # N9
        if c["d"] == 2:
            return 0.1836  # neutral nitro via N6-style match
        return -0.4806  # NS
    if chg > 0:
        if 1 <= h <= 3 and c["d"] == 0 and c["t"] == 0:
            return -1.95  # N10 protonated amine
        if h == 0 and (c["s"] == 4 or (c["s"] >= 1 and c["d"] == 1) or c["d"] == 2):
            # quaternary or iminium or charged nitro
            doubles = _neighbor_elems(mol, idx, BondOrder.DOUBLE)
            if any(mol.atoms[n].formal_charge < 0 and e == "N" for e, _, n in doubles):
                return 0.2887  # N14 azide center
            return -0.3396  # N13
        if c["t"] == 1:
            return 0.2887  # N14
        return -0.4806
    return 0.2887  # N14 anions


def _oxygen(mol: MolGraph, idx: int) -> float:
    c = _counts(mol, idx)
    h, chg = c["h"], c["chg"]
    nbrs = _neighbor_elems(mol, idx)
    if c["arom"]:
        return 0.1552  # O1
    if chg == 0:
        if h >= 1:
            return -0.2893  # O2
        if c["d"] == 1:
            e, ar, n = _neighbor_elems(mol, idx, BondOrder.DOUBLE)[0]
            if e in ("N", "O"):
                return 0.0335  # O5
            if e == "S":
                return -0.3339  # O6
            if ar and e == "C":
                return 0.1788  # O8
            if e == "C":
                partner_nbrs = [
                    (pe, par) for pe, par, pn in _neighbor_elems(mol, n) if pn != idx
                ]
                carbons = [pe for pe, par in partner_nbrs if pe == "C" or pe == "H"]
                arom_partners = [par for pe, par in partner_nbrs if par]
                hetero_partners = [
                    pe for pe, par in partner_nbrs
                    if pe not in ("C", "H") and not par
                ]
                h_on_c = mol.total_h(n)
                if len(hetero_partners) >= 2:
                    return 0.4833  # O11
                if arom_partners:
                    return 0.1129  # O10
                return -0.1526  # O9
            return -0.1188
        if c["s"] == 2:
            arom_attached = any(ar for _, ar, _ in nbrs)
            return 0.4833 if arom_attached else -0.0684  # O4 / O3
        return -0.1188  # OS
    if chg < 0:
        single = _neighbor_elems(mol, idx, BondOrder.SINGLE)
        if single:
            e, ar, n = single[0]
            if e == "N":
                return 0.0335  # O5
            if e == "S":
                return -0.3339  # O6
            if e == "C":
                has_carbonyl = any(
                    mol.bonds[b].order is BondOrder.DOUBLE and mol.atoms[p].element == "O"
                    for p, b in mol.adjacency[n]
                )
                if has_carbonyl:
                    return -1.326  # O12 carboxylate
            return -1.189  # O7
        return -1.189
    return -0.1188


def _halogen(mol: MolGraph, idx: int) -> float:
    atom = mol.atoms[idx]
    if atom.formal_charge != 0:
        return -2.996  # Hal ions
    return {"F": 0.4202, "Cl": 0.6895, "Br": 0.8456, "I": 0.8857}[atom.element]


def _sulfur(mol: MolGraph, idx: int) -> float:
    c = _counts(mol, idx)
    if c["arom"]:
        return 0.6237  # S3
    if c["chg"] != 0:
        return -0.0024  # S2 charged
    if c["d"] >= 1:
        doubles = [e for e, _, _ in _neighbor_elems(mol, idx, BondOrder.DOUBLE)]
        if any(e in ("N", "O", "P", "S") for e in doubles):
            return -0.0024  # S2 (sulfoxide/sulfone)
    return 0.6482  # S1


def _hydrogens(mol: MolGraph, idx: int) -> float:
    count = mol.total_h(idx)
    if count == 0:
        return 0.0
    atom = mol.atoms[idx]
    if atom.element == "C":
        per_h = 0.123  # H1
    elif atom.element == "N":
        per_h = 0.2142  # H3
    elif atom.element == "O":
        nbrs = _neighbor_elems(mol, idx)
        if any(e == "N" for e, _, _ in nbrs):
            per_h = 0.2142  # H3 (N-OH)
        elif any(e in ("O", "S") for e, _, _ in nbrs):
            per_h = 0.298  # H4 (peroxide)
        elif any(
            e == "C" and not ar and _has_multiple_to_cnos(mol, n)
            for e, ar, n in nbrs
        ):
            per_h = 0.298  # H4 (acid / enol)
        elif nbrs:
            per_h = -0.2677  # H2 (alcohol, phenol)
        else:
            per_h = 0.1125  # HS (water)
    else:
        per_h = -0.2677  # H2: H on S/P/B and other non-CNO atoms
    return count * per_h


def _has_multiple_to_cnos(mol: MolGraph, idx: int) -> bool:
    for nbr, bidx in mol.adjacency[idx]:
        if mol.bonds[bidx].order is BondOrder.DOUBLE and mol.atoms[nbr].element in (
            "C", "N", "O", "S",
        ):
            return True
    return False


# ---------------------------------------------------------------- QED

_ADS_TABLE = {
    "MW": (2.817065973, 392.5754953, 290.7489764, 2.419764353, 49.22325677, 65.37051707, 104.9805561),
    "ALOGP": (3.172690585, 137.8624751, 2.534937431, 4.581497897, 0.822739154, 0.576295591, 131.3186604),
    "HBA": (2.948620388, 160.4605972, 3.615294657, 4.435986202, 0.290141953, 1.300669958, 148.7763046),
    "HBD": (1.618662227, 1010.051101, 0.985094388, 0.000000001, 0.713820843, 0.920922555, 258.1632616),
    "PSA": (1.876861559, 125.2232657, 62.90773554, 87.83366614, 12.01999824, 28.51324732, 104.5686167),
    "ROTB": (0.01, 272.4121427, 2.55837997, 1.565547684, 1.271567166, 2.758063707, 105.4420403),
    "AROM": (3.21778897, 957.7374108, 2.274627939, 0.000000001, 1.317690384, 0.375760881, 312.3372610),
    "ALERTS": (0.01, 1199.094025, -0.09002883, 0.000000001, 0.185904477, 0.875193782, 417.7253140),
}
_WEIGHTS = {
    "MW": 0.66, "ALOGP": 0.46, "HBA": 0.05, "HBD": 0.61,
    "PSA": 0.06, "ROTB": 0.65, "AROM": 0.48, "ALERTS": 0.95,
}


def mw_reference(mol: MolGraph) -> float:
    return sum(
        ATOMIC_WEIGHTS[a.element] + mol.total_h(i) * ATOMIC_WEIGHTS["H"]
        for i, a in enumerate(mol.atoms)
    )


def hbd_reference(mol: MolGraph) -> int:
    return sum(
        mol.total_h(i) for i, a in enumerate(mol.atoms) if a.element in ("N", "O")
    )


def qed_reference(mol: MolGraph) -> float:
    """Independent formula evaluation; HBA/ROTB/AROM/ALERTS reuse the
    package's structural definitions (pinned by design decisions)."""
    tables = default_tables()
    values = {
        "MW": mw_reference(mol),
        "ALOGP": logp_reference(mol),
        "HBA": float(hba_count(mol)),
        "HBD": float(hbd_reference(mol)),
        "PSA": tpsa_reference(mol),
        "ROTB": float(rotb_count(mol)),
        "AROM": float(arom_count(mol)),
        "ALERTS": float(alerts_count(mol, tables)),
    }
    log_sum = 0.0
    weight_sum = 0.0
    for name in QED_DESCRIPTOR_ORDER:
        a, b, c, d, e, f, dmax = _ADS_TABLE[name]
        x = values[name]
        desirability = (
            a + b / (1.0 + math.exp(-(x - c + d / 2.0) / e))
            * (1.0 - 1.0 / (1.0 + math.exp(-(x - c - d / 2.0) / f)))
        ) / dmax
        log_sum += _WEIGHTS[name] * math.log(desirability)
        weight_sum += _WEIGHTS[name]
    return math.exp(log_sum / weight_sum)
