"""Quantitative drug-likeness estimate.

A weighted geometric mean of eight desirability values, each an
asymmetric double sigmoid over one descriptor (MW, ALOGP, HBA, HBD,
PSA, ROTB, AROM, ALERTS). Coefficients and weights ship in qed.txt.
"""

from __future__ import annotations

import math

from ..molgraph import MolGraph
from .crippen import crippen_logp
from .subdesc import sub_descriptors
from .tables import ParameterTables, default_tables
from .tpsa import ertl_tpsa

QED_DESCRIPTOR_ORDER = ("MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS")


def ads(x: float, coeffs: tuple[float, ...]) -> float:
    a, b, c, d, e, f, dmax = coeffs
    rise = 1.0 + math.exp(-(x - c + d / 2.0) / e)
    fall = 1.0 + math.exp(-(x - c - d / 2.0) / f)
    return (a + b / rise * (1.0 - 1.0 / fall)) / dmax


def qed_properties(
    mol: MolGraph,
    tables: ParameterTables | None = None,
    alogp: float | None = None,
    psa: float | None = None,
) -> dict[str, float]:
    tables = tables or default_tables()
    values = sub_descriptors(mol, tables)
    values["ALOGP"] = crippen_logp(mol, tables) if alogp is None else alogp
    values["PSA"] = ertl_tpsa(mol, tables) if psa is None else psa
    return values


def qed(
    mol: MolGraph,
    tables: ParameterTables | None = None,
    alogp: float | None = None,
    psa: float | None = None,
) -> float:
    tables = tables or default_tables()
    values = qed_properties(mol, tables, alogp=alogp, psa=psa)
    weighted = 0.0
    total_weight = 0.0
    for name in QED_DESCRIPTOR_ORDER:
        weight = tables.qed_weights[name]
        desirability = ads(values[name], tables.qed_params[name])
        weighted += weight * math.log(desirability)
        total_weight += weight
    return math.exp(weighted / total_weight)
