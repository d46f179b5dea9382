"""Molecular property calculators: LogP, TPSA, QED and sub-descriptors."""

from .crippen import atom_types, crippen_logp
from .qed import QED_DESCRIPTOR_ORDER, ads, qed, qed_properties
from .registry import REGISTERED_PROPERTIES, PropertyVector, compute_properties
from .subdesc import (
    alerts_count,
    arom_count,
    hba_count,
    hbd_count,
    molecular_weight,
    rotb_count,
    sub_descriptors,
)
from .tables import ParameterTables, default_tables, load_tables
from .tpsa import ertl_tpsa

__all__ = [
    "QED_DESCRIPTOR_ORDER",
    "REGISTERED_PROPERTIES",
    "ParameterTables",
    "PropertyVector",
    "ads",
    "alerts_count",
    "arom_count",
    "atom_types",
    "compute_properties",
    "crippen_logp",
    "default_tables",
    "ertl_tpsa",
    "hba_count",
    "hbd_count",
    "load_tables",
    "molecular_weight",
    "qed",
    "qed_properties",
    "rotb_count",
    "sub_descriptors",
]
