"""Property registry: short names to calculators."""

from __future__ import annotations

from typing import Callable

from ..exceptions import ConfigurationError
from ..molgraph import MolGraph
from .crippen import crippen_logp
from .qed import qed
from .tables import ParameterTables, default_tables
from .tpsa import ertl_tpsa

PropertyVector = dict[str, float]

_CALCULATORS: dict[str, Callable[[MolGraph, ParameterTables], float]] = {
    "LogP": lambda mol, tables: crippen_logp(mol, tables),
    "TPSA": lambda mol, tables: ertl_tpsa(mol, tables),
    "QED": lambda mol, tables: qed(mol, tables),
}

REGISTERED_PROPERTIES = tuple(_CALCULATORS)


def compute_properties(
    mol: MolGraph,
    ids: list[str] | tuple[str, ...],
    tables: ParameterTables | None = None,
) -> PropertyVector:
    if not ids:
        raise ConfigurationError("at least one property id is required")
    tables = tables or default_tables()
    unknown = [p for p in ids if p not in _CALCULATORS]
    if unknown:
        raise ConfigurationError(
            f"unknown property {unknown[0]!r}; registered: {', '.join(_CALCULATORS)}"
        )
    vector: PropertyVector = {}
    for prop in ids:
        if prop == "QED":
            continue
        vector[prop] = _CALCULATORS[prop](mol, tables)
    if "QED" in ids:
        # QED consumes LogP and TPSA; reuse them when already computed.
        vector["QED"] = qed(
            mol, tables, alogp=vector.get("LogP"), psa=vector.get("TPSA")
        )
    return {prop: vector[prop] for prop in ids}
