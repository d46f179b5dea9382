"""Example-molecule database: build, persist, and query.

The index file is line one header JSON, then one JSON object per
record. Retrieval returns the record most Tanimoto-similar to the
query fingerprint among records whose own properties satisfy the
objective relative to the given molecule's properties; ties break to
the lowest record index and excluded signatures never qualify. A
linear scan keeps the argmax exact at the database sizes in play.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .descriptors import REGISTERED_PROPERTIES, ParameterTables, compute_properties, default_tables
from .exceptions import UsageError
from .fingerprint import Fingerprint, morgan_fingerprint, tanimoto
from .molgraph import graph_signature, parse_smiles, write_smiles
from .objective import ObjectiveSpec, PropertyVector, evaluate

logger = logging.getLogger(__name__)

INDEX_VERSION = 1


@dataclass(frozen=True)
class MoleculeRecord:
    smiles: str
    properties: PropertyVector
    fingerprint: Fingerprint
    signature: str


@dataclass(frozen=True)
class DatabaseHeader:
    version: int
    nbits: int
    radius: int
    properties: tuple[str, ...]
    asset_hashes: dict[str, str]
    count: int


@dataclass(frozen=True)
class Database:
    header: DatabaseHeader
    records: tuple[MoleculeRecord, ...]


def build_database(
    smiles_lines: list[str],
    nbits: int,
    radius: int,
    property_ids: tuple[str, ...] = REGISTERED_PROPERTIES,
    tables: ParameterTables | None = None,
) -> tuple[Database, int]:
    """Parse, normalize, deduplicate; returns (database, skipped count)."""
    tables = tables or default_tables()
    records: list[MoleculeRecord] = []
    seen: set[str] = set()
    skipped = 0
    for lineno, raw in enumerate(smiles_lines, start=1):
        text = raw.strip()
        if not text:
            continue
        outcome = parse_smiles(text)
        if not outcome.valid:
            skipped += 1
            logger.info("line %d skipped (%s): %s", lineno, outcome.error.render(), text)
            continue
        mol = outcome.mol
        sig = graph_signature(mol)
        if sig in seen:
            skipped += 1
            logger.info("line %d skipped (duplicate signature): %s", lineno, text)
            continue
        seen.add(sig)
        records.append(MoleculeRecord(
            smiles=write_smiles(mol),
            properties=compute_properties(mol, property_ids, tables),
            fingerprint=morgan_fingerprint(mol, radius, nbits),
            signature=sig,
        ))
    if not records:
        raise UsageError("no valid molecules in input; cannot build an index")
    header = DatabaseHeader(
        version=INDEX_VERSION,
        nbits=nbits,
        radius=radius,
        properties=tuple(property_ids),
        asset_hashes=dict(tables.asset_hashes),
        count=len(records),
    )
    return Database(header, tuple(records)), skipped


def build_index(
    smiles_file: str | Path,
    out: str | Path,
    nbits: int,
    radius: int,
    property_ids: tuple[str, ...] = REGISTERED_PROPERTIES,
    tables: ParameterTables | None = None,
) -> Database:
    lines = Path(smiles_file).read_text().splitlines()
    db, skipped = build_database(lines, nbits, radius, property_ids, tables)
    save_database(db, out)
    if skipped:
        logger.info("skipped %d lines while building %s", skipped, out)
    return db


def save_database(db: Database, path: str | Path) -> None:
    with open(path, "w") as fh:
        header = {
            "version": db.header.version,
            "nbits": db.header.nbits,
            "radius": db.header.radius,
            "properties": list(db.header.properties),
            "asset_hashes": db.header.asset_hashes,
            "count": db.header.count,
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for record in db.records:
            fh.write(json.dumps({
                "smiles": record.smiles,
                "sig": record.signature,
                "props": record.properties,
                "fp": record.fingerprint.to_base64(),
            }, sort_keys=True) + "\n")


def load_database(path: str | Path) -> Database:
    with open(path) as fh:
        header_line = fh.readline()
        if not header_line.strip():
            raise UsageError(f"{path} is empty; not an index file")
        raw = json.loads(header_line)
        header = DatabaseHeader(
            version=raw["version"],
            nbits=raw["nbits"],
            radius=raw["radius"],
            properties=tuple(raw["properties"]),
            asset_hashes=dict(raw["asset_hashes"]),
            count=raw["count"],
        )
        records = []
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records.append(MoleculeRecord(
                smiles=obj["smiles"],
                properties={k: float(v) for k, v in obj["props"].items()},
                fingerprint=Fingerprint.from_base64(obj["fp"], header.nbits, header.radius),
                signature=obj["sig"],
            ))
    if len(records) != header.count:
        raise UsageError(
            f"{path} holds {len(records)} records but the header says {header.count}"
        )
    return Database(header, tuple(records))


def retrieve_example(
    db: Database,
    spec: ObjectiveSpec,
    props_m: PropertyVector,
    fp_mhat: Fingerprint,
    exclude: set[str] | frozenset[str] = frozenset(),
) -> MoleculeRecord | None:
    """Most-similar record that itself meets the objective against the
    given molecule; None when nothing qualifies."""
    if fp_mhat.nbits != db.header.nbits or fp_mhat.radius != db.header.radius:
        raise UsageError(
            f"query fingerprint (nbits={fp_mhat.nbits}, radius={fp_mhat.radius}) does not "
            f"match the index (nbits={db.header.nbits}, radius={db.header.radius})"
        )
    missing = [p for p in spec.property_ids() if p not in db.header.properties]
    if missing:
        raise UsageError(f"index lacks objective properties: {', '.join(missing)}")
    best: MoleculeRecord | None = None
    best_sim = -1.0
    for record in db.records:
        if record.signature in exclude:
            continue
        if not evaluate(spec, props_m, record.properties).overall:
            continue
        sim = tanimoto(record.fingerprint, fp_mhat)
        if sim > best_sim:
            best = record
            best_sim = sim
    return best
