"""Parameter-table loading.

Assets are plain-text tabular files (one rule per line, '#' comments),
loaded once per process from the packaged asset directory or from a
caller-supplied override. Content hashes are recorded so reports can
pin exactly which tables produced their numbers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .patterns import Pattern, parse_pattern

_ASSET_DIR = Path(__file__).parent / "assets"


@dataclass(frozen=True)
class TypedRule:
    label: str
    pattern: Pattern
    value: float
    # Cheap prefilter derived from the pattern's first atom: an atom
    # can only match when these agree (None imposes nothing).
    anchor_elem: int | None = None
    anchor_arom: bool | None = None


def _anchor_requirement(pattern: Pattern) -> tuple[int | None, bool | None]:
    elem: int | None = None
    arom: bool | None = None
    for group in pattern.atoms[0].groups:
        if len(group) != 1:
            continue  # OR-alternatives impose no single requirement
        for prim in group[0]:
            if prim.negated:
                continue
            if prim.kind == "elem_aliph":
                elem, arom = prim.value, False
            elif prim.kind == "elem_arom":
                elem, arom = prim.value, True
            elif prim.kind == "elem":
                elem = prim.value
            elif prim.kind == "aromatic":
                arom = True
            elif prim.kind == "aliphatic":
                arom = False
    return elem, arom


@dataclass(frozen=True)
class ParameterTables:
    crippen_atom_rules: tuple[TypedRule, ...]
    crippen_h_rules: tuple[TypedRule, ...]
    tpsa_rules: tuple[TypedRule, ...]
    qed_params: dict[str, tuple[float, ...]]  # a b c d e f dmax
    qed_weights: dict[str, float]
    alert_rules: tuple[TypedRule, ...]
    asset_hashes: dict[str, str]


def _read_lines(path: Path) -> list[list[str]]:
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    return rows


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_tables(asset_dir: str | Path | None = None) -> ParameterTables:
    base = Path(asset_dir) if asset_dir else _ASSET_DIR

    def typed_rules(name: str, labeled: bool) -> tuple[TypedRule, ...]:
        rules = []
        for row in _read_lines(base / name):
            if labeled:
                label, pattern_text, value = row[0], row[1], float(row[2])
            else:
                label, pattern_text, value = "", row[0], float(row[1])
            pattern = parse_pattern(pattern_text)
            elem, arom = _anchor_requirement(pattern)
            rules.append(TypedRule(label, pattern, value, elem, arom))
        return tuple(rules)

    qed_params: dict[str, tuple[float, ...]] = {}
    qed_weights: dict[str, float] = {}
    for row in _read_lines(base / "qed.txt"):
        name, *numbers = row
        values = [float(x) for x in numbers]
        qed_params[name] = tuple(values[:7])
        qed_weights[name] = values[7]

    alert_rules = []
    for row in _read_lines(base / "alerts.txt"):
        pattern = parse_pattern(row[1])
        elem, arom = _anchor_requirement(pattern)
        alert_rules.append(TypedRule(row[0], pattern, 1.0, elem, arom))

    names = ["crippen.txt", "crippen_h.txt", "tpsa.txt", "qed.txt", "alerts.txt"]
    return ParameterTables(
        crippen_atom_rules=typed_rules("crippen.txt", labeled=True),
        crippen_h_rules=typed_rules("crippen_h.txt", labeled=True),
        tpsa_rules=typed_rules("tpsa.txt", labeled=False),
        qed_params=qed_params,
        qed_weights=qed_weights,
        alert_rules=tuple(alert_rules),
        asset_hashes={name: _sha256(base / name) for name in names},
    )


_DEFAULT: ParameterTables | None = None


def default_tables() -> ParameterTables:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_tables()
    return _DEFAULT
