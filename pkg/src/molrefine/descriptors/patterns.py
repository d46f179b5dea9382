"""Substructure patterns for atom typing and fragment alerts.

A deliberately small SMARTS-like vocabulary, enough to express the
shipped descriptor rule tables:

    atoms    C N O ... (aliphatic), c n o s (aromatic), and bracket
             expressions over primitives: #<n> atomic number, A
             aliphatic, a aromatic, * any, H<n> total hydrogens,
             X<n> connectivity incl. H, D<n> heavy degree, R / R0
             ring membership, r<n> in a ring of that size,
             +<n> / -<n> formal charge; '!' negates one primitive,
             ',' is OR between primitive chains, ';' and '&' are AND
    bonds    default (single or aromatic), - = # : ~
    shape    branches in parentheses, ring-closure digits

This is not a general SMARTS engine; it is the matcher behind the
rule files in assets/.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..molgraph import BondOrder, MolGraph
from ..molgraph.elements import ATOMIC_NUMBER


@dataclass(frozen=True)
class Primitive:
    kind: str
    value: int | None = None
    negated: bool = False


@dataclass
class PatternAtom:
    # Conjunction of groups; each group is a disjunction of primitive
    # chains (SMARTS precedence: ';' AND over ',' OR over '&' AND).
    groups: list[list[list[Primitive]]] = field(default_factory=list)


@dataclass
class PatternEdge:
    a: int
    b: int
    kind: str  # one of - = # : ~ or "" for default


@dataclass
class Pattern:
    text: str
    atoms: list[PatternAtom]
    edges: list[PatternEdge]
    adjacency: list[list[tuple[int, str]]] = field(default_factory=list)

    def finalize(self) -> "Pattern":
        self.adjacency = [[] for _ in self.atoms]
        for edge in self.edges:
            self.adjacency[edge.a].append((edge.b, edge.kind))
            self.adjacency[edge.b].append((edge.a, edge.kind))
        return self


class PatternSyntaxError(ValueError):
    pass


_AROMATIC_BARE = {"b", "c", "n", "o", "p", "s"}
_BOND_KINDS = {"-", "=", "#", ":", "~"}


def parse_pattern(text: str) -> Pattern:
    atoms: list[PatternAtom] = []
    edges: list[PatternEdge] = []
    branch_stack: list[int] = []
    open_rings: dict[int, tuple[int, str]] = {}
    prev: int | None = None
    pending = ""
    i = 0
    n = len(text)

    def attach(idx: int) -> None:
        nonlocal pending, prev
        if prev is not None:
            edges.append(PatternEdge(prev, idx, pending))
        pending = ""
        prev = idx

    while i < n:
        ch = text[i]
        if ch in _BOND_KINDS:
            pending = ch
            i += 1
        elif ch == "(":
            if prev is None:
                raise PatternSyntaxError(f"branch with no atom in {text!r}")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise PatternSyntaxError(f"unmatched ')' in {text!r}")
            prev = branch_stack.pop()
            i += 1
        elif ch.isdigit():
            num = int(ch)
            if num in open_rings:
                other, okind = open_rings.pop(num)
                kind = pending or okind
                edges.append(PatternEdge(prev, other, kind))
            else:
                open_rings[num] = (prev, pending)
            pending = ""
            i += 1
        elif ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise PatternSyntaxError(f"unterminated bracket in {text!r}")
            atom = _parse_bracket(text[i + 1 : end])
            atoms.append(atom)
            attach(len(atoms) - 1)
            i = end + 1
        elif ch.isalpha() or ch == "*":
            sym = ch
            if ch.isupper() and i + 1 < n and text[i + 1].islower():
                two = text[i : i + 2]
                if two in ("Cl", "Br"):
                    sym = two
            atoms.append(PatternAtom([[_bare_primitives(sym)]]))
            attach(len(atoms) - 1)
            i += len(sym)
        else:
            raise PatternSyntaxError(f"unexpected {ch!r} in pattern {text!r}")
    if branch_stack or open_rings:
        raise PatternSyntaxError(f"unbalanced pattern {text!r}")
    if not atoms:
        raise PatternSyntaxError(f"empty pattern {text!r}")
    return Pattern(text, atoms, edges).finalize()


def _bare_primitives(symbol: str) -> list[Primitive]:
    if symbol == "*":
        return [Primitive("any")]
    if symbol == "A":
        return [Primitive("aliphatic")]
    if symbol == "a":
        return [Primitive("aromatic")]
    if symbol in _AROMATIC_BARE:
        return [Primitive("elem_arom", ATOMIC_NUMBER[symbol.upper()])]
    if symbol in ATOMIC_NUMBER:
        return [Primitive("elem_aliph", ATOMIC_NUMBER[symbol])]
    raise PatternSyntaxError(f"unknown atom symbol {symbol!r}")


def _parse_bracket(body: str) -> PatternAtom:
    groups: list[list[list[Primitive]]] = []
    for group_text in body.split(";"):
        alternatives: list[list[Primitive]] = []
        for chunk in group_text.split(","):
            alternatives.append(_parse_chain(chunk, body))
        groups.append(alternatives)
    return PatternAtom(groups)


def _parse_chain(chunk: str, body: str) -> list[Primitive]:
    prims: list[Primitive] = []
    i = 0
    n = len(chunk)
    while i < n:
        ch = chunk[i]
        negated = False
        if ch == "&":
            i += 1
            continue
        if ch == "!":
            negated = True
            i += 1
            if i >= n:
                raise PatternSyntaxError(f"dangling '!' in [{body}]")
            ch = chunk[i]

        def read_int(default: int | None) -> int | None:
            nonlocal i
            digits = ""
            while i < n and chunk[i].isdigit():
                digits += chunk[i]
                i += 1
            return int(digits) if digits else default

        if ch == "#":
            i += 1
            num = read_int(None)
            if num is None:
                raise PatternSyntaxError(f"'#' needs digits in [{body}]")
            prims.append(Primitive("elem", num, negated))
        elif ch == "*":
            i += 1
            prims.append(Primitive("any", negated=negated))
        elif ch == "A":
            i += 1
            prims.append(Primitive("aliphatic", negated=negated))
        elif ch == "a":
            i += 1
            prims.append(Primitive("aromatic", negated=negated))
        elif ch == "H":
            i += 1
            prims.append(Primitive("hcount", read_int(1), negated))
        elif ch == "X":
            i += 1
            prims.append(Primitive("connectivity", read_int(None), negated))
        elif ch == "D":
            i += 1
            prims.append(Primitive("degree", read_int(None), negated))
        elif ch == "R":
            i += 1
            count = read_int(None)
            if count == 0:
                prims.append(Primitive("ring", negated=not negated))
            else:
                prims.append(Primitive("ring", negated=negated))
        elif ch == "r":
            i += 1
            prims.append(Primitive("ring_size", read_int(None), negated))
        elif ch in "+-":
            sign = 1 if ch == "+" else -1
            count = 0
            while i < n and chunk[i] == ch:
                count += 1
                i += 1
            num = read_int(None)
            charge = sign * num if num is not None else sign * count
            prims.append(Primitive("charge", charge, negated))
        elif ch.isupper():
            two = chunk[i : i + 2]
            if len(two) == 2 and two[1].islower() and two in ATOMIC_NUMBER:
                sym = two
            elif ch in ATOMIC_NUMBER:
                sym = ch
            else:
                raise PatternSyntaxError(f"unknown element {ch!r} in [{body}]")
            i += len(sym)
            # Fused element+aliphatic test so negation is atomic; rule
            # files use !#n where aromaticity must not matter.
            prims.append(Primitive("elem_aliph", ATOMIC_NUMBER[sym], negated))
        elif ch in _AROMATIC_BARE:
            i += 1
            prims.append(Primitive("elem_arom", ATOMIC_NUMBER[ch.upper()], negated))
        else:
            raise PatternSyntaxError(f"unexpected {ch!r} in [{body}]")
    if not prims:
        raise PatternSyntaxError(f"empty alternative in [{body}]")
    return prims


class MolView:
    """Per-molecule feature cache shared across many pattern matches."""

    def __init__(self, mol: MolGraph) -> None:
        self.mol = mol
        n = len(mol.atoms)
        self.elem = [ATOMIC_NUMBER[a.element] for a in mol.atoms]
        self.aromatic = [a.aromatic_flag for a in mol.atoms]
        self.charge = [a.formal_charge for a in mol.atoms]
        self.total_h = [mol.total_h(i) for i in range(n)]
        self.degree = [mol.degree(i) for i in range(n)]
        self.connectivity = [self.degree[i] + self.total_h[i] for i in range(n)]
        self.in_ring = [i in mol.ring_atoms for i in range(n)]
        self.ring_sizes: list[set[int]] = [set() for _ in range(n)]
        for ring in mol.rings:
            for idx in ring:
                self.ring_sizes[idx].add(len(ring))

    def primitive_ok(self, prim: Primitive, idx: int) -> bool:
        kind = prim.kind
        if kind == "any":
            ok = True
        elif kind == "elem":
            ok = self.elem[idx] == prim.value
        elif kind == "elem_aliph":
            ok = self.elem[idx] == prim.value and not self.aromatic[idx]
        elif kind == "elem_arom":
            ok = self.elem[idx] == prim.value and self.aromatic[idx]
        elif kind == "aromatic":
            ok = self.aromatic[idx]
        elif kind == "aliphatic":
            ok = not self.aromatic[idx]
        elif kind == "hcount":
            ok = self.total_h[idx] == prim.value
        elif kind == "connectivity":
            ok = self.connectivity[idx] == prim.value
        elif kind == "degree":
            ok = self.degree[idx] == prim.value
        elif kind == "ring":
            ok = self.in_ring[idx]
        elif kind == "ring_size":
            ok = prim.value in self.ring_sizes[idx]
        elif kind == "charge":
            ok = self.charge[idx] == prim.value
        else:  # pragma: no cover - parser emits known kinds only
            raise AssertionError(f"unknown primitive {kind}")
        return not ok if prim.negated else ok

    def atom_ok(self, patom: PatternAtom, idx: int) -> bool:
        return all(
            any(
                all(self.primitive_ok(p, idx) for p in chain)
                for chain in group
            )
            for group in patom.groups
        )

    def bond_ok(self, kind: str, order: BondOrder) -> bool:
        if kind == "":
            return order in (BondOrder.SINGLE, BondOrder.AROMATIC)
        if kind == "~":
            return True
        return {
            "-": BondOrder.SINGLE,
            "=": BondOrder.DOUBLE,
            "#": BondOrder.TRIPLE,
            ":": BondOrder.AROMATIC,
        }[kind] is order


def match_from(view: MolView, pattern: Pattern, anchor: int) -> bool:
    """Whether the pattern embeds with pattern atom 0 on the anchor."""
    if not view.atom_ok(pattern.atoms[0], anchor):
        return False
    mapping: dict[int, int] = {0: anchor}
    used = {anchor}
    mol = view.mol

    def extend(pidx: int) -> bool:
        if pidx == len(pattern.atoms):
            return True
        # Find an already-mapped pattern neighbor to anchor the search.
        anchors = [
            (nbr, kind) for nbr, kind in pattern.adjacency[pidx] if nbr in mapping
        ]
        if not anchors:  # disconnected pattern atom: try every free atom
            for cand in range(len(mol.atoms)):
                if cand in used or not view.atom_ok(pattern.atoms[pidx], cand):
                    continue
                mapping[pidx] = cand
                used.add(cand)
                if extend(pidx + 1):
                    return True
                used.discard(cand)
                del mapping[pidx]
            return False
        base, kind = anchors[0]
        for cand, bidx in mol.adjacency[mapping[base]]:
            if cand in used:
                continue
            if not view.bond_ok(kind, mol.bonds[bidx].order):
                continue
            if not view.atom_ok(pattern.atoms[pidx], cand):
                continue
            ok = True
            for other, okind in anchors[1:]:
                bond = mol.bond_between(cand, mapping[other])
                if bond is None or not view.bond_ok(okind, bond.order):
                    ok = False
                    break
            if not ok:
                continue
            mapping[pidx] = cand
            used.add(cand)
            if extend(pidx + 1):
                return True
            used.discard(cand)
            del mapping[pidx]
        return False

    return extend(1)


def match_anywhere(view: MolView, pattern: Pattern) -> bool:
    return any(match_from(view, pattern, idx) for idx in range(len(view.mol.atoms)))
