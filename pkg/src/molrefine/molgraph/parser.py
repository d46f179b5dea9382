"""SMILES parser with staged, single-error classification.

The checks run cheapest-first and stop at the first failure, so every
invalid input maps to exactly one category:

    1. tokenization and grammar shape        -> syntax
    2. parenthesis balance                   -> parentheses
    3. ring-closure pairing                  -> unclosed_ring
    4. graph construction                    -> duplicate_bond
    5. valence of atoms with fixed orders    -> valence
    6. ring/aromatic validation, kekulize    -> aromaticity
    7. valence of aromatic atoms (kekulized) -> valence

Grammar: organic-subset atoms, bracket atoms with isotope/charge/H
count, bond symbols - = # :, ring closures 0-9 and %nn, branches and
dot-disconnect. Stereo markers (/ \\ @) are accepted and discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .elements import AROMATIC_SUBSET, ORGANIC_SUBSET, allowed_valences, is_element
from .errors import ErrorCategory, ParseIssue, ParseOutcome, SmilesError
from .graph import Atom, Bond, BondOrder, MolGraph, make_adjacency
from .kekulize import NUMERIC, kekulize
from .rings import perceive_rings


class TokenKind(Enum):
    ATOM = "atom"
    BOND = "bond"
    RING = "ring"
    OPEN = "open"
    CLOSE = "close"
    DOT = "dot"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    pos: int
    atom: Atom | None = None
    order: BondOrder | None = None
    ring: int | None = None


_BOND_SYMBOLS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
}


def _syntax(detail: str, pos: int | None) -> SmilesError:
    return SmilesError(ParseIssue(ErrorCategory.SYNTAX, detail, pos))


def _ascii_digit(ch: str) -> bool:
    # str.isdigit accepts superscripts and other unicode digits that
    # int() rejects; ring closures and counts are ASCII only.
    return "0" <= ch <= "9"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _BOND_SYMBOLS:
            tokens.append(Token(TokenKind.BOND, i, order=_BOND_SYMBOLS[ch]))
            i += 1
        elif ch == "(":
            tokens.append(Token(TokenKind.OPEN, i))
            i += 1
        elif ch == ")":
            tokens.append(Token(TokenKind.CLOSE, i))
            i += 1
        elif ch == ".":
            tokens.append(Token(TokenKind.DOT, i))
            i += 1
        elif _ascii_digit(ch):
            tokens.append(Token(TokenKind.RING, i, ring=int(ch)))
            i += 1
        elif ch == "%":
            if i + 2 >= n or not (_ascii_digit(text[i + 1]) and _ascii_digit(text[i + 2])):
                raise _syntax("'%' must be followed by two digits", i)
            tokens.append(Token(TokenKind.RING, i, ring=int(text[i + 1 : i + 3])))
            i += 3
        elif ch == "[":
            atom, consumed = _read_bracket_atom(text, i)
            tokens.append(Token(TokenKind.ATOM, i, atom=atom))
            i += consumed
        elif ch.isalpha():
            atom, consumed = _read_organic_atom(text, i)
            tokens.append(Token(TokenKind.ATOM, i, atom=atom))
            i += consumed
        elif ch.isspace():
            raise _syntax("unexpected whitespace inside SMILES", i)
        else:
            raise _syntax(f"unrecognized character {ch!r}", i)
    return tokens


def _read_organic_atom(text: str, start: int) -> tuple[Atom, int]:
    ch = text[start]
    nxt = text[start + 1] if start + 1 < len(text) else ""
    two = ch + nxt
    if two in ("Cl", "Br"):
        return Atom(element=two), 2
    if ch in ORGANIC_SUBSET and len(ch) == 1 and ch.isupper():
        return Atom(element=ch), 1
    if ch in AROMATIC_SUBSET:
        return Atom(element=ch.upper(), aromatic_flag=True), 1
    raise _syntax(f"unrecognized atom symbol {ch!r}", start)


def _read_bracket_atom(text: str, start: int) -> tuple[Atom, int]:
    i = start + 1
    n = len(text)

    def fail(detail: str) -> SmilesError:
        return _syntax(detail, start)

    isotope = None
    digits = ""
    while i < n and _ascii_digit(text[i]):
        digits += text[i]
        i += 1
    if digits:
        isotope = int(digits)

    if i >= n:
        raise fail("unterminated bracket atom")
    element = None
    aromatic = False
    ch = text[i]
    if ch.isalpha():
        two = text[i : i + 2]
        if ch.isupper() and len(two) == 2 and two[1].islower() and is_element(two):
            element = two
            i += 2
        elif ch.isupper() and is_element(ch):
            element = ch
            i += 1
        elif ch in AROMATIC_SUBSET:
            element = ch.upper()
            aromatic = True
            i += 1
    if element is None:
        raise fail(f"unrecognized element symbol in bracket at offset {i - start}")

    explicit_h: int | None = None
    charge: int | None = None
    while i < n and text[i] != "]":
        ch = text[i]
        if ch == "@":
            # Chirality marker: accepted and discarded.
            i += 1
            if i < n and text[i] == "@":
                i += 1
        elif ch == "H":
            if explicit_h is not None:
                raise fail("duplicate hydrogen count in bracket atom")
            i += 1
            digits = ""
            while i < n and _ascii_digit(text[i]):
                digits += text[i]
                i += 1
            explicit_h = int(digits) if digits else 1
        elif ch in "+-":
            if charge is not None:
                raise fail("duplicate charge in bracket atom")
            sign = 1 if ch == "+" else -1
            count = 0
            while i < n and text[i] == ch:
                count += 1
                i += 1
            digits = ""
            while i < n and _ascii_digit(text[i]):
                digits += text[i]
                i += 1
            if digits:
                if count > 1:
                    raise fail("malformed charge in bracket atom")
                charge = sign * int(digits)
            else:
                charge = sign * count
        elif ch == ":":
            # Atom-class label: accepted and discarded.
            i += 1
            if i >= n or not _ascii_digit(text[i]):
                raise fail("atom class ':' must be followed by digits")
            while i < n and _ascii_digit(text[i]):
                i += 1
        else:
            raise fail(f"unexpected character {ch!r} in bracket atom")
    if i >= n:
        raise fail("unterminated bracket atom")
    i += 1  # consume ']'

    return (
        Atom(
            element=element,
            formal_charge=charge or 0,
            explicit_h=explicit_h if explicit_h is not None else 0,
            isotope=isotope,
            aromatic_flag=aromatic,
            bracketed=True,
        ),
        i - start,
    )


def _check_grammar(tokens: list[Token]) -> None:
    """Token-adjacency rules; violations are syntax errors."""
    prev: Token | None = None
    depth = 0
    ring_bond_order: dict[int, BondOrder | None] = {}
    for idx, tok in enumerate(tokens):
        kind = tok.kind
        pk = prev.kind if prev else None
        if kind is TokenKind.BOND:
            if pk is None or pk in (TokenKind.BOND, TokenKind.DOT):
                raise _syntax("bond symbol has no preceding atom", tok.pos)
            nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
            if nxt is None or nxt.kind not in (TokenKind.ATOM, TokenKind.RING):
                raise _syntax("bond symbol is not followed by an atom or ring closure", tok.pos)
        elif kind is TokenKind.RING:
            if pk is None or pk in (TokenKind.OPEN, TokenKind.DOT):
                raise _syntax("ring closure has no preceding atom", tok.pos)
            order = prev.order if prev and prev.kind is TokenKind.BOND else None
            num = tok.ring
            if num in ring_bond_order:
                opened = ring_bond_order.pop(num)
                if opened is not None and order is not None and opened is not order:
                    raise _syntax(f"conflicting bond orders on ring closure {num}", tok.pos)
            else:
                ring_bond_order[num] = order
        elif kind is TokenKind.OPEN:
            if pk is None or pk in (TokenKind.OPEN, TokenKind.DOT):
                raise _syntax("branch opened with no preceding atom", tok.pos)
            depth += 1
        elif kind is TokenKind.CLOSE:
            if pk is TokenKind.OPEN:
                raise _syntax("empty branch", tok.pos)
            if pk is TokenKind.DOT:
                raise _syntax("dot separator before closing parenthesis", tok.pos)
            depth = max(depth - 1, 0)
        elif kind is TokenKind.DOT:
            if pk is None or pk in (TokenKind.BOND, TokenKind.DOT, TokenKind.OPEN):
                raise _syntax("misplaced dot separator", tok.pos)
            if depth > 0:
                raise _syntax("dot separator inside a branch", tok.pos)
            nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
            if nxt is None or nxt.kind is not TokenKind.ATOM:
                raise _syntax("dot separator is not followed by an atom", tok.pos)
        prev = tok
    # A leading CLOSE is left for the parenthesis-balance stage.
    if tokens and tokens[0].kind not in (TokenKind.ATOM, TokenKind.CLOSE):
        raise _syntax("SMILES must begin with an atom", tokens[0].pos)


def _check_parentheses(tokens: list[Token]) -> None:
    stack: list[int] = []
    for tok in tokens:
        if tok.kind is TokenKind.OPEN:
            stack.append(tok.pos)
        elif tok.kind is TokenKind.CLOSE:
            if not stack:
                raise SmilesError(ParseIssue(
                    ErrorCategory.PARENTHESES,
                    "unmatched closing parenthesis",
                    tok.pos,
                ))
            stack.pop()
    if stack:
        raise SmilesError(ParseIssue(
            ErrorCategory.PARENTHESES,
            "unmatched opening parenthesis",
            stack[-1],
        ))


def _check_ring_pairing(tokens: list[Token]) -> None:
    open_pos: dict[int, int] = {}
    for tok in tokens:
        if tok.kind is not TokenKind.RING:
            continue
        if tok.ring in open_pos:
            del open_pos[tok.ring]
        else:
            open_pos[tok.ring] = tok.pos
    if open_pos:
        num, pos = min(open_pos.items(), key=lambda kv: kv[1])
        raise SmilesError(ParseIssue(
            ErrorCategory.UNCLOSED_RING,
            f"ring bond {num} opened but never closed",
            pos,
        ))


def _build(tokens: list[Token]) -> tuple[list[Atom], list[Bond], list[int | None]]:
    atoms: list[Atom] = []
    positions: list[int | None] = []
    bonds: list[Bond] = []
    bond_pairs: set[tuple[int, int]] = set()
    open_rings: dict[int, tuple[int, BondOrder | None]] = {}
    branch_stack: list[int] = []
    prev_atom: int | None = None
    pending: BondOrder | None = None

    def add_bond(a: int, b: int, order: BondOrder | None, pos: int) -> None:
        if a == b:
            raise SmilesError(ParseIssue(
                ErrorCategory.DUPLICATE_BOND,
                "ring closure bonds an atom to itself",
                pos,
            ))
        pair = (a, b) if a < b else (b, a)
        if pair in bond_pairs:
            raise SmilesError(ParseIssue(
                ErrorCategory.DUPLICATE_BOND,
                f"bond between atoms {pair[0]} and {pair[1]} defined more than once",
                pos,
            ))
        if order is None:
            if atoms[a].aromatic_flag and atoms[b].aromatic_flag:
                order = BondOrder.AROMATIC
            else:
                order = BondOrder.SINGLE
        bond_pairs.add(pair)
        bonds.append(Bond(a, b, order))

    for tok in tokens:
        if tok.kind is TokenKind.ATOM:
            atoms.append(tok.atom)
            positions.append(tok.pos)
            idx = len(atoms) - 1
            if prev_atom is not None:
                add_bond(prev_atom, idx, pending, tok.pos)
            pending = None
            prev_atom = idx
        elif tok.kind is TokenKind.BOND:
            pending = tok.order
        elif tok.kind is TokenKind.RING:
            num = tok.ring
            if num in open_rings:
                other, opened_order = open_rings.pop(num)
                order = pending if pending is not None else opened_order
                add_bond(prev_atom, other, order, tok.pos)
            else:
                open_rings[num] = (prev_atom, pending)
            pending = None
        elif tok.kind is TokenKind.OPEN:
            branch_stack.append(prev_atom)
        elif tok.kind is TokenKind.CLOSE:
            prev_atom = branch_stack.pop()
        elif tok.kind is TokenKind.DOT:
            prev_atom = None
            pending = None

    return atoms, bonds, positions


def finish_graph(
    atoms: list[Atom],
    bonds: list[Bond],
    positions: list[int | None] | None = None,
) -> MolGraph:
    """Validate valences and aromaticity, then assemble the MolGraph.

    Shared by the parser and by tests that rebuild graphs directly
    (for example under atom-order permutation).
    """
    positions = positions or [None] * len(atoms)
    n = len(atoms)
    has_aromatic_bond = [False] * n
    order_sum = [0] * n
    for bond in bonds:
        if bond.order is BondOrder.AROMATIC:
            has_aromatic_bond[bond.a] = True
            has_aromatic_bond[bond.b] = True
        else:
            order_sum[bond.a] += NUMERIC[bond.order]
            order_sum[bond.b] += NUMERIC[bond.order]

    def check_valence(idx: int, total: int) -> None:
        atom = atoms[idx]
        allowed = allowed_valences(atom.element, atom.formal_charge)
        if allowed is None:
            return
        if atom.bracketed:
            # Radicals (undersaturation) are fine; between allowed
            # valences is not ([CH3] parses, [NH4] does not).
            ok = total <= min(allowed) or total in allowed
        else:
            ok = total <= max(allowed)
        if not ok:
            raise SmilesError(ParseIssue(
                ErrorCategory.VALENCE,
                f"atom {atom.element} has {total} bonds, exceeding its "
                f"allowed valence {'/'.join(str(v) for v in allowed)}",
                positions[idx],
            ))

    for idx, atom in enumerate(atoms):
        if not has_aromatic_bond[idx]:
            check_valence(idx, order_sum[idx] + (atom.explicit_h or 0))

    rings = perceive_rings(n, bonds)
    kekulized = kekulize(atoms, bonds, rings, positions)

    kekule_sum = [0] * n
    for bond in kekulized:
        kekule_sum[bond.a] += bond.kekule
        kekule_sum[bond.b] += bond.kekule
    for idx, atom in enumerate(atoms):
        if has_aromatic_bond[idx]:
            check_valence(idx, kekule_sum[idx] + (atom.explicit_h or 0))

    implicit: list[int] = []
    for idx, atom in enumerate(atoms):
        if atom.bracketed:
            implicit.append(0)
            continue
        allowed = allowed_valences(atom.element, atom.formal_charge)
        if allowed is None:
            implicit.append(0)
            continue
        total = kekule_sum[idx]
        target = min((v for v in allowed if v >= total), default=None)
        if target is None:
            raise SmilesError(ParseIssue(
                ErrorCategory.VALENCE,
                f"atom {atom.element} has {total} bonds, exceeding its "
                f"allowed valence {max(allowed)}",
                positions[idx],
            ))
        implicit.append(target - total)

    ring_atoms = frozenset(i for ring in rings for i in ring)
    pair_to_idx = {bond.pair(): i for i, bond in enumerate(kekulized)}
    ring_bonds: set[int] = set()
    for ring in rings:
        for i in range(len(ring)):
            pair = tuple(sorted((ring[i], ring[(i + 1) % len(ring)])))
            ring_bonds.add(pair_to_idx[pair])

    return MolGraph(
        atoms=tuple(atoms),
        bonds=tuple(kekulized),
        rings=tuple(tuple(r) for r in rings),
        implicit_h=tuple(implicit),
        adjacency=make_adjacency(n, kekulized),
        ring_atoms=ring_atoms,
        ring_bonds=frozenset(ring_bonds),
    )


def parse_smiles(text: str) -> ParseOutcome:
    """Parse a SMILES string into a MolGraph or a classified error."""
    try:
        stripped = text.strip()
        if not stripped:
            raise _syntax("empty SMILES", None)
        offset = len(text) - len(text.lstrip())
        tokens = tokenize(stripped)
        if offset:
            tokens = [
                Token(t.kind, t.pos + offset, atom=t.atom, order=t.order, ring=t.ring)
                for t in tokens
            ]
        _check_grammar(tokens)
        _check_parentheses(tokens)
        _check_ring_pairing(tokens)
        atoms, bonds, positions = _build(tokens)
        return ParseOutcome(mol=finish_graph(atoms, bonds, positions))
    except SmilesError as exc:
        return ParseOutcome(error=exc.issue)


def lex_ok(text: str) -> bool:
    """Whether text lexes cleanly as SMILES tokens with at least one atom.

    Used by response extraction to pick a SMILES-looking token out of
    prose; a token that lexes but fails full parsing still routes into
    the validity-repair loop by design.
    """
    try:
        tokens = tokenize(text)
    except SmilesError:
        return False
    return any(t.kind is TokenKind.ATOM for t in tokens)
