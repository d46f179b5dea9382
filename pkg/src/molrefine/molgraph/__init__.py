"""SMILES parsing, validation, writing, and graph services."""

from .elements import ATOMIC_NUMBER, ATOMIC_WEIGHTS, allowed_valences
from .errors import ErrorCategory, ParseIssue, ParseOutcome, SmilesError
from .graph import Atom, Bond, BondOrder, MolGraph
from .kekulize import kekulize, needs_double_bond
from .parser import finish_graph, lex_ok, parse_smiles, tokenize
from .rings import cycle_rank, perceive_rings
from .signature import graph_signature
from .writer import write_smiles

__all__ = [
    "ATOMIC_NUMBER",
    "ATOMIC_WEIGHTS",
    "Atom",
    "Bond",
    "BondOrder",
    "ErrorCategory",
    "MolGraph",
    "ParseIssue",
    "ParseOutcome",
    "SmilesError",
    "allowed_valences",
    "cycle_rank",
    "finish_graph",
    "graph_signature",
    "kekulize",
    "lex_ok",
    "needs_double_bond",
    "parse_smiles",
    "perceive_rings",
    "tokenize",
    "write_smiles",
]
