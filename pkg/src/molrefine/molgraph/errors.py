"""Structured parse-failure classification.

Every invalid SMILES maps to exactly one category; the precedence is
fixed by the staged checks in the parser (syntax, then parentheses,
then unclosed_ring, duplicate_bond, valence, aromaticity). Messages
are stable because downstream feedback prompts quote them verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import MolGraph


class ErrorCategory(Enum):
    SYNTAX = "syntax"
    PARENTHESES = "parentheses"
    DUPLICATE_BOND = "duplicate_bond"
    VALENCE = "valence"
    AROMATICITY = "aromaticity"
    UNCLOSED_RING = "unclosed_ring"


@dataclass(frozen=True)
class ParseIssue:
    category: ErrorCategory
    detail: str
    position: int | None = None

    def render(self) -> str:
        """Stable message format: "<category>: <detail> at position <n>"."""
        base = f"{self.category.value}: {self.detail}"
        if self.position is not None:
            return f"{base} at position {self.position}"
        return base


class SmilesError(Exception):
    """Internal control-flow carrier; callers receive ParseOutcome."""

    def __init__(self, issue: ParseIssue) -> None:
        super().__init__(issue.render())
        self.issue = issue


@dataclass(frozen=True)
class ParseOutcome:
    mol: MolGraph | None = None
    error: ParseIssue | None = None

    def __post_init__(self) -> None:
        if (self.mol is None) == (self.error is None):
            raise ValueError("outcome must hold exactly one of mol or error")

    @property
    def valid(self) -> bool:
        return self.mol is not None
