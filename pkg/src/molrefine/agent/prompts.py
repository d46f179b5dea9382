"""Prompt construction and response extraction for the refinement loop.

Numbers quoted in feedback render through str(float), which keeps the
shortest representation that parses back to the identical value, so a
trace validator can recompute every quoted residual bit-exactly.
"""

from __future__ import annotations

from ..molgraph import ParseIssue
from ..molgraph.parser import lex_ok
from ..objective import EvaluationResult, Gradient, ObjectiveSpec

CLOSING_INSTRUCTION = (
    "Respond with only the SMILES string of the modified molecule. "
    "No explanation is needed."
)

GENERIC_FEEDBACK = "Unfortunately, the modified molecule does not meet the objective."

REFINE_INSTRUCTION = "Refine the modified molecule based on the above domain feedback."


def _num(value: float) -> str:
    text = str(value)
    return text[:-2] if text.endswith(".0") else text


def _join(parts: list[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def initial_prompt(spec: ObjectiveSpec, smiles: str) -> str:
    asks = _join([f"{t.direction.value} its {t.property_id}" for t in spec.terms])
    amounts = _join([_num(t.magnitude) for t in spec.terms])
    respectively = ", respectively" if len(spec.terms) > 1 else ""
    return (
        f"Given {smiles}, modify it to {asks} by {amounts}{respectively}. "
        "Importantly, the modified molecule must be similar to the given one.\n\n"
        f"{CLOSING_INSTRUCTION}"
    )


def parse_error_feedback_prompt(error: ParseIssue) -> str:
    return (
        "Unfortunately, the modified molecule is not chemically valid. "
        f"The parser reported the following error: {error.render()}. "
        "Correct the modified molecule so that it is chemically valid.\n\n"
        f"{CLOSING_INSTRUCTION}"
    )


def outer_feedback_prompt(
    evaluation: EvaluationResult,
    grad: Gradient,
    example_smiles: str | None,
    gradient_feedback: bool = True,
) -> str:
    """Listing-style feedback: generic sentence, then (optionally) the
    observed values plus the steering residuals for unsatisfied terms,
    then (optionally) the retrieved reference molecule."""
    blocks = []
    red = [GENERIC_FEEDBACK]
    if gradient_feedback:
        unsatisfied = [
            (term_result, grad_term)
            for term_result, grad_term in zip(evaluation.per_term, grad.per_term)
            if not term_result.satisfied
        ]
        if unsatisfied:
            names = _join([t.term.property_id for t, _ in unsatisfied])
            observed = _join([_num(t.observed_value) for t, _ in unsatisfied])
            changes = _join([
                f"{'increased' if t.observed_delta >= 0 else 'decreased'} by "
                f"{_num(abs(t.observed_delta))}"
                for t, _ in unsatisfied
            ])
            verb = "is" if len(unsatisfied) == 1 else "are"
            red.append(
                f"More specifically, the modified molecule has {names} of {observed}, "
                f"which {verb} {changes} compared to the given one."
            )
            steers = _join([
                f"{g.direction.value} {g.property_id} by {_num(g.residual)} more"
                for _, g in unsatisfied
            ])
            red.append(f"To meet the objective, {steers}.")
        red.append(REFINE_INSTRUCTION)
    blocks.append(" ".join(red))
    if example_smiles is not None:
        blocks.append(
            f"For your reference, we found a molecule {example_smiles} that is "
            "similar to the modified molecule and meets the objective."
        )
    blocks.append(CLOSING_INSTRUCTION)
    return "\n\n".join(blocks)


# Quotes plus markdown emphasis; none of these can begin a SMILES.
_STRIP_CHARS = "\"'`*_"
_TRAIL_PUNCT = ".,;:!?"


def _fence_content(text: str) -> str:
    start = text.find("```")
    if start < 0:
        return text
    end = text.find("```", start + 3)
    if end < 0:
        return text
    inner = text[start + 3 : end]
    # Drop a language tag on the opening fence line.
    first_newline = inner.find("\n")
    if first_newline >= 0 and inner[:first_newline].strip().isalnum():
        inner = inner[first_newline + 1 :]
    return inner.strip() or text


def extract_smiles(response: str) -> str:
    """Best-effort extraction: fences, quotes, token scan, then the
    first line as a fallback that routes bad output into the validity
    repair loop rather than erroring."""
    if not response or not response.strip():
        raise ValueError("empty proposer response")
    text = _fence_content(response.strip())
    for token in text.split():
        candidate = token.strip(_STRIP_CHARS).rstrip(_TRAIL_PUNCT).strip(_STRIP_CHARS)
        if candidate and lex_ok(candidate):
            return candidate
    first_line = text.splitlines()[0].strip()
    return first_line.strip(_STRIP_CHARS)
