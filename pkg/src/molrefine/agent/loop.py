"""The nested refinement loop.

One initiation proposal, then up to T iterations sharing a single
budget: an invalid molecule takes the validity-repair branch (fed the
structured parse error), a valid miss takes the property-refinement
branch (fed the generic sentence, the steering residuals, and a
retrieved example molecule, subject to the mode flags), and a valid
hit breaks. Every exchange is recorded verbatim in the trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..descriptors import ParameterTables, compute_properties, default_tables
from ..exceptions import UsageError
from ..fingerprint import Fingerprint, morgan_fingerprint, tanimoto
from ..molgraph import MolGraph, ParseIssue, graph_signature, parse_smiles
from ..objective import (
    EvaluationResult,
    Gradient,
    ObjectiveSpec,
    PropertyVector,
    evaluate,
    gradient,
)
from ..proposer import ProposerError, ProposerRequest
from ..retrieval import Database, retrieve_example
from . import prompts

TRACE_SCHEMA_VERSION = 1

STEP_INIT = "init"
STEP_INNER_FIX = "inner_fix"
STEP_OUTER_REFINE = "outer_refine"


@dataclass(frozen=True)
class LoopConfig:
    max_iterations: int = 3
    inner_loop_enabled: bool = True
    gradient_feedback: bool = True
    retrieval_enabled: bool = True

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise UsageError("max_iterations must be >= 1")

    @property
    def mode_label(self) -> str:
        if not self.inner_loop_enabled:
            return "no-inner"
        if not self.gradient_feedback:
            return "generic"
        if not self.retrieval_enabled:
            return "no-retrieval"
        return "full"


@dataclass
class TraceStep:
    iteration: int
    kind: str
    prompt: str
    response: str
    extracted: str
    parse_valid: bool
    parse_error: ParseIssue | None = None
    properties: PropertyVector | None = None
    evaluation: EvaluationResult | None = None
    grad: Gradient | None = None
    example_smiles: str | None = None
    unchanged_from_given: bool = False


@dataclass
class RefinementTrace:
    given_smiles: str
    given_properties: PropertyVector
    objective_name: str
    objective_compact: str
    mode: str
    max_iterations: int
    fp_radius: int = 2
    fp_nbits: int = 2048
    steps: list[TraceStep] = field(default_factory=list)
    final_smiles: str = ""
    final_valid: bool = False
    final_hit: bool = False
    final_similarity: float | None = None
    aborted: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": TRACE_SCHEMA_VERSION,
            "given": {"smiles": self.given_smiles, "properties": self.given_properties},
            "objective": {"name": self.objective_name, "compact": self.objective_compact},
            "mode": self.mode,
            "max_iterations": self.max_iterations,
            "fp": {"radius": self.fp_radius, "nbits": self.fp_nbits},
            "steps": [
                {
                    "iteration": s.iteration,
                    "kind": s.kind,
                    "prompt": s.prompt,
                    "response": s.response,
                    "extracted": s.extracted,
                    "parse": (
                        {"valid": True}
                        if s.parse_valid
                        else {
                            "valid": False,
                            "category": s.parse_error.category.value,
                            "message": s.parse_error.detail,
                            "position": s.parse_error.position,
                        }
                    ),
                    "properties": s.properties,
                    "evaluation": (
                        None
                        if s.evaluation is None
                        else {
                            "overall": s.evaluation.overall,
                            "per_term": [
                                {
                                    "property": t.term.property_id,
                                    "direction": t.term.direction.value,
                                    "magnitude": t.term.magnitude,
                                    "observed_value": t.observed_value,
                                    "observed_delta": t.observed_delta,
                                    "satisfied": t.satisfied,
                                }
                                for t in s.evaluation.per_term
                            ],
                        }
                    ),
                    "gradient": (
                        None
                        if s.grad is None
                        else [
                            {
                                "property": g.property_id,
                                "direction": g.direction.value,
                                "residual": g.residual,
                            }
                            for g in s.grad.per_term
                        ]
                    ),
                    "example": s.example_smiles,
                    "unchanged_from_given": s.unchanged_from_given,
                }
                for s in self.steps
            ],
            "final": {
                "smiles": self.final_smiles,
                "valid": self.final_valid,
                "hit": self.final_hit,
                "similarity": self.final_similarity,
            },
            "aborted": self.aborted,
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class _ValidState:
    """Last known valid molecule's side of the outer-branch feedback."""

    mol: MolGraph
    fingerprint: Fingerprint
    signature: str
    evaluation: EvaluationResult
    grad: Gradient
    example_smiles: str | None


def run_loop(
    config: LoopConfig,
    given_smiles: str,
    spec: ObjectiveSpec,
    proposer,
    db: Database | None = None,
    tables: ParameterTables | None = None,
) -> RefinementTrace:
    tables = tables or default_tables()
    outcome = parse_smiles(given_smiles)
    if not outcome.valid:
        raise UsageError(
            f"given molecule does not parse: {outcome.error.render()}"
        )
    mol_m = outcome.mol
    property_ids = tuple(spec.property_ids())
    props_m = compute_properties(mol_m, property_ids, tables)
    fp_params = (
        (db.header.radius, db.header.nbits) if db is not None else (2, 2048)
    )
    fp_m = morgan_fingerprint(mol_m, *fp_params)
    sig_m = graph_signature(mol_m)

    trace = RefinementTrace(
        given_smiles=given_smiles,
        given_properties=props_m,
        objective_name=spec.name,
        objective_compact=spec.compact(),
        mode=config.mode_label,
        max_iterations=config.max_iterations,
        fp_radius=fp_params[0],
        fp_nbits=fp_params[1],
    )

    messages: list[dict[str, str]] = []

    def ask(prompt: str) -> str:
        messages.append({"role": "user", "content": prompt})
        request = ProposerRequest(system="", messages=list(messages[-8:]))
        response = proposer.propose(request)
        messages.append({"role": "assistant", "content": response.text})
        return response.text

    def record_step(iteration: int, kind: str, prompt: str, response: str) -> TraceStep:
        extracted = prompts.extract_smiles(response)
        parsed = parse_smiles(extracted)
        step = TraceStep(
            iteration=iteration,
            kind=kind,
            prompt=prompt,
            response=response,
            extracted=extracted,
            parse_valid=parsed.valid,
            parse_error=parsed.error,
        )
        if parsed.valid:
            mol_hat = parsed.mol
            step.properties = compute_properties(mol_hat, property_ids, tables)
            step.evaluation = evaluate(spec, props_m, step.properties)
            sig_hat = graph_signature(mol_hat)
            step.unchanged_from_given = sig_hat == sig_m
            if not step.evaluation.overall:
                step.grad = gradient(spec, props_m, step.properties)
                if config.retrieval_enabled and db is not None:
                    fp_hat = morgan_fingerprint(mol_hat, *fp_params)
                    found = retrieve_example(
                        db, spec, props_m, fp_hat, exclude={sig_m, sig_hat}
                    )
                    step.example_smiles = found.smiles if found else None
        trace.steps.append(step)
        return step

    def given_state() -> _ValidState:
        evaluation = evaluate(spec, props_m, props_m)
        grad_terms = gradient(spec, props_m, props_m)
        example = None
        if config.retrieval_enabled and db is not None:
            found = retrieve_example(db, spec, props_m, fp_m, exclude={sig_m})
            example = found.smiles if found else None
        return _ValidState(mol_m, fp_m, sig_m, evaluation, grad_terms, example)

    def state_of(step: TraceStep) -> _ValidState:
        mol_hat = parse_smiles(step.extracted).mol
        fp_hat = morgan_fingerprint(mol_hat, *fp_params)
        grad_terms = step.grad or gradient(spec, props_m, step.properties)
        return _ValidState(
            mol_hat, fp_hat, graph_signature(mol_hat),
            step.evaluation, grad_terms, step.example_smiles,
        )

    last_valid_state: _ValidState | None = None

    try:
        init_prompt = prompts.initial_prompt(spec, given_smiles)
        record_step(0, STEP_INIT, init_prompt, ask(init_prompt))
    except ProposerError as exc:
        trace.aborted = True
        trace.error = str(exc)
        return trace

    try:
        for iteration in range(1, config.max_iterations + 1):
            step = trace.steps[-1]
            if step.parse_valid:
                last_valid_state = state_of(step)
                if step.evaluation.overall:
                    break
                prompt = prompts.outer_feedback_prompt(
                    step.evaluation,
                    last_valid_state.grad,
                    step.example_smiles,
                    gradient_feedback=config.gradient_feedback,
                )
                kind = STEP_OUTER_REFINE
            else:
                if config.inner_loop_enabled:
                    prompt = prompts.parse_error_feedback_prompt(step.parse_error)
                    kind = STEP_INNER_FIX
                else:
                    # Inner loop disabled: the iteration is consumed by an
                    # outer prompt built from the last valid state (the
                    # given molecule when none exists yet).
                    source = last_valid_state or given_state()
                    prompt = prompts.outer_feedback_prompt(
                        source.evaluation,
                        source.grad,
                        source.example_smiles,
                        gradient_feedback=config.gradient_feedback,
                    )
                    kind = STEP_OUTER_REFINE
            record_step(iteration, kind, prompt, ask(prompt))
    except ProposerError as exc:
        trace.aborted = True
        trace.error = str(exc)

    final = trace.steps[-1]
    trace.final_smiles = final.extracted
    trace.final_valid = final.parse_valid
    trace.final_hit = bool(final.parse_valid and final.evaluation.overall)
    if final.parse_valid:
        mol_final = parse_smiles(final.extracted).mol
        trace.final_similarity = tanimoto(fp_m, morgan_fingerprint(mol_final, *fp_params))
    return trace
