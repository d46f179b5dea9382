"""Refinement-loop orchestration: prompts, extraction, trace recording."""

from .loop import (
    STEP_INIT,
    STEP_INNER_FIX,
    STEP_OUTER_REFINE,
    TRACE_SCHEMA_VERSION,
    LoopConfig,
    RefinementTrace,
    TraceStep,
    run_loop,
)
from .prompts import (
    CLOSING_INSTRUCTION,
    GENERIC_FEEDBACK,
    REFINE_INSTRUCTION,
    extract_smiles,
    initial_prompt,
    outer_feedback_prompt,
    parse_error_feedback_prompt,
)

__all__ = [
    "CLOSING_INSTRUCTION",
    "GENERIC_FEEDBACK",
    "LoopConfig",
    "REFINE_INSTRUCTION",
    "RefinementTrace",
    "STEP_INIT",
    "STEP_INNER_FIX",
    "STEP_OUTER_REFINE",
    "TRACE_SCHEMA_VERSION",
    "TraceStep",
    "extract_smiles",
    "initial_prompt",
    "outer_feedback_prompt",
    "parse_error_feedback_prompt",
    "run_loop",
]
