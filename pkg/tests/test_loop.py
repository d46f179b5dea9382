from __future__ import annotations

import json
import re

import pytest

from molrefine.agent import (
    GENERIC_FEEDBACK,
    LoopConfig,
    RefinementTrace,
    run_loop,
)
from molrefine.descriptors import compute_properties
from molrefine.exceptions import UsageError
from molrefine.molgraph import parse_smiles
from molrefine.objective import gradient, resolve_objective
from molrefine.proposer import ProposerError, ScenarioUnderrun, ScriptedProposer, TransportError
from molrefine.retrieval import build_database

SPEC = resolve_objective("+LogP:0.5")


def validate_branch_fidelity(trace: RefinementTrace) -> None:
    """Step k's kind must be a deterministic function of step k-1's
    parse/evaluation, following the nested-loop branch order."""
    steps = trace.steps
    assert steps[0].kind == "init"
    inner_enabled = trace.mode != "no-inner"
    for prev, step in zip(steps, steps[1:]):
        if not prev.parse_valid:
            expected = "inner_fix" if inner_enabled else "outer_refine"
        else:
            assert prev.evaluation is not None
            assert not prev.evaluation.overall, "loop must break on a hit"
            expected = "outer_refine"
        assert step.kind == expected
    assert len(steps) - 1 <= trace.max_iterations
    if trace.final_hit and not trace.aborted:
        assert steps[-1].parse_valid and steps[-1].evaluation.overall


def validate_feedback_honesty(trace: RefinementTrace) -> None:
    """Every residual quoted in an outer prompt equals the recomputed
    steering value from the recorded property vectors, bit-identically."""
    for prev, step in zip(trace.steps, trace.steps[1:]):
        if step.kind != "outer_refine" or not prev.parse_valid:
            continue
        spec = resolve_objective(trace.objective_compact)
        grad = gradient(spec, trace.given_properties, prev.properties)
        for needle in re.findall(r"by (\S+) more", step.prompt):
            assert any(float(needle) == g.residual for g in grad.per_term), (
                needle, [g.residual for g in grad.per_term],
            )


def test_invalid_fix_miss_hit_sequence():
    proposer = ScriptedProposer(responses=["C1CC", "CCO", "CCCCCCCC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert [s.kind for s in trace.steps] == ["init", "inner_fix", "outer_refine"]
    assert trace.final_hit and trace.final_valid
    assert trace.final_smiles == "CCCCCCCC"
    assert trace.final_similarity is not None
    validate_branch_fidelity(trace)
    validate_feedback_honesty(trace)


def test_immediate_hit_zero_refinements():
    proposer = ScriptedProposer(responses=["CCCCCCCC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert [s.kind for s in trace.steps] == ["init"]
    assert trace.steps[0].iteration == 0
    assert trace.final_hit
    validate_branch_fidelity(trace)


def test_always_invalid_budget_exhaustion():
    proposer = ScriptedProposer(responses=["C1CC", "C(C", "c1ccc1", "CC(C)(C)(C)C"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert [s.kind for s in trace.steps] == ["init", "inner_fix", "inner_fix", "inner_fix"]
    assert not trace.final_valid and not trace.final_hit
    assert trace.final_similarity is None
    validate_branch_fidelity(trace)
    # each inner prompt quotes the previous structured error verbatim
    assert "unclosed_ring" in trace.steps[1].prompt
    assert "parentheses" in trace.steps[2].prompt
    assert "aromaticity" in trace.steps[3].prompt


def test_budget_consumed_by_mixed_branches():
    proposer = ScriptedProposer(responses=["C1CC", "CCO", "C(C", "CCN"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert [s.kind for s in trace.steps] == [
        "init", "inner_fix", "outer_refine", "inner_fix",
    ]
    assert len(trace.steps) - 1 == 3
    assert not trace.final_hit
    validate_branch_fidelity(trace)


def test_valid_miss_never_hits():
    proposer = ScriptedProposer(responses=["CCN", "CO", "OCCO", "CNC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert [s.kind for s in trace.steps] == [
        "init", "outer_refine", "outer_refine", "outer_refine",
    ]
    assert trace.final_valid and not trace.final_hit
    validate_branch_fidelity(trace)
    validate_feedback_honesty(trace)


def test_given_molecule_must_parse():
    with pytest.raises(UsageError):
        run_loop(LoopConfig(), "C1CC", SPEC, ScriptedProposer(responses=["C"]))


def test_unchanged_molecule_flagged():
    proposer = ScriptedProposer(responses=["OCC"])  # same graph as given
    trace = run_loop(LoopConfig(max_iterations=1),
                     "CCO", resolve_objective("single/loose/+LogP"), proposer)
    assert trace.steps[0].unchanged_from_given
    assert trace.final_hit  # loose zero-delta counts as a hit


class _FailingProposer:
    def __init__(self, fail_at: int, error: Exception) -> None:
        self.calls = 0
        self.fail_at = fail_at
        self.error = error
        self.inner = ScriptedProposer(responses=["C1CC", "CCO", "CCN", "CCS"])

    def propose(self, request):
        self.calls += 1
        if self.calls == self.fail_at:
            raise self.error
        return self.inner.propose(request)


def test_transport_failure_marks_aborted():
    proposer = _FailingProposer(3, TransportError("giving up after 3 attempts"))
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert trace.aborted
    assert "giving up" in trace.error
    assert [s.kind for s in trace.steps] == ["init", "inner_fix"]


def test_proposer_error_on_first_call_aborts_with_empty_trace():
    proposer = _FailingProposer(1, ProposerError("HTTP 400: bad request"))
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    assert trace.aborted and not trace.steps
    assert not trace.final_valid


def test_scenario_underrun_propagates():
    proposer = ScriptedProposer(responses=["C1CC"])
    with pytest.raises(ScenarioUnderrun):
        run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)


@pytest.fixture(scope="module")
def example_db():
    lines = ["CCCCCCCCCC", "CCCCCCCC", "CCCCCC", "CCO", "CCN", "c1ccccc1CCCC"]
    db, _ = build_database(lines, nbits=2048, radius=2)
    return db


def test_retrieval_example_lands_in_prompt(example_db):
    proposer = ScriptedProposer(responses=["CCN", "CCCCCCCC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer, db=example_db)
    miss = trace.steps[0]
    assert miss.example_smiles is not None
    outer_prompt = trace.steps[1].prompt
    assert f"we found a molecule {miss.example_smiles}" in outer_prompt
    validate_feedback_honesty(trace)


def test_retrieval_miss_fallback_omits_example_sentence(example_db):
    # An unreachable objective leaves the qualifying set empty: the
    # outer prompt must fall back to gradient-only feedback.
    spec = resolve_objective("+LogP:1000")
    proposer = ScriptedProposer(responses=["CCC", "CCCC", "CCCCC", "CCCCCC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", spec, proposer, db=example_db)
    assert all(s.example_smiles is None for s in trace.steps)
    for step in trace.steps[1:]:
        assert "For your reference" not in step.prompt
        assert GENERIC_FEEDBACK in step.prompt


def test_mode_no_retrieval(example_db):
    proposer = ScriptedProposer(responses=["CCC", "CCCCCCCC"])
    config = LoopConfig(max_iterations=3, retrieval_enabled=False)
    trace = run_loop(config, "CCO", SPEC, proposer, db=example_db)
    assert trace.mode == "no-retrieval"
    db_smiles = {r.smiles for r in example_db.records}
    for step in trace.steps:
        assert step.example_smiles is None
        assert not any(s in step.prompt for s in db_smiles - {"CCO", "CCCCCCCC"})
    validate_branch_fidelity(trace)


def test_mode_generic_no_residuals(example_db):
    proposer = ScriptedProposer(responses=["CCN", "CO", "OCCO", "CNC"])
    config = LoopConfig(max_iterations=3, gradient_feedback=False)
    trace = run_loop(config, "CCO", SPEC, proposer, db=example_db)
    assert trace.mode == "generic"
    for step in trace.steps[1:]:
        assert GENERIC_FEEDBACK in step.prompt
        assert "more" not in step.prompt
        assert not re.search(r"by \d", step.prompt)
    # generic mode still retrieves examples (the reference block is orthogonal)
    assert any("For your reference" in s.prompt for s in trace.steps[1:])
    validate_branch_fidelity(trace)


def test_mode_no_inner_consumes_budget_with_outer_prompts(example_db):
    proposer = ScriptedProposer(responses=["C1CC", "C(C", "CCCCCCCC"])
    config = LoopConfig(max_iterations=3, inner_loop_enabled=False)
    trace = run_loop(config, "CCO", SPEC, proposer, db=example_db)
    assert trace.mode == "no-inner"
    assert [s.kind for s in trace.steps] == ["init", "outer_refine", "outer_refine"]
    # invalid steps are recorded invalid; prompts never mention parse errors
    assert not trace.steps[0].parse_valid
    for step in trace.steps[1:]:
        assert "not chemically valid" not in step.prompt
        assert GENERIC_FEEDBACK in step.prompt
    assert trace.final_hit
    validate_branch_fidelity(trace)


def test_no_inner_outer_prompt_uses_last_valid_state(example_db):
    # valid miss, then invalid: the next outer prompt re-uses the last
    # valid molecule's feedback rather than the invalid one.
    proposer = ScriptedProposer(responses=["CCN", "C1CC", "CCCCCCCC"])
    config = LoopConfig(max_iterations=3, inner_loop_enabled=False)
    trace = run_loop(config, "CCO", SPEC, proposer, db=example_db)
    assert [s.kind for s in trace.steps] == ["init", "outer_refine", "outer_refine"]
    props_miss = compute_properties(parse_smiles("CCN").mol, ("LogP",))
    grad = gradient(SPEC, trace.given_properties, props_miss)
    rendered = trace.steps[2].prompt
    quoted = float(rendered.split(" more.")[0].rsplit("by ", 1)[1])
    assert quoted == grad.per_term[0].residual


def test_history_capped_at_eight_messages():
    captured = []

    class Recorder:
        def __init__(self):
            self.inner = ScriptedProposer(
                responses=["CCC", "CCN", "CCS", "CCCC", "CCCCC", "CCCCCC", "CCCCCCC"]
            )

        def propose(self, request):
            captured.append(len(request.messages))
            return self.inner.propose(request)

    run_loop(LoopConfig(max_iterations=6), "CCO", SPEC, Recorder())
    assert captured[0] == 1
    assert max(captured) <= 8


def test_trace_serialization_roundtrip():
    proposer = ScriptedProposer(responses=["C1CC", "CCO", "CCCCCCCC"])
    trace = run_loop(LoopConfig(max_iterations=3), "CCO", SPEC, proposer)
    payload = json.loads(trace.to_json())
    assert payload["schema"] == 1
    assert payload["given"]["smiles"] == "CCO"
    assert [s["kind"] for s in payload["steps"]] == ["init", "inner_fix", "outer_refine"]
    assert payload["steps"][0]["parse"]["valid"] is False
    assert payload["steps"][0]["parse"]["category"] == "unclosed_ring"
    assert payload["final"]["hit"] is True
    assert payload["steps"][1]["prompt"] in trace.steps[1].prompt
