from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molrefine.exceptions import ConfigurationError
from molrefine.objective import (
    Direction,
    ObjectiveSpec,
    ObjectiveTerm,
    evaluate,
    gradient,
    load_presets,
    parse_compact,
    resolve_objective,
)


def _spec(direction: Direction, magnitude: float, prop: str = "LogP") -> ObjectiveSpec:
    return ObjectiveSpec((ObjectiveTerm(prop, direction, magnitude),), "t")


def test_increase_satisfied():
    result = evaluate(_spec(Direction.INCREASE, 0.5), {"LogP": 2.0}, {"LogP": 2.6})
    assert result.overall
    assert result.per_term[0].observed_delta == pytest.approx(0.6)


def test_decrease_satisfied():
    result = evaluate(_spec(Direction.DECREASE, 0.5), {"LogP": 2.0}, {"LogP": 1.4})
    assert result.overall


def test_boundary_exact_threshold_is_satisfied():
    result = evaluate(_spec(Direction.INCREASE, 0.5), {"LogP": 2.0}, {"LogP": 2.5})
    assert result.overall
    grad = gradient(_spec(Direction.INCREASE, 0.5), {"LogP": 2.0}, {"LogP": 2.5})
    assert grad.per_term[0].residual == 0.0


def test_loose_zero_delta_is_hit():
    for direction in Direction:
        result = evaluate(_spec(direction, 0.0), {"LogP": 2.0}, {"LogP": 2.0})
        assert result.overall, direction


def test_gradient_examples():
    grad = gradient(_spec(Direction.INCREASE, 0.5), {"LogP": 0.0}, {"LogP": 0.2})
    assert grad.per_term[0].direction is Direction.INCREASE
    assert grad.per_term[0].residual == pytest.approx(0.3)

    grad = gradient(_spec(Direction.DECREASE, 10.0, "TPSA"), {"TPSA": 50.0}, {"TPSA": 46.0})
    assert grad.per_term[0].direction is Direction.DECREASE
    assert grad.per_term[0].residual == pytest.approx(6.0)


def test_gradient_computed_for_satisfied_terms_too():
    grad = gradient(_spec(Direction.INCREASE, 0.5), {"LogP": 0.0}, {"LogP": 2.0})
    assert grad.per_term[0].residual == pytest.approx(1.5)


@given(
    delta=st.floats(-100, 100, allow_nan=False),
    magnitude=st.floats(0, 50, allow_nan=False),
    direction=st.sampled_from(list(Direction)),
)
@settings(max_examples=2000, deadline=None)
def test_indicator_gradient_consistency(delta, magnitude, direction):
    spec = _spec(direction, magnitude)
    props_m = {"LogP": 0.0}
    props_mhat = {"LogP": delta}
    result = evaluate(spec, props_m, props_mhat)
    sign = direction.sign
    signed_threshold = sign * magnitude
    assert result.per_term[0].satisfied == (sign * (delta - signed_threshold) >= 0)
    grad = gradient(spec, props_m, props_mhat)
    assert grad.per_term[0].residual == abs(delta - signed_threshold)
    assert grad.per_term[0].residual >= 0


def test_multi_term_conjunction_exhaustive():
    spec = ObjectiveSpec((
        ObjectiveTerm("LogP", Direction.INCREASE, 0.5),
        ObjectiveTerm("TPSA", Direction.DECREASE, 10.0),
    ), "pair")
    base = {"LogP": 0.0, "TPSA": 100.0}
    for logp_ok, tpsa_ok in itertools.product([True, False], repeat=2):
        mhat = {
            "LogP": 1.0 if logp_ok else 0.1,
            "TPSA": 80.0 if tpsa_ok else 95.0,
        }
        result = evaluate(spec, base, mhat)
        assert result.overall == (logp_ok and tpsa_ok)
        assert [t.satisfied for t in result.per_term] == [logp_ok, tpsa_ok]


def test_missing_property_raises():
    with pytest.raises(ConfigurationError):
        evaluate(_spec(Direction.INCREASE, 0.5), {}, {"LogP": 1.0})
    with pytest.raises(ConfigurationError):
        evaluate(_spec(Direction.INCREASE, 0.5), {"LogP": 1.0}, {})


def test_negative_magnitude_rejected():
    with pytest.raises(ConfigurationError):
        ObjectiveTerm("LogP", Direction.INCREASE, -0.1)


def test_presets_count_and_magnitudes():
    presets = load_presets()
    singles = [p for p in presets if len(p.terms) == 1]
    pairs = [p for p in presets if len(p.terms) == 2]
    assert len(singles) == 12
    assert len(pairs) == 16
    strict = {"LogP": 0.5, "TPSA": 10.0, "QED": 0.1}
    for preset in presets:
        _, level, _ = preset.name.split("/")
        for term in preset.terms:
            if level == "loose":
                assert term.magnitude == 0.0
            else:
                assert term.magnitude == strict[term.property_id]
    names = [p.name for p in presets]
    assert len(names) == len(set(names))
    assert "single/strict/+LogP" in names
    assert "single/loose/-TPSA" in names
    assert "multi/strict/+LogP+TPSA" in names


def test_preset_examples_from_threshold_table():
    strict_logp = resolve_objective("single/strict/+LogP")
    assert strict_logp.terms[0].direction is Direction.INCREASE
    assert strict_logp.terms[0].magnitude == 0.5

    loose_tpsa = resolve_objective("single/loose/-TPSA")
    assert loose_tpsa.terms[0].direction is Direction.DECREASE
    assert loose_tpsa.terms[0].magnitude == 0.0

    pair = resolve_objective("multi/strict/+LogP+TPSA")
    assert [(t.property_id, t.direction, t.magnitude) for t in pair.terms] == [
        ("LogP", Direction.INCREASE, 0.5),
        ("TPSA", Direction.INCREASE, 10.0),
    ]


def test_compact_syntax_roundtrip():
    spec = parse_compact("+LogP:0.5,-TPSA:10.0")
    assert [(t.property_id, t.direction, t.magnitude) for t in spec.terms] == [
        ("LogP", Direction.INCREASE, 0.5),
        ("TPSA", Direction.DECREASE, 10.0),
    ]
    assert spec.compact() == "+LogP:0.5,-TPSA:10"
    assert parse_compact(spec.compact()).terms == spec.terms
    bare = parse_compact("+QED")
    assert bare.terms[0].magnitude == 0.0


@pytest.mark.parametrize("text", ["LogP:0.5", "+:0.5", "+LogP:abc", ""])
def test_compact_syntax_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_compact(text)
