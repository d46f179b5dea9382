"""Optimization objectives: thresholds, the success indicator, and the
steering signal.

A term asks for a property to move in a direction by at least a
non-negative magnitude. Term i is satisfied when

    sign_i * ((p_i[modified] - p_i[given]) - signed_threshold_i) >= 0

where signed_threshold_i carries the direction's sign. The steering
signal reports, per term, the direction plus the absolute residual
between the observed change and the signed threshold; it is computed
for all terms, and prompt rendering filters to unsatisfied ones.

Direction is stored as an explicit enum rather than the sign of the
magnitude: the loose presets use magnitude 0, where a sign would be
undefined. A zero observed change therefore satisfies a loose
objective (the indicator is >= 0), which callers may flag when the
molecule is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .exceptions import ConfigurationError

PropertyVector = dict[str, float]


class Direction(Enum):
    INCREASE = "increase"
    DECREASE = "decrease"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.INCREASE else -1

    @property
    def symbol(self) -> str:
        return "+" if self is Direction.INCREASE else "-"


@dataclass(frozen=True)
class ObjectiveTerm:
    property_id: str
    direction: Direction
    magnitude: float

    def __post_init__(self) -> None:
        if self.magnitude < 0:
            raise ConfigurationError(f"threshold magnitude must be >= 0, got {self.magnitude}")

    @property
    def signed_threshold(self) -> float:
        return self.direction.sign * self.magnitude


@dataclass(frozen=True)
class ObjectiveSpec:
    terms: tuple[ObjectiveTerm, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ConfigurationError("objective needs at least one term")

    def property_ids(self) -> list[str]:
        return [t.property_id for t in self.terms]

    def compact(self) -> str:
        return ",".join(
            f"{t.direction.symbol}{t.property_id}:{_fmt(t.magnitude)}" for t in self.terms
        )


@dataclass(frozen=True)
class TermResult:
    term: ObjectiveTerm
    observed_value: float  # property value of the modified molecule
    observed_delta: float
    satisfied: bool


@dataclass(frozen=True)
class EvaluationResult:
    per_term: tuple[TermResult, ...]

    @property
    def overall(self) -> bool:
        return all(t.satisfied for t in self.per_term)


@dataclass(frozen=True)
class GradientTerm:
    property_id: str
    direction: Direction
    residual: float


@dataclass(frozen=True)
class Gradient:
    per_term: tuple[GradientTerm, ...]


def _deltas(spec: ObjectiveSpec, props_m: PropertyVector, props_mhat: PropertyVector) -> list[float]:
    deltas = []
    for term in spec.terms:
        for vector, label in ((props_m, "given"), (props_mhat, "modified")):
            if term.property_id not in vector:
                raise ConfigurationError(
                    f"property {term.property_id!r} missing from the {label} molecule's vector"
                )
        deltas.append(props_mhat[term.property_id] - props_m[term.property_id])
    return deltas


def evaluate(spec: ObjectiveSpec, props_m: PropertyVector, props_mhat: PropertyVector) -> EvaluationResult:
    results = []
    for term, delta in zip(spec.terms, _deltas(spec, props_m, props_mhat)):
        satisfied = term.direction.sign * (delta - term.signed_threshold) >= 0
        results.append(TermResult(term, props_mhat[term.property_id], delta, satisfied))
    return EvaluationResult(tuple(results))


def gradient(spec: ObjectiveSpec, props_m: PropertyVector, props_mhat: PropertyVector) -> Gradient:
    terms = []
    for term, delta in zip(spec.terms, _deltas(spec, props_m, props_mhat)):
        residual = abs(delta - term.signed_threshold)
        terms.append(GradientTerm(term.property_id, term.direction, residual))
    return Gradient(tuple(terms))


# Threshold presets: strict magnitudes per property, loose is 0.
STRICT_MAGNITUDE = {"LogP": 0.5, "TPSA": 10.0, "QED": 0.1}
_SINGLE_PROPERTIES = ("LogP", "TPSA", "QED")
_PAIR_FAMILIES = (("LogP", "TPSA"), ("LogP", "QED"))


def _fmt(value: float) -> str:
    return f"{value:g}"


def load_presets() -> list[ObjectiveSpec]:
    """The shipped objective set: 12 single- and 16 two-property specs.

    Singles are +/- each of LogP, TPSA, QED; pairs combine LogP with
    TPSA or QED over all sign combinations; each at a loose (0) and a
    strict threshold.
    """
    presets: list[ObjectiveSpec] = []
    for prop in _SINGLE_PROPERTIES:
        for direction in (Direction.INCREASE, Direction.DECREASE):
            for level in ("loose", "strict"):
                magnitude = 0.0 if level == "loose" else STRICT_MAGNITUDE[prop]
                name = f"single/{level}/{direction.symbol}{prop}"
                presets.append(ObjectiveSpec(
                    (ObjectiveTerm(prop, direction, magnitude),), name,
                ))
    for prop_a, prop_b in _PAIR_FAMILIES:
        for dir_a in (Direction.INCREASE, Direction.DECREASE):
            for dir_b in (Direction.INCREASE, Direction.DECREASE):
                for level in ("loose", "strict"):
                    mag_a = 0.0 if level == "loose" else STRICT_MAGNITUDE[prop_a]
                    mag_b = 0.0 if level == "loose" else STRICT_MAGNITUDE[prop_b]
                    name = (
                        f"multi/{level}/{dir_a.symbol}{prop_a}{dir_b.symbol}{prop_b}"
                    )
                    presets.append(ObjectiveSpec(
                        (
                            ObjectiveTerm(prop_a, dir_a, mag_a),
                            ObjectiveTerm(prop_b, dir_b, mag_b),
                        ),
                        name,
                    ))
    return presets


def parse_compact(text: str) -> ObjectiveSpec:
    """Parse the compact form, e.g. "+LogP:0.5,-TPSA:10.0"."""
    terms = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk or chunk[0] not in "+-":
            raise ConfigurationError(
                f"objective term {chunk!r} must start with '+' or '-'"
            )
        direction = Direction.INCREASE if chunk[0] == "+" else Direction.DECREASE
        body = chunk[1:]
        if ":" in body:
            prop, _, mag_text = body.partition(":")
            try:
                magnitude = float(mag_text)
            except ValueError as exc:
                raise ConfigurationError(f"bad threshold in {chunk!r}") from exc
        else:
            prop, magnitude = body, 0.0
        if not prop:
            raise ConfigurationError(f"missing property name in {chunk!r}")
        terms.append(ObjectiveTerm(prop, direction, magnitude))
    return ObjectiveSpec(tuple(terms), name=text)


def resolve_objective(text: str) -> ObjectiveSpec:
    """Look up a preset by name, else parse the compact syntax."""
    for preset in load_presets():
        if preset.name == text:
            return preset
    return parse_compact(text)
