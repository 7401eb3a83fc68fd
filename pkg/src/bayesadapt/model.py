"""Component-based system model and quality-weighted utility evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "Component",
    "QualityAttribute",
    "UtilityRule",
    "SystemModel",
    "Violation",
    "InvalidJointActionError",
    "baseline_action",
    "rule_matches",
    "system_utility",
    "validate_model",
]

# A joint action is a plain mapping: component id -> action label, covering
# every component of the model exactly once.
JointAction = Mapping[str, str]


class InvalidJointActionError(ValueError):
    """A joint action does not fit the model (coverage or unknown label)."""

    def __init__(self, component: str, message: str):
        self.component = component
        super().__init__(message)


@dataclass(frozen=True)
class Component:
    """An independently acting part of the system.

    `actions` is the ordered set of behaviors the component can choose from
    while uncompromised; `baseline` is the action it takes by default.
    """

    id: str
    actions: tuple[str, ...]
    baseline: str


@dataclass(frozen=True)
class QualityAttribute:
    """A named system concern with a weight used in utility aggregation."""

    name: str
    weight: float


@dataclass(frozen=True)
class UtilityRule:
    """Scores some quality attributes whenever `when` matches the joint action.

    `when` is a partial assignment; the rule matches a joint action iff every
    listed component plays the listed label. `scores` covers only the
    attributes this rule speaks for; other attributes fall through to later
    rules or the per-attribute default.
    """

    when: dict[str, str]
    scores: dict[str, float]


@dataclass(frozen=True)
class SystemModel:
    """The managed system: components, quality attributes and a utility table.

    `utility_rules` is consulted in declaration order with first match wins,
    independently per quality attribute. `attack_actions` lists labels a
    component may additionally play while compromised; such labels are
    admissible in rules and joint actions even though they are not part of
    the component's own action set.
    """

    components: tuple[Component, ...]
    quality_attributes: tuple[QualityAttribute, ...]
    utility_rules: tuple[UtilityRule, ...] = ()
    utility_default: dict[str, float] = field(default_factory=dict)
    attack_actions: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def allowed_actions(self, cid: str) -> tuple[str, ...]:
        """Declared actions plus any attack-context labels for `cid`."""
        c = self.component(cid)
        extra = tuple(a for a in self.attack_actions.get(cid, ()) if a not in c.actions)
        return c.actions + extra


@dataclass(frozen=True)
class Violation:
    """A single invariant violation found by a validator."""

    code: str
    subject: str
    message: str
    path: str = ""

    def __str__(self) -> str:
        loc = f" [{self.path}]" if self.path else ""
        return f"{self.code}({self.subject!r}): {self.message}{loc}"


def baseline_action(model: SystemModel) -> dict[str, str]:
    """The joint action where every component plays its baseline."""
    return {c.id: c.baseline for c in model.components}


def rule_matches(when: Mapping[str, str], action: JointAction) -> bool:
    return all(action.get(cid) == label for cid, label in when.items())


def _check_joint_action(model: SystemModel, action: JointAction) -> None:
    for c in model.components:
        if c.id not in action:
            raise InvalidJointActionError(c.id, f"missing action for component {c.id!r}")
    for cid, label in action.items():
        try:
            comp = model.component(cid)
        except KeyError:
            raise InvalidJointActionError(cid, f"unknown component {cid!r} in joint action") from None
        if label not in comp.actions and label not in model.attack_actions.get(cid, ()):
            raise InvalidJointActionError(
                cid, f"unknown action {label!r} for component {cid!r}"
            )


def system_utility(model: SystemModel, action: JointAction) -> float:
    """Weighted sum of per-attribute scores for a joint action.

    Each quality attribute takes its score from the first rule (declaration
    order) that matches `action` and lists that attribute; attributes no rule
    speaks for take the model's default score. Attack-context labels are
    permitted wherever the model declares them.
    """
    _check_joint_action(model, action)
    total = 0.0
    for qa in model.quality_attributes:
        total += qa.weight * _attribute_score(model, qa.name, action)
    return total


def _attribute_score(model: SystemModel, name: str, action: JointAction) -> float:
    for rule in model.utility_rules:
        if name in rule.scores and rule_matches(rule.when, action):
            return float(rule.scores[name])
    return float(model.utility_default[name])


def validate_model(model: SystemModel) -> list[Violation]:
    """Check every structural invariant of a SystemModel.

    Returns an empty list iff the model is valid; violations carry a stable
    code, the offending subject and a document path.
    """
    out: list[Violation] = []

    if not model.components:
        out.append(Violation("EmptyComponentList", "components", "empty component list", "components"))
    if not model.quality_attributes:
        out.append(
            Violation("EmptyQualityAttributes", "quality_attributes",
                      "at least one quality attribute is required", "quality_attributes")
        )

    seen_ids: set[str] = set()
    for i, c in enumerate(model.components):
        path = f"components[{i}]"
        if not c.id:
            out.append(Violation("EmptyComponentId", c.id, "component id must be nonempty", f"{path}.id"))
        if c.id in seen_ids:
            out.append(Violation("DuplicateComponentId", c.id, f"duplicate component id {c.id!r}", f"{path}.id"))
        seen_ids.add(c.id)
        if not c.actions:
            out.append(Violation("EmptyActionList", c.id, f"component {c.id!r} has no actions", f"{path}.actions"))
        dup = _first_duplicate(c.actions)
        if dup is not None:
            out.append(Violation("DuplicateAction", c.id, f"duplicate action {dup!r} in component {c.id!r}", f"{path}.actions"))
        if c.actions and c.baseline not in c.actions:
            out.append(
                Violation("BaselineNotInActions", c.id,
                          f"baseline {c.baseline!r} of component {c.id!r} is not a declared action",
                          f"{path}.baseline")
            )

    qa_names: set[str] = set()
    for i, qa in enumerate(model.quality_attributes):
        path = f"quality_attributes[{i}]"
        if qa.name in qa_names:
            out.append(Violation("DuplicateQualityAttribute", qa.name, f"duplicate quality attribute {qa.name!r}", f"{path}.name"))
        qa_names.add(qa.name)

    for name in qa_names:
        if name not in model.utility_default:
            out.append(
                Violation("MissingDefaultScore", name,
                          f"utility_default does not cover quality attribute {name!r}", "utility_default")
            )
    for name in model.utility_default:
        if name not in qa_names:
            out.append(
                Violation("UnknownQualityAttribute", name,
                          f"utility_default scores unknown quality attribute {name!r}", f"utility_default.{name}")
            )

    for i, rule in enumerate(model.utility_rules):
        path = f"utility_rules[{i}]"
        for cid, label in rule.when.items():
            if cid not in seen_ids:
                out.append(Violation("UnknownComponent", cid, f"rule references unknown component {cid!r}", f"{path}.when.{cid}"))
                continue
            comp = model.component(cid)
            if label not in comp.actions and label not in model.attack_actions.get(cid, ()):
                out.append(
                    Violation("UnknownAction", label,
                              f"rule requires unknown action {label!r} of component {cid!r}", f"{path}.when.{cid}")
                )
        for name in rule.scores:
            if name not in qa_names:
                out.append(
                    Violation("UnknownQualityAttribute", name,
                              f"rule scores unknown quality attribute {name!r}", f"{path}.scores.{name}")
                )

    for cid in model.attack_actions:
        if cid not in seen_ids:
            out.append(
                Violation("UnknownComponent", cid,
                          f"attack actions declared for unknown component {cid!r}", f"attack_actions.{cid}")
            )

    return out


def _first_duplicate(items: Iterable[str]) -> str | None:
    seen: set[str] = set()
    for it in items:
        if it in seen:
            return it
        seen.add(it)
    return None
