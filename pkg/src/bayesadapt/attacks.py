"""Component-level attack modeling and event analysis.

The analyzer is a deterministic knowledge-base lookup: monitored events name
vulnerabilities, the knowledge base says what a triggered vulnerability lets
the attacker do on which component, with what success probability and for
what reward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import SystemModel, Violation, rule_matches

__all__ = [
    "RewardRule",
    "VulnerabilityRecord",
    "AttackEvent",
    "AttackModel",
    "UnknownVulnerabilityError",
    "AttackAnalysisError",
    "analyze_attacks",
    "attacker_reward",
    "merge_attack_actions",
    "validate_attack_model",
]


class AttackAnalysisError(ValueError):
    """Events reference vulnerabilities or components the analyzer cannot resolve."""


class UnknownVulnerabilityError(AttackAnalysisError):
    def __init__(self, vuln_id: str):
        self.vuln_id = vuln_id
        super().__init__(f"unknown vulnerability: {vuln_id!r}")


@dataclass(frozen=True)
class RewardRule:
    """Attacker reward granted when `when` matches the joint action."""

    when: dict[str, str]
    reward: float


@dataclass(frozen=True)
class VulnerabilityRecord:
    """Knowledge-base entry: what exploiting one vulnerability enables.

    `malicious_actions` may overlap the component's normal actions (an
    attacker can mimic normal behavior); `compromise_probability` is the
    chance one exploit attempt succeeds.
    """

    vuln_id: str
    component: str
    compromise_probability: float
    malicious_actions: tuple[str, ...]
    reward_rules: tuple[RewardRule, ...] = ()
    reward_default: float = 0.0


@dataclass(frozen=True)
class AttackEvent:
    """A monitored exploit attempt at a discrete tick."""

    time: int
    component: str
    vuln_id: str


@dataclass(frozen=True)
class AttackModel:
    """Aggregate of the on-going attacks, keyed by attacked component.

    `rewards` maps each attacked component to its ordered reward rules plus
    the fallback reward used when no rule matches.
    """

    attacked: tuple[str, ...]
    malicious_actions: dict[str, tuple[str, ...]]
    probabilities: dict[str, float]
    rewards: dict[str, tuple[tuple[RewardRule, ...], float]]

    @classmethod
    def empty(cls) -> "AttackModel":
        return cls((), {}, {}, {})


def analyze_attacks(
    events: Sequence[AttackEvent],
    kb: Sequence[VulnerabilityRecord],
    model: SystemModel,
) -> AttackModel:
    """Fold monitored events and the knowledge base into an AttackModel.

    Per component: malicious actions are the ordered union over its triggered
    vulnerabilities (first occurrence wins), the compromise probability
    combines independent exploit attempts as 1 - prod(1 - p), and reward
    rules are concatenated in trigger order with the last record's default.
    Re-reports of an already triggered vulnerability are idempotent.
    """
    by_id: dict[str, VulnerabilityRecord] = {}
    for rec in kb:
        if rec.vuln_id in by_id:
            raise AttackAnalysisError(f"duplicate vulnerability id in knowledge base: {rec.vuln_id!r}")
        by_id[rec.vuln_id] = rec

    known = set(model.component_ids)
    triggered: dict[str, list[VulnerabilityRecord]] = {}
    for ev in events:
        if ev.component not in known:
            raise AttackAnalysisError(f"event names unknown component: {ev.component!r}")
        rec = by_id.get(ev.vuln_id)
        if rec is None:
            raise UnknownVulnerabilityError(ev.vuln_id)
        if rec.component != ev.component:
            raise AttackAnalysisError(
                f"event component {ev.component!r} does not match vulnerability "
                f"{ev.vuln_id!r} (declared for {rec.component!r})"
            )
        bucket = triggered.setdefault(ev.component, [])
        if all(r.vuln_id != rec.vuln_id for r in bucket):
            bucket.append(rec)

    # Attacked set in model declaration order, so downstream structures are
    # stable regardless of event arrival order.
    attacked = tuple(cid for cid in model.component_ids if cid in triggered)
    actions: dict[str, tuple[str, ...]] = {}
    probabilities: dict[str, float] = {}
    rewards: dict[str, tuple[tuple[RewardRule, ...], float]] = {}
    for cid in attacked:
        recs = triggered[cid]
        merged: list[str] = []
        for rec in recs:
            for a in rec.malicious_actions:
                if a not in merged:
                    merged.append(a)
        actions[cid] = tuple(merged)
        survive = 1.0
        for rec in recs:
            survive *= 1.0 - rec.compromise_probability
        probabilities[cid] = 1.0 - survive
        rules: list[RewardRule] = []
        for rec in recs:
            rules.extend(rec.reward_rules)
        rewards[cid] = (tuple(rules), recs[-1].reward_default)

    return AttackModel(attacked, actions, probabilities, rewards)


def attacker_reward(att: AttackModel, component: str, action: Mapping[str, str]) -> float:
    """Reward of a compromised component: first matching rule, else default."""
    if component not in att.rewards:
        raise AttackAnalysisError(f"component {component!r} is not attacked")
    rules, default = att.rewards[component]
    for rule in rules:
        if rule_matches(rule.when, action):
            return float(rule.reward)
    return float(default)


def validate_attack_model(att: AttackModel, model: SystemModel) -> list[Violation]:
    """Check AttackModel invariants against a system model."""
    out: list[Violation] = []
    known = set(model.component_ids)

    seen: set[str] = set()
    for cid in att.attacked:
        if cid in seen:
            out.append(Violation("DuplicateAttackedComponent", cid, f"component {cid!r} attacked twice", "attacked"))
        seen.add(cid)
        if cid not in known:
            out.append(Violation("UnknownComponent", cid, f"attacked component {cid!r} not in model", "attacked"))

    for label, mapping in (
        ("malicious_actions", att.malicious_actions),
        ("probabilities", att.probabilities),
        ("rewards", att.rewards),
    ):
        for cid in att.attacked:
            if cid not in mapping:
                out.append(Violation("MissingAttackEntry", cid, f"{label} misses attacked component {cid!r}", label))
        for cid in mapping:
            if cid not in seen:
                out.append(Violation("UnexpectedAttackEntry", cid, f"{label} keyed by non-attacked component {cid!r}", label))

    for cid, p in att.probabilities.items():
        if not 0.0 <= p <= 1.0:
            out.append(
                Violation("ProbabilityOutOfRange", cid,
                          f"compromise probability {p!r} of {cid!r} outside [0, 1]", f"probabilities.{cid}")
            )

    for cid, labels in att.malicious_actions.items():
        if not labels:
            out.append(Violation("EmptyMaliciousActions", cid, f"no malicious actions for {cid!r}", f"malicious_actions.{cid}"))

    allowed = _allowed_labels(model, att)
    for cid, (rules, _default) in att.rewards.items():
        for i, rule in enumerate(rules):
            path = f"rewards.{cid}[{i}]"
            for rcid, label in rule.when.items():
                if rcid not in known:
                    out.append(Violation("UnknownComponent", rcid, f"reward rule references unknown component {rcid!r}", path))
                elif label not in allowed[rcid]:
                    out.append(
                        Violation("UnknownAction", label,
                                  f"reward rule requires unknown action {label!r} of component {rcid!r}", path)
                    )

    return out


def _allowed_labels(model: SystemModel, att: AttackModel) -> dict[str, set[str]]:
    allowed: dict[str, set[str]] = {}
    for comp in model.components:
        labels = set(comp.actions)
        labels.update(model.attack_actions.get(comp.id, ()))
        labels.update(att.malicious_actions.get(comp.id, ()))
        allowed[comp.id] = labels
    return allowed


def merge_attack_actions(model: SystemModel, att: AttackModel) -> dict[str, tuple[str, ...]]:
    """Union of the model's attack-context labels with the attack's actions."""
    merged = {cid: list(labels) for cid, labels in model.attack_actions.items()}
    for cid, labels in att.malicious_actions.items():
        bucket = merged.setdefault(cid, [])
        for a in labels:
            if a not in bucket:
                bucket.append(a)
    return {cid: tuple(labels) for cid, labels in merged.items()}
