"""Scenario document parsing.

A scenario is a single JSON object describing the managed system, the
vulnerability knowledge base and a timeline of attack events:

    {
      "components": [{"id": "lb", "actions": ["to_s1", "to_s2"], "baseline": "to_s1"}, ...],
      "quality_attributes": [{"name": "perf", "weight": 1.0}],
      "utility_rules": [{"when": {"lb": "to_s1", "s1": "serve"}, "scores": {"perf": 10}}, ...],
      "utility_default": {"perf": 0},
      "knowledge_base": {"vulnerabilities": {"cve-x": {
          "component": "s1", "compromise_probability": 0.6,
          "malicious_actions": ["drop"],
          "reward_rules": [{"when": {"lb": "to_s1", "s1": "drop"}, "reward": 5}],
          "reward_default": 0}}},
      "timeline": [{"time": 2, "component": "s1", "vuln_id": "cve-x"}],
      "horizon": 4,
      "seed": 0
    }

`knowledge_base`, `timeline`, `horizon` and `seed` are optional; a missing
horizon defaults to one past the last event (or 1). Parse errors name the
path of the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .attacks import AttackEvent, RewardRule, VulnerabilityRecord
from .loop import ScenarioScript
from .model import Component, QualityAttribute, SystemModel, UtilityRule, validate_model

__all__ = [
    "ScenarioError",
    "parse_scenario",
    "parse_scenario_file",
    "parse_system_model",
]


class ScenarioError(ValueError):
    """A scenario document is malformed or violates a model invariant."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _expect(value: Any, kind: type | tuple[type, ...], path: str, what: str) -> Any:
    if isinstance(value, bool) and kind in (int, float, (int, float)):
        raise ScenarioError(path, f"expected {what}, got a boolean")
    if not isinstance(value, kind):
        raise ScenarioError(path, f"expected {what}, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, kind: type | tuple[type, ...], path: str, what: str) -> Any:
    if key not in obj:
        raise ScenarioError(f"{path}.{key}" if path else key, f"missing required field ({what})")
    return _expect(obj[key], kind, f"{path}.{key}" if path else key, what)


def _string_map(value: Any, path: str) -> dict[str, str]:
    _expect(value, dict, path, "an object of action labels")
    out: dict[str, str] = {}
    for k, v in value.items():
        out[k] = _expect(v, str, f"{path}.{k}", "an action label")
    return out


def _number_map(value: Any, path: str) -> dict[str, float]:
    _expect(value, dict, path, "an object of numeric scores")
    out: dict[str, float] = {}
    for k, v in value.items():
        out[k] = float(_expect(v, (int, float), f"{path}.{k}", "a number"))
    return out


def parse_scenario(text: str) -> ScenarioScript:
    """Parse a scenario document into a validated ScenarioScript."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("", f"not valid JSON: {e}") from None
    _expect(doc, dict, "", "a JSON object")

    model = _parse_model(doc)
    kb = _parse_knowledge_base(doc, model)
    timeline = _parse_timeline(doc, kb)

    if "horizon" in doc:
        horizon = _expect(doc["horizon"], int, "horizon", "an integer tick count")
        if horizon < 0:
            raise ScenarioError("horizon", "horizon must be nonnegative")
    else:
        horizon = (timeline[-1].time + 1) if timeline else 1
    seed = _expect(doc.get("seed", 0), int, "seed", "an integer seed")

    for i, ev in enumerate(timeline):
        if ev.time >= horizon:
            raise ScenarioError(f"timeline[{i}].time", f"event time {ev.time} outside horizon {horizon}")

    return ScenarioScript(model=model, kb=kb, timeline=timeline, horizon=horizon, seed=seed)


def parse_scenario_file(path: str | Path) -> ScenarioScript:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def parse_system_model(text: str) -> SystemModel:
    """Parse a scenario document and return just the system model."""
    return parse_scenario(text).model


def _parse_model(doc: dict) -> SystemModel:
    raw_components = _get(doc, "components", list, "", "an array of components")
    components: list[Component] = []
    for i, raw in enumerate(raw_components):
        path = f"components[{i}]"
        _expect(raw, dict, path, "a component object")
        cid = _get(raw, "id", str, path, "a component id")
        actions_raw = _get(raw, "actions", list, path, "an array of action labels")
        actions = tuple(
            _expect(a, str, f"{path}.actions[{j}]", "an action label")
            for j, a in enumerate(actions_raw)
        )
        baseline = _get(raw, "baseline", str, path, "a baseline action label")
        components.append(Component(id=cid, actions=actions, baseline=baseline))

    raw_attrs = _get(doc, "quality_attributes", list, "", "an array of quality attributes")
    attributes: list[QualityAttribute] = []
    for i, raw in enumerate(raw_attrs):
        path = f"quality_attributes[{i}]"
        _expect(raw, dict, path, "a quality attribute object")
        name = _get(raw, "name", str, path, "an attribute name")
        weight = float(_get(raw, "weight", (int, float), path, "a numeric weight"))
        attributes.append(QualityAttribute(name=name, weight=weight))

    rules: list[UtilityRule] = []
    for i, raw in enumerate(doc.get("utility_rules", [])):
        path = f"utility_rules[{i}]"
        _expect(raw, dict, path, "a utility rule object")
        when = _string_map(_get(raw, "when", dict, path, "a partial joint action"), f"{path}.when")
        scores = _number_map(_get(raw, "scores", dict, path, "per-attribute scores"), f"{path}.scores")
        rules.append(UtilityRule(when=when, scores=scores))

    default = _number_map(
        _get(doc, "utility_default", dict, "", "per-attribute default scores"), "utility_default"
    )

    attack_actions = _collect_attack_actions(doc, {c.id for c in components})
    model = SystemModel(
        components=tuple(components),
        quality_attributes=tuple(attributes),
        utility_rules=tuple(rules),
        utility_default=default,
        attack_actions=attack_actions,
    )

    problems = validate_model(model)
    if problems:
        first = problems[0]
        detail = "; ".join(str(v) for v in problems)
        raise ScenarioError(first.path, detail)
    return model


def _collect_attack_actions(doc: dict, known: set[str]) -> dict[str, tuple[str, ...]]:
    # Labels the knowledge base says a compromised component may play; they
    # become admissible in utility rules and joint actions. Malformed or
    # unknown-component entries are skipped here and reported with their own
    # document path by _parse_knowledge_base.
    kb = doc.get("knowledge_base")
    if not isinstance(kb, dict):
        return {}
    vulns = kb.get("vulnerabilities")
    if not isinstance(vulns, dict):
        return {}
    out: dict[str, list[str]] = {}
    for raw in vulns.values():
        if not isinstance(raw, dict):
            continue
        cid = raw.get("component")
        actions = raw.get("malicious_actions")
        if not isinstance(cid, str) or cid not in known or not isinstance(actions, list):
            continue
        bucket = out.setdefault(cid, [])
        for a in actions:
            if isinstance(a, str) and a not in bucket:
                bucket.append(a)
    return {cid: tuple(v) for cid, v in out.items()}


def _parse_knowledge_base(doc: dict, model: SystemModel) -> tuple[VulnerabilityRecord, ...]:
    if "knowledge_base" not in doc:
        return ()
    kb = _expect(doc["knowledge_base"], dict, "knowledge_base", "a knowledge base object")
    vulns = kb.get("vulnerabilities", {})
    _expect(vulns, dict, "knowledge_base.vulnerabilities", "an object keyed by vulnerability id")

    known = set(model.component_ids)
    records: list[VulnerabilityRecord] = []
    for vuln_id, raw in vulns.items():
        path = f"knowledge_base.vulnerabilities.{vuln_id}"
        _expect(raw, dict, path, "a vulnerability record")
        cid = _get(raw, "component", str, path, "a component id")
        if cid not in known:
            raise ScenarioError(f"{path}.component", f"unknown component {cid!r}")
        prob = float(_get(raw, "compromise_probability", (int, float), path, "a probability"))
        if not 0.0 <= prob <= 1.0:
            raise ScenarioError(f"{path}.compromise_probability", f"probability {prob} outside [0, 1]")
        actions_raw = _get(raw, "malicious_actions", list, path, "an array of action labels")
        if not actions_raw:
            raise ScenarioError(f"{path}.malicious_actions", "at least one malicious action is required")
        actions = tuple(
            _expect(a, str, f"{path}.malicious_actions[{j}]", "an action label")
            for j, a in enumerate(actions_raw)
        )
        rules: list[RewardRule] = []
        for j, rr in enumerate(raw.get("reward_rules", [])):
            rpath = f"{path}.reward_rules[{j}]"
            _expect(rr, dict, rpath, "a reward rule object")
            when = _string_map(_get(rr, "when", dict, rpath, "a partial joint action"), f"{rpath}.when")
            for wcid, wlabel in when.items():
                if wcid not in known:
                    raise ScenarioError(f"{rpath}.when.{wcid}", f"unknown component {wcid!r}")
                if wlabel not in model.allowed_actions(wcid):
                    raise ScenarioError(
                        f"{rpath}.when.{wcid}", f"unknown action {wlabel!r} for component {wcid!r}"
                    )
            reward = float(_get(rr, "reward", (int, float), rpath, "a numeric reward"))
            rules.append(RewardRule(when=when, reward=reward))
        reward_default = float(raw.get("reward_default", 0.0))
        records.append(
            VulnerabilityRecord(
                vuln_id=vuln_id,
                component=cid,
                compromise_probability=prob,
                malicious_actions=actions,
                reward_rules=tuple(rules),
                reward_default=reward_default,
            )
        )
    return tuple(records)


def _parse_timeline(doc: dict, kb: tuple[VulnerabilityRecord, ...]) -> tuple[AttackEvent, ...]:
    if "timeline" not in doc:
        return ()
    raw_events = _expect(doc["timeline"], list, "timeline", "an array of attack events")
    by_id = {rec.vuln_id: rec for rec in kb}

    events: list[AttackEvent] = []
    last = -1
    for i, raw in enumerate(raw_events):
        path = f"timeline[{i}]"
        _expect(raw, dict, path, "an attack event object")
        time = _get(raw, "time", int, path, "a nonnegative tick")
        if time < 0:
            raise ScenarioError(f"{path}.time", f"negative event time {time}")
        if time < last:
            raise ScenarioError(f"{path}.time", "timeline not sorted by time")
        last = time
        cid = _get(raw, "component", str, path, "a component id")
        vuln_id = _get(raw, "vuln_id", str, path, "a vulnerability id")
        rec = by_id.get(vuln_id)
        if rec is None:
            raise ScenarioError(f"{path}.vuln_id", f"unknown vulnerability {vuln_id!r}")
        if rec.component != cid:
            raise ScenarioError(
                f"{path}.component",
                f"event component {cid!r} does not match vulnerability {vuln_id!r} "
                f"(declared for {rec.component!r})",
            )
        events.append(AttackEvent(time=time, component=cid, vuln_id=vuln_id))
    return tuple(events)
