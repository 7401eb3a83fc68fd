"""Turn monitored attack events plus the knowledge base into an attack model.

Demonstrates the analyzer's composition rules: noisy-or for compromise
probabilities, ordered union for malicious actions, idempotent re-reports.
"""

from pathlib import Path

from bayesadapt import (
    AttackEvent,
    RewardRule,
    VulnerabilityRecord,
    analyze_attacks,
    parse_scenario_file,
    validate_attack_model,
)

SCENARIO = Path(__file__).resolve().parents[1] / "scenarios" / "lb3.scn"


def main():
    script = parse_scenario_file(SCENARIO)
    model = script.model

    att = analyze_attacks(script.timeline, script.kb, model)
    print("scenario timeline ->", att)
    print("violations:", validate_attack_model(att, model))

    # Two different exploits against the same server combine.
    kb = list(script.kb) + [
        VulnerabilityRecord(
            vuln_id="cve-y",
            component="s1",
            compromise_probability=0.5,
            malicious_actions=("stall",),
            reward_rules=(RewardRule({"s1": "stall"}, 2.0),),
            reward_default=0.0,
        )
    ]
    events = [
        AttackEvent(0, "s1", "cve-x"),
        AttackEvent(1, "s1", "cve-y"),
        AttackEvent(1, "s1", "cve-y"),  # duplicate report, ignored
    ]
    combined = analyze_attacks(events, kb, model)
    print("\ntwo exploits on s1:")
    print("  probability 1-(1-0.6)(1-0.5) =", combined.probabilities["s1"])
    print("  malicious actions:", combined.malicious_actions["s1"])
    rules, default = combined.rewards["s1"]
    print("  reward rules:", [(dict(r.when), r.reward) for r in rules], "default", default)


if __name__ == "__main__":
    main()
