"""Load a scenario and evaluate system utility for a few joint actions.

The running example is a tiny load-balanced web tier: a balancer `lb`
routing to servers `s1` and `s2`, with one weighted quality attribute
(`perf`) scored by an ordered first-match-wins rule table.
"""

from pathlib import Path

from bayesadapt import baseline_action, parse_scenario_file, system_utility, validate_model

SCENARIO = Path(__file__).resolve().parents[1] / "scenarios" / "lb3.scn"


def main():
    script = parse_scenario_file(SCENARIO)
    model = script.model

    print(f"components:         {', '.join(model.component_ids)}")
    for comp in model.components:
        print(f"  {comp.id}: actions={list(comp.actions)} baseline={comp.baseline!r}")
    print(f"quality attributes: {[(q.name, q.weight) for q in model.quality_attributes]}")
    print(f"violations:         {validate_model(model)}")
    print()

    candidates = [
        baseline_action(model),                            # rule 1 fires
        {"lb": "to_s2", "s1": "serve", "s2": "serve"},     # rule 2 fires
        {"lb": "to_s1", "s1": "drop", "s2": "serve"},      # nothing matches -> default
        {"lb": "to_s2", "s1": "drop", "s2": "drop"},
    ]
    print("joint action -> system utility")
    for action in candidates:
        flat = ", ".join(f"{cid}={label}" for cid, label in action.items())
        print(f"  ({flat}) -> {system_utility(model, action):g}")


if __name__ == "__main__":
    main()
