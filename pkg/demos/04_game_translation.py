"""Translate (system model, attack model) into a Bayesian game and poke at it.

Each component becomes a player; attacked components get a Malicious type
with prior equal to their compromise probability. Normal types earn Shapley
shares of system utility, Malicious types earn attacker rewards.
"""

from pathlib import Path

from bayesadapt import PlayerType, analyze_attacks, build_game, parse_scenario_file, payoff, prior_probability

SCENARIO = Path(__file__).resolve().parents[1] / "scenarios" / "lb3.scn"
N, M = PlayerType.NORMAL, PlayerType.MALICIOUS


def main():
    script = parse_scenario_file(SCENARIO)
    att = analyze_attacks(script.timeline, script.kb, script.model)
    game = build_game(script.model, att)

    print("players:", game.players)
    print("type sets:", {p: [t.value for t in ts] for p, ts in game.type_sets.items()})
    print("malicious priors:", game.prior_malicious)
    print("s1's malicious action set:", game.action_sets[("s1", M)])

    all_normal = {"lb": N, "s1": N, "s2": N}
    compromised = {"lb": N, "s1": M, "s2": N}
    print("\ntype profile priors:")
    print("  all normal:   ", prior_probability(game, all_normal))
    print("  s1 malicious: ", prior_probability(game, compromised))

    print("\npayoffs when s1 is malicious and drops while lb still routes to it:")
    hit = {"lb": "to_s1", "s1": "drop", "s2": "serve"}
    for player in game.players:
        print(f"  {player}: {payoff(game, compromised, hit, player):g}")

    print("payoffs after lb reroutes to s2:")
    dodged = {"lb": "to_s2", "s1": "drop", "s2": "serve"}
    for player in game.players:
        print(f"  {player}: {payoff(game, compromised, dodged, player):g}")


if __name__ == "__main__":
    main()
