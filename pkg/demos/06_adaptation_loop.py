"""Run the full monitor-analyze-plan-execute loop on the scripted timeline.

Tick by tick: deliver attack events, re-plan only when the attack picture
changes, realize component behavior from the compromise probabilities with
a replayable seeded draw, and record the outcome.
"""

import io
from pathlib import Path

from bayesadapt import parse_scenario_file, run_scenario, write_trace

SCENARIO = Path(__file__).resolve().parents[1] / "scenarios" / "lb3.scn"


def main():
    script = parse_scenario_file(SCENARIO)
    trace = run_scenario(script)

    print(f"horizon {script.horizon}, seed {script.seed}, script {trace.script_hash[:12]}...")
    print()
    print("tick  events        replan  route   s1-behavior  utility")
    for r in trace.records:
        events = ",".join(ev.vuln_id for ev in r.events) or "-"
        s1 = f"{r.realized_types['s1'].value}/{r.realized_action['s1']}"
        print(
            f"{r.time:>4}  {events:<12}  {str(r.replanned):<6}"
            f"  {r.realized_action['lb']:<6}  {s1:<12} {r.realized_utility:g}"
        )

    plans = [r for r in trace.records if r.replanned]
    print(f"\nplanner invocations: {len(plans)} (ticks {[r.time for r in plans]})")
    for r in plans:
        stats = r.decision.solve_stats
        print(
            f"  t={r.time}: {stats.equilibria_found} equilibria out of "
            f"{stats.profiles_examined} profiles, fallback={r.decision.fallback}, "
            f"E[utility]={r.decision.expected_system_utility:g}"
        )

    buffer = io.StringIO()
    write_trace(trace, buffer)
    print("\nfirst two trace lines (line-delimited record format):")
    for line in buffer.getvalue().splitlines()[:2]:
        print(" ", line[:110] + ("..." if len(line) > 110 else ""))


if __name__ == "__main__":
    main()
