"""Sessions with an operator who may look at the halt bit.

The session protocol: evolve T steps, signal the exact halting
probability, let a policy decide whether to observe the halt flag,
then undo the evolution by running the inverse T steps and start the
next iteration from whatever state that reset produced.  Nothing is
ever restored from a saved copy; going backwards is the only way home,
so every scar the forward evolution or an observation leaves is
carried into the next iteration.

Two corpus machines halt partially, and on those an observation is
never free: once the operator looks at a halt bit whose probability is
strictly between 0 and 1, the reset fidelity stays below 1 for the
rest of the session.  The final table gathers that evidence for the
whole corpus.
"""

from __future__ import annotations

from fractions import Fraction

from qtmlab import ObservationPolicy, encode_machine, load_corpus_machine, suhd_run
from qtmlab.corpus import WELL_FORMED_QTMS
from qtmlab.harness import CONJECTURE_HEADER, conjecture_report

EPSILON = Fraction(1, 100)


def session(name: str, policy, max_T: int):
    code = encode_machine(load_corpus_machine(f"{name}.qtm"))
    records = suhd_run(code, "", EPSILON, policy, max_T)
    print(f"  {name}, policy {policy.kind}:")
    print("    T  steps  signal p1  observed  reset fidelity  restored")
    for r in records:
        print(
            f"    {r.outer_T}  {r.steps_executed:>5}  {str(r.halt_prob_at_signal):>9}"
            f"  {str(r.observed):<8}  {str(r.reset_fidelity):>14}"
            f"  {r.state_restored}"
        )
    print()


def main() -> None:
    print("A reversible machine shrugs the protocol off:")
    print()
    session("coin2", ObservationPolicy.never(), 4)

    print("`halfhalt` scars itself even unobserved (the freeze collision")
    print("from the inverse-evolution walkthrough, compounding because each")
    print("iteration starts from the previous reset):")
    print()
    session("halfhalt", ObservationPolicy.never(), 4)

    print("Observing at iteration 2 collapses the state mid-session; the")
    print("fidelity never returns to 1 afterwards:")
    print()
    session("halfhalt", ObservationPolicy.at_iterations([2]), 5)

    print("Corpus-wide evidence table:")
    print()
    codes = [encode_machine(load_corpus_machine(f"{name}.qtm")) for name in WELL_FORMED_QTMS]
    report = conjecture_report(codes, EPSILON, 5)
    print(" ", CONJECTURE_HEADER)
    print()
    print("    machine       partial-halt iterations  irreversible once observed")
    for entry in report.entries:
        eligible = ",".join(str(t) for t in entry.eligible_signals) or "none"
        print(
            f"    {entry.machine:<12}  {eligible:>23}"
            f"  {entry.irreversible_under_observation}"
        )


if __name__ == "__main__":
    main()
