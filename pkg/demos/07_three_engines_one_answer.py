"""One deterministic machine under three engines.

A deterministic machine lifts to a probabilistic one (every branch
gets probability 1) and to a quantum one (every branch gets amplitude
1, uncovered sources completed with self-loops into the halting
state).  All three engines must then tell the same story, and the
comparison is exact because nothing anywhere is sampled or rounded.

The second half compares the exact distribution of a genuinely random
machine against sampled trajectories, which is the one place floats
would have hidden the gap this report makes visible.
"""

from __future__ import annotations

from fractions import Fraction

from qtmlab import (
    accuracy_report,
    distributions_equal,
    load_corpus_machine,
    outcome_marginal,
    tm_to_ptm,
    tm_to_qtm,
    tv_distance,
)
from qtmlab.classical import ptm_evolve_exact, ptm_sample, tm_run
from qtmlab.machines import tape_render
from qtmlab.quantum import run


def main() -> None:
    m = load_corpus_machine("flipper.tm")
    horizon = 30
    print(f"Running `{m.name}` on input 0110 under all three engines:")
    print()

    direct = outcome_marginal(tm_run(m, "0110", horizon))
    lifted_p = outcome_marginal(ptm_evolve_exact(tm_to_ptm(m), "0110", horizon))
    lifted_q = outcome_marginal(
        run(tm_to_qtm(m), "0110", range(1, horizon + 1), horizon)
    )

    for label, dist in (
        ("deterministic", direct),
        ("probabilistic lift", lifted_p),
        ("quantum lift", lifted_q),
    ):
        rows = ", ".join(
            f"{describe(key)} with probability {p}" for key, p in sorted(dist.items())
        )
        print(f"  {label:<18} {rows}")
    print()
    print(f"  all three agree: {distributions_equal(direct, lifted_p) and distributions_equal(direct, lifted_q)}")
    print()

    coin = load_corpus_machine("faircoin.ptm")
    exact = outcome_marginal(ptm_evolve_exact(coin, "", 4))
    print("`faircoin` exact distribution at horizon 4:")
    for key, p in sorted(exact.items()):
        print(f"  {describe(key)}: {p}")
    print()

    print("Sampled trajectories against the exact distribution:")
    print()
    for shots in (10, 100, 1000):
        counts = {}
        for i in range(shots):
            outcome = ptm_sample(coin, "", 4, seed=i)
            key = (outcome.status, tape_render(outcome.tape))
            counts[key] = counts.get(key, 0) + 1
        empirical = {key: Fraction(c, shots) for key, c in counts.items()}
        report = accuracy_report(empirical, exact, Fraction(1, 10))
        print(
            f"  {shots:>4} shots: tv distance {str(report.tv):<8}"
            f" within budget 1/10: {report.within_budget}"
        )
    print()
    print("The empirical gap is itself an exact rational, so accuracy")
    print("claims are decidable statements, not confidence intervals.")


def describe(key):
    if len(key) == 1:
        return "still running"
    status, (offset, bits) = key
    return f"{status.lower()} tape {bits or '(blank)'}"


if __name__ == "__main__":
    main()
