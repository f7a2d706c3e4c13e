"""Checking unitarity from the rule table alone.

A machine evolves unitarily iff its finite rule table satisfies four
local conditions: unit row norms (C1), orthogonality of rows sharing a
cell (C2), and orthogonality of rows whose heads land one (C3) or two
(C4) cells apart.  The conditions are decidable exactly, so a verdict
comes with the offending residual when it fails.

As a cross-check, the step operator can be built outright on a small
cyclic tape and its Gram matrix compared to the identity.  The two
roads must agree, and this script walks both for a clean machine, the
two bundled violators, and a hand-broken mutant.
"""

from __future__ import annotations

from fractions import Fraction

from qtmlab import load_corpus_machine, make_machine
from qtmlab.dsl import serialize_machine
from qtmlab.wellformed import check_unitary_window, check_wellformed_local


def verdict_line(m) -> None:
    report = check_wellformed_local(m)
    windows = {L: check_unitary_window(m, L) for L in (2, 3, 4)}
    print(f"{m.name}: local verdict {report.verdict}, windows {windows}")
    for v in report.violations:
        print(f"  {v.condition} fails at {' vs '.join(v.witness)}")
        print(f"     residual {v.residual}")


def main() -> None:
    coin2 = load_corpus_machine("coin2.qtm")
    print("A clean machine first.  Its table:")
    print()
    for line in serialize_machine(coin2).splitlines():
        print("   ", line)
    print()
    verdict_line(coin2)
    print()

    print("The bundled violators:")
    print()
    for name in ("bad-norm.qtm", "bad-orth.qtm"):
        verdict_line(load_corpus_machine(name))
        print()

    print("Breaking a clean machine by hand: scale one branch weight of")
    print("coin2 by 9/10 and C1 notices the missing mass.")
    print()
    rows = []
    for source, branches in coin2.rules:
        edited = []
        for b in branches:
            w = b.weight
            if source == (0, "0") and b.write == "0":
                w = w * Fraction(9, 10)
            edited.append((b.write, b.move, b.next_state, w))
        rows.append((source, edited))
    mutant = make_machine("qtm", "coin2-offnorm", coin2.states, coin2.halt, rows)
    verdict_line(mutant)
    print()
    print("Both roads agree on every machine above; the window check is the")
    print("oracle that keeps the local conditions honest.")


if __name__ == "__main__":
    main()
