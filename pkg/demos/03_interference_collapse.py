"""Watching a measurement destroy interference.

The `interference` machine halts on a blank input with output 0 and
probability 1, but only because its two computation paths into the
"output 1" configuration carry amplitudes 1/2 and -1/2 and cancel.
Measuring the halt flag partway collapses the superposition before the
cancellation happens, and the output becomes a fair coin.

Same machine, same input, same number of steps; the only difference is
whether anyone looked after step 1.
"""

from __future__ import annotations

from qtmlab import load_corpus_machine, tv_distance
from qtmlab.machines import tape_render
from qtmlab.quantum import initial_superposition, run, step


def print_state(m, psi, t):
    print(f"  after step {t}: {len(psi)} terms")
    for cfg in sorted(psi.terms, key=lambda c: (c.h, c.q, c.tape)):
        amp = psi.amplitude(cfg)
        flag = "halted" if cfg.h else "live"
        _, bits = tape_render(cfg.tape)
        print(
            f"    state {m.state_name(cfg.q):<3} tape {bits or '(blank)':<7} {flag:<7}"
            f" amplitude {amp}  (|amp|^2 = {amp.norm_sq()})"
        )


def main() -> None:
    m = load_corpus_machine("interference.qtm")
    print("Evolving `interference` on blank input, nobody watching:")
    print()
    psi = initial_superposition(m, "")
    print_state(m, psi, 0)
    for t in (1, 2):
        psi = step(m, psi)
        print_state(m, psi, t)
    print()
    print("The amplitudes 1/2 and -1/2 on the two routes into output 1")
    print("cancelled during step 2.  Reading only at the end:")
    print()
    unmeasured = run(m, "", [2], 2).marginal_output()
    print(f"  output distribution: {fmt_dist(unmeasured)}")
    print()

    print("Now measure the halt flag after step 1 as well.  Half the mass")
    print("is already halted there and gets recorded; the surviving live")
    print("branch no longer has a partner to cancel with:")
    print()
    measured = run(m, "", [1, 2], 2).marginal_output()
    print(f"  output distribution: {fmt_dist(measured)}")
    print()

    gap = tv_distance(measured, unmeasured)
    print(f"Total variation between the two distributions: {gap}")
    print("Measurement is not a passive read; the schedule is part of the")
    print("experiment.")


def fmt_dist(dist):
    parts = []
    for (offset, bits), p in sorted(dist.items()):
        parts.append(f"output {bits or '(blank)'} with probability {p}")
    return "; ".join(parts)


if __name__ == "__main__":
    main()
