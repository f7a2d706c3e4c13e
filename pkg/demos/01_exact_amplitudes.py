"""Why the amplitudes are field elements and not floats.

Every amplitude lives in Q(zeta) with zeta = exp(i*pi/4); every
probability lives in Q(sqrt 2).  Both fields are closed under the
arithmetic the step operator needs, so a simulation is a sequence of
exact identities.  This script shows the arithmetic on its own, then
drives a hundred steps of a branching machine and checks that the
squared norm is the integer 1, not a float near it.
"""

from __future__ import annotations

from fractions import Fraction

from qtmlab import CycQ8, RealQ2, load_corpus_machine
from qtmlab.exact import CYC_I, CYC_SQRT2, parse_amp
from qtmlab.quantum import initial_superposition, step


def show(label, value):
    print(f"  {label:<28} {value}")


def main() -> None:
    print("Arithmetic in Q(zeta), zeta = exp(i*pi/4)")
    print()
    zeta = CycQ8(0, 1, 0, 0)
    show("zeta", zeta)
    show("zeta^2  (should be i)", zeta * zeta)
    show("zeta^4  (should be -1)", zeta**4)
    show("zeta + conj(zeta)", zeta + zeta.conj())
    show("sqrt2 * sqrt2", CYC_SQRT2 * CYC_SQRT2)
    show("i * i", CYC_I * CYC_I)
    print()

    h = parse_amp("1/2*r2")
    print("The coin weight 1/2*r2 is 1/sqrt(2):")
    show("h", h)
    show("h * h", h * h)
    show("|h|^2", h.norm_sq())
    show("|h|^2 + |h|^2", h.norm_sq() + h.norm_sq())
    print()

    print("The same computation in floats never closes:")
    hf = float(h.norm_sq()) ** 0.5
    total = hf * hf + hf * hf
    show("float |h|^2 + |h|^2", repr(total))
    acc = 1.0
    for _ in range(100):
        acc *= hf * hf * 2.0
    show("after 100 multiplies", repr(acc))
    print()

    print("Probabilities live in Q(sqrt 2) and print in the same grammar")
    print("the machine files use:")
    p = RealQ2(Fraction(1, 2), Fraction(-1, 3))
    show("p", p)
    show("p as a float", float(p))
    show("p * p", p * p)
    print()

    m = load_corpus_machine("coin2.qtm")
    psi = initial_superposition(m, "")
    for _ in range(100):
        psi = step(m, psi)
    print(f"coin2 after 100 steps: {len(psi)} configurations in superposition")
    show("norm_sq", psi.norm_sq())
    show("norm_sq == 1", psi.norm_sq() == 1)
    print()
    print("The float column above is display only; nothing downstream of a")
    print("simulation ever rounds.")


if __name__ == "__main__":
    main()
