"""Every machine is a natural number, and one simulator runs them all.

`encode_machine` injects any machine description into the naturals;
`decode_machine` inverts it and rejects every non-code with an error
instead of guessing.  Pairing machine code with input number gives a
single natural that a universal runner consumes.

The runner is certified by comparison: for each corpus machine and a
range of inputs, running the machine directly and running its packed
code through the universal path must produce identical outcomes.  The
certificate is horizon-bounded and says so.
"""

from __future__ import annotations

from qtmlab import (
    NotAMachineCode,
    decode_machine,
    encode_machine,
    load_corpus_machine,
    pair_cantor,
    unpair_cantor,
    universality_check,
)
from qtmlab.corpus import WELL_FORMED_QTMS, corpus_files
from qtmlab.dsl import serialize_machine
from qtmlab.harness import apply_universal
from qtmlab.machines import tape_render


def main() -> None:
    m = load_corpus_machine("increment.tm")
    code = encode_machine(m)
    digits = str(code)
    print(f"`increment` encodes to a {len(digits)}-digit natural number:")
    print()
    print(f"  {digits[:60]}...{digits[-20:]}")
    print()

    recovered = decode_machine(code)
    print("Decoding gives back the identical description:")
    print(f"  round-trip equal: {serialize_machine(recovered) == serialize_machine(m)}")
    print()

    print("Most naturals are not codes, and decoding says so:")
    for n in (0, 7, 123456):
        try:
            decode_machine(n)
        except NotAMachineCode as exc:
            print(f"  {n}: {exc}")
    print()

    packed = pair_cantor(code, 5)
    print(f"Packing (code, input 5) with the pairing function: {str(packed)[:40]}...")
    back = unpair_cantor(packed)
    print(f"  unpacks to the same pair: {back == (code, 5)}")
    print()

    print("The universal runner on the packed number, against direct runs:")
    print()
    for n in range(4):
        outcome = apply_universal("tm", pair_cantor(code, n), horizon=12)
        offset, bits = tape_render(outcome.tape)
        print(
            f"  input {format(n, 'b') if n else '(blank)'}:"
            f" {outcome.status} after {outcome.steps} steps, tape {bits}"
        )
    print()

    print("Certification over the whole corpus, inputs 0..7, horizon 6:")
    print()
    for kind, suffix in (("tm", ".tm"), ("ptm", ".ptm"), ("qtm", ".qtm")):
        if kind == "qtm":
            files = [f"{name}.qtm" for name in WELL_FORMED_QTMS]
        else:
            files = [f for f in corpus_files() if f.endswith(suffix)]
        codes = [encode_machine(load_corpus_machine(f)) for f in files]
        report = universality_check(kind, codes, range(8), horizon=6)
        status = "agree" if report.passed else f"MISMATCH {report.mismatches}"
        print(f"  {kind}: {report.checked} machine/input pairs, {status}")
        print(f"       note: {report.note}")


if __name__ == "__main__":
    main()
