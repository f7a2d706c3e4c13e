"""The bundled machine corpus.

Every file under corpus/ is stored in canonical serialization, so loading
and re-serializing a corpus machine is byte-stable.  `WELL_FORMED_QTMS`
lists the machines whose step operator is unitary; the two `bad-*` entries
deliberately violate one condition each and exist for the checker tests.
"""

from __future__ import annotations

import os
from importlib import resources

from .dsl import parse_machine
from .errors import ValidationError
from .machines import MachineDesc

DESCRIPTIONS = {
    "h1.qtm": "one Hadamard branch on blank input, halts in one step",
    "halfhalt.qtm": "halts with amplitude -1/2*r2 each cycle, runs on otherwise",
    "interference.qtm": "halted branches cancel against a late running branch",
    "coin2.qtm": "two Hadamard coins in sequence, four outputs at 1/4",
    "phase.qtm": "three-step halter that only shuffles global phase",
    "spinner.qtm": "moves right forever, never halts",
    "walk.qtm": "Hadamard walker over head positions, never halts",
    "increment.qtm": "unary increment embedded with amplitude-1 branches",
    "flipper.qtm": "bit flipper embedded with amplitude-1 branches",
    "donothing.qtm": "halts immediately on every symbol",
    "bad-norm.qtm": "violator: blank row has squared norm 1/2",
    "bad-orth.qtm": "violator: two rows share the target (qH, 0, S)",
    "increment.tm": "unary increment, appends a 1",
    "flipper.tm": "flips bits until the first blank",
    "donothing.tm": "no rules at all, halts at step 0",
    "oscillator.tm": "bounces between two states forever",
    "faircoin.ptm": "writes one fair random bit and halts",
    "twocoin.ptm": "writes two independent fair bits",
    "biased78.ptm": "writes 1 with probability 7/8",
    "biased34.ptm": "writes 1 with probability 3/4",
    "geometric.ptm": "halts at position k with probability 2^-(k+1)",
}

WELL_FORMED_QTMS = (
    "h1",
    "halfhalt",
    "interference",
    "coin2",
    "phase",
    "spinner",
    "walk",
    "increment",
    "flipper",
    "donothing",
)

VIOLATOR_QTMS = ("bad-norm", "bad-orth")


def corpus_files():
    return tuple(sorted(DESCRIPTIONS))


def load_corpus_text(filename: str) -> str:
    if filename not in DESCRIPTIONS:
        raise ValidationError(f"no bundled machine {filename!r}")
    return (
        resources.files(__package__).joinpath("corpus", filename).read_text("utf-8")
    )


def load_corpus_machine(filename: str) -> MachineDesc:
    return parse_machine(load_corpus_text(filename))


def resolve_machine_text(spec: str) -> str:
    """Machine text for a CLI argument: a path, or a bundled file name."""
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return fh.read()
    base = os.path.basename(spec)
    if base in DESCRIPTIONS:
        return load_corpus_text(base)
    for ext in (".qtm", ".ptm", ".tm"):
        if base + ext in DESCRIPTIONS:
            return load_corpus_text(base + ext)
    raise ValidationError(f"no such file or bundled machine: {spec!r}")
