"""Machine descriptions, tapes, and configurations.

All three machine kinds share one rule-table shape.  A rule row maps a
source (state, read symbol) to a tuple of branches; a TM branch carries no
weight, a PTM branch carries a rational probability, and a QTM branch
carries a CycQ8 amplitude.  The halt flag of a configuration is never
written by a rule: it switches on exactly when the successor state is the
halting state, and stays on forever after.
"""

from __future__ import annotations

import re
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Union

from .errors import StructureError, ValidationError
from .exact import CYC_ONE, CycQ8

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "S", "R")
KINDS = ("tm", "ptm", "qtm")

MOVE_SHIFT = {"L": -1, "S": 0, "R": 1}
SYMBOL_ORDER = {"0": 0, "1": 1, BLANK: 2}
MOVE_ORDER = {"L": 0, "S": 1, "R": 2}

# default cap on distribution/superposition support before a resource error
DEFAULT_SUPPORT_BOUND = 10**6

_NAME_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_-]*\Z")

Weight = Union[None, Fraction, CycQ8]
Tape = tuple  # sorted ((position, symbol), ...) with no blank entries


class Branch(NamedTuple):
    write: str
    move: str
    next_state: int
    weight: Weight

    def sort_key(self):
        return (SYMBOL_ORDER[self.write], MOVE_ORDER[self.move], self.next_state)

    def triple(self):
        return (self.write, self.move, self.next_state)


class Config(NamedTuple):
    """One classical snapshot: halt flag, state, head position, tape."""

    h: int
    q: int
    x: int
    tape: Tape


@dataclass(frozen=True)
class MachineDesc:
    """A validated machine description.

    `states` lists state names in index order; index 0 is the initial
    state and `halt` is the index of the halting state.  `rules` holds
    canonically sorted rows ((state index, symbol), branches).
    """

    kind: str
    name: str
    states: tuple
    halt: int
    rules: tuple

    @cached_property
    def rule_map(self):
        return {source: branches for source, branches in self.rules}

    @cached_property
    def state_index(self):
        return {name: i for i, name in enumerate(self.states)}

    @property
    def initial(self) -> int:
        return 0

    def live_states(self):
        return tuple(i for i in range(len(self.states)) if i != self.halt)

    def state_name(self, i: int) -> str:
        return self.states[i]


def make_machine(kind, name, states, halt, rows) -> MachineDesc:
    """Build a MachineDesc from unsorted rows, canonicalize, and validate.

    `rows` is an iterable of ((state index, symbol), branches).  Branch
    weights may be given as int or Fraction and are coerced to the kind's
    weight type.  Raises StructureError on any structural defect.
    """
    states = tuple(states)
    prepared = []
    for source, branches in rows:
        coerced = tuple(
            Branch(b[0], b[1], b[2], _coerce_weight(kind, b[3] if len(b) > 3 else None))
            for b in branches
        )
        prepared.append((tuple(source), tuple(sorted(coerced, key=Branch.sort_key))))
    prepared.sort(key=lambda row: (row[0][0], SYMBOL_ORDER.get(row[0][1], 3)))
    m = MachineDesc(kind, name, states, halt, tuple(prepared))
    validate_machine(m)
    return m


def _coerce_weight(kind, w):
    if kind == "tm":
        if w is not None:
            raise StructureError("tm branches carry no weight")
        return None
    if kind == "ptm":
        if isinstance(w, int):
            w = Fraction(w)
        if not isinstance(w, Fraction):
            raise StructureError("ptm branch weight must be a rational probability")
        return w
    if isinstance(w, (int, Fraction)):
        w = CycQ8(w)
    if not isinstance(w, CycQ8):
        raise StructureError("qtm branch weight must be a CycQ8 amplitude")
    return w


def validate_machine(m: MachineDesc) -> None:
    """Check every structural invariant of a MachineDesc.

    Unitarity is deliberately out of scope here; see the well-formedness
    checkers for that.
    """
    if m.kind not in KINDS:
        raise StructureError(f"unknown machine kind {m.kind!r}")
    if not _NAME_RE.match(m.name or ""):
        raise StructureError(f"bad machine name {m.name!r}")
    if len(m.states) < 2:
        raise StructureError("a machine needs at least an initial and a halting state")
    if len(set(m.states)) != len(m.states):
        raise StructureError("duplicate state names")
    for s in m.states:
        if not _NAME_RE.match(s):
            raise StructureError(f"bad state name {s!r}")
    if not 0 <= m.halt < len(m.states):
        raise StructureError("halt index out of range")
    if m.halt == m.initial:
        raise StructureError("the initial state cannot be the halting state")

    seen = set()
    for source, branches in m.rules:
        q, sym = source
        where = f"rule {m.states[q] if 0 <= q < len(m.states) else q} {sym}"
        if not isinstance(q, int) or not 0 <= q < len(m.states):
            raise StructureError(f"{where}: undeclared source state")
        if q == m.halt:
            raise StructureError(f"{where}: the halting state has no outgoing rules")
        if sym not in SYMBOLS:
            raise StructureError(f"{where}: bad source symbol")
        if source in seen:
            raise StructureError(f"{where}: duplicate rule source")
        seen.add(source)
        if not branches:
            raise StructureError(f"{where}: empty branch list")
        if m.kind == "tm" and len(branches) != 1:
            raise StructureError(f"{where}: a tm rule has exactly one branch")
        triples = set()
        total = Fraction(0)
        for b in branches:
            if b.write not in SYMBOLS:
                raise StructureError(f"{where}: bad write symbol {b.write!r}")
            if b.move not in MOVES:
                raise StructureError(f"{where}: bad move {b.move!r}")
            if not 0 <= b.next_state < len(m.states):
                raise StructureError(f"{where}: undeclared target state")
            if b.triple() in triples:
                raise StructureError(f"{where}: duplicate (write, move, next) branch")
            triples.add(b.triple())
            if m.kind == "ptm":
                if not 0 < b.weight <= 1:
                    raise StructureError(f"{where}: probability {b.weight} outside (0, 1]")
                total += b.weight
            elif m.kind == "qtm":
                if b.weight.is_zero():
                    raise StructureError(f"{where}: zero amplitude branch")
        if m.kind == "ptm" and total != 1:
            raise StructureError(f"{where}: branch probabilities sum to {total}, expected 1")

    if m.kind == "qtm":
        for q in m.live_states():
            for sym in SYMBOLS:
                if (q, sym) not in m.rule_map:
                    raise StructureError(
                        f"qtm rule table not total: no rule for {m.states[q]} {sym}"
                    )


# --- tape helpers ---------------------------------------------------------

def tape_from_input(input_str: str) -> Tape:
    for ch in input_str:
        if ch not in ("0", "1"):
            raise ValidationError(f"input must be a bit string, got {input_str!r}")
    return tuple((i, ch) for i, ch in enumerate(input_str))


def tape_read(tape: Tape, pos: int) -> str:
    for p, sym in tape:
        if p == pos:
            return sym
        if p > pos:
            break
    return BLANK


def tape_write(tape: Tape, pos: int, sym: str) -> Tape:
    if tape_read(tape, pos) == sym:
        return tape
    entries = [e for e in tape if e[0] != pos]
    if sym != BLANK:
        insort(entries, (pos, sym))
    return tuple(entries)


def tape_render(tape: Tape):
    """Render as (offset, symbols): the written span with edge blanks gone.

    Interior gaps show as '_'.  The empty tape renders as (0, "").
    """
    if not tape:
        return (0, "")
    cells = dict(tape)
    lo = tape[0][0]
    hi = tape[-1][0]
    return (lo, "".join(cells.get(p, BLANK) for p in range(lo, hi + 1)))


def initial_config(m: MachineDesc, input_str: str) -> Config:
    return Config(0, m.initial, 0, tape_from_input(input_str))


# --- classical-to-quantum lifts -------------------------------------------

def tm_to_ptm(m: MachineDesc) -> MachineDesc:
    """Reread a deterministic table as probability-1 branches."""
    if m.kind != "tm":
        raise StructureError("tm_to_ptm expects a tm")
    rows = [
        (source, [(b.write, b.move, b.next_state, Fraction(1)) for b in branches])
        for source, branches in m.rules
    ]
    return make_machine("ptm", m.name, m.states, m.halt, rows)


def tm_to_qtm(m: MachineDesc) -> MachineDesc:
    """Reread a deterministic table as amplitude-1 branches.

    QTM tables must be total, so every source the TM leaves undefined
    (meaning: halt immediately) becomes an explicit halting branch that
    keeps the read symbol in place.
    """
    if m.kind != "tm":
        raise StructureError("tm_to_qtm expects a tm")
    rows = [
        (source, [(b.write, b.move, b.next_state, CYC_ONE) for b in branches])
        for source, branches in m.rules
    ]
    covered = {source for source, _ in m.rules}
    for q in m.live_states():
        for sym in SYMBOLS:
            if (q, sym) not in covered:
                rows.append(((q, sym), [(sym, "S", m.halt, CYC_ONE)]))
    return make_machine("qtm", m.name, m.states, m.halt, rows)
