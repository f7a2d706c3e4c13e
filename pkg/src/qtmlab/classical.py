"""Deterministic and probabilistic execution engines.

Both engines share the halting convention of the machine model: a source
with no rule row halts on the spot without consuming a step, and mass that
has reached the halting state is absorbed, never evolved further.
Probabilities stay exact rationals throughout; the only approximation in
this module is the Monte Carlo sampler, and even that draws from the exact
branch distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from random import Random
from typing import NamedTuple

from .errors import (
    InvariantError,
    ResourceLimitError,
    StructureError,
    ValidationError,
)
from .machines import (
    DEFAULT_SUPPORT_BOUND,
    MOVE_SHIFT,
    MachineDesc,
    Tape,
    tape_from_input,
    tape_read,
    tape_render,
    tape_write,
)

HALTED = "HALTED"
RUNNING = "RUNNING"


class ClassicalOutcome(NamedTuple):
    status: str
    tape: Tape
    steps: int


@dataclass(frozen=True)
class ClassicalDist:
    """Exact distribution over (status, tape) after `horizon` steps."""

    events: dict
    horizon: int

    def halted_mass(self) -> Fraction:
        return sum(
            (p for (status, _), p in self.events.items() if status == HALTED),
            Fraction(0),
        )


def tm_run(m: MachineDesc, input_str: str, max_steps: int) -> ClassicalOutcome:
    """Run a deterministic machine for at most max_steps rule applications."""
    _expect_kind(m, "tm")
    _expect_nat(max_steps, "max_steps")
    tape = tape_from_input(input_str)
    q, x, steps = m.initial, 0, 0
    while True:
        if q == m.halt:
            return ClassicalOutcome(HALTED, tape, steps)
        row = m.rule_map.get((q, tape_read(tape, x)))
        if row is None:
            q = m.halt
            continue
        if steps == max_steps:
            return ClassicalOutcome(RUNNING, tape, steps)
        b = row[0]
        tape = tape_write(tape, x, b.write)
        x += MOVE_SHIFT[b.move]
        q = b.next_state
        steps += 1


def ptm_evolve_exact(
    m: MachineDesc,
    input_str: str,
    horizon: int,
    max_support: int = DEFAULT_SUPPORT_BOUND,
) -> ClassicalDist:
    """Breadth-first exact evolution of the configuration distribution."""
    _expect_kind(m, "ptm")
    _expect_nat(horizon, "horizon")
    halted: dict = {}
    live = {(m.initial, 0, tape_from_input(input_str)): Fraction(1)}
    live = _absorb(m, live, halted)
    for _ in range(horizon):
        if not live:
            break
        nxt: dict = {}
        for (q, x, tape), p in live.items():
            for b in m.rule_map[(q, tape_read(tape, x))]:
                key = (
                    b.next_state,
                    x + MOVE_SHIFT[b.move],
                    tape_write(tape, x, b.write),
                )
                nxt[key] = nxt.get(key, Fraction(0)) + p * b.weight
        live = _absorb(m, nxt, halted)
        if len(live) + len(halted) > max_support:
            raise ResourceLimitError(
                f"distribution support exceeded the bound of {max_support} configurations"
            )

    events: dict = {}
    for tape, p in halted.items():
        events[(HALTED, tape)] = p
    for (q, x, tape), p in live.items():
        key = (RUNNING, tape)
        events[key] = events.get(key, Fraction(0)) + p
    total = sum(events.values(), Fraction(0))
    if total != 1:
        raise InvariantError(f"probability mass {total} != 1 after evolution")
    return ClassicalDist(events, horizon)


def _absorb(m, live, halted):
    """Move halting-state mass and rule-less mass into the halted pool."""
    keep = {}
    for cfg, p in live.items():
        q, x, tape = cfg
        if q == m.halt or (q, tape_read(tape, x)) not in m.rule_map:
            halted[tape] = halted.get(tape, Fraction(0)) + p
        else:
            keep[cfg] = p
    return keep


def ptm_decide(
    m: MachineDesc,
    input_str: str,
    horizon: int,
    threshold: Fraction = Fraction(3, 4),
    max_support: int = DEFAULT_SUPPORT_BOUND,
):
    """The threshold decision rule: the output string whose halted mass
    strictly exceeds `threshold` within the horizon, or None.

    Requires threshold > 1/2, which is what makes the qualifying output
    unique.  Outputs are compared as rendered tape strings.
    """
    threshold = Fraction(threshold)
    if threshold <= Fraction(1, 2):
        raise ValidationError(
            f"threshold must exceed 1/2, got {threshold} (two outputs could qualify)"
        )
    dist = ptm_evolve_exact(m, input_str, horizon, max_support)
    by_output: dict = {}
    for (status, tape), p in dist.events.items():
        if status == HALTED:
            bits = tape_render(tape)[1]
            by_output[bits] = by_output.get(bits, Fraction(0)) + p
    for y, p in sorted(by_output.items()):
        if p > threshold:
            return y
    return None


def ptm_sample(
    m: MachineDesc, input_str: str, max_steps: int, seed: int
) -> ClassicalOutcome:
    """One trajectory under Python's Mersenne Twister seeded with `seed`.

    Branch choice draws an integer below the common denominator of the
    row's probabilities, so the sampled distribution is the exact one.
    """
    _expect_kind(m, "ptm")
    _expect_nat(max_steps, "max_steps")
    rng = Random(seed)
    tape = tape_from_input(input_str)
    q, x, steps = m.initial, 0, 0
    while True:
        if q == m.halt:
            return ClassicalOutcome(HALTED, tape, steps)
        row = m.rule_map.get((q, tape_read(tape, x)))
        if row is None:
            q = m.halt
            continue
        if steps == max_steps:
            return ClassicalOutcome(RUNNING, tape, steps)
        b = _draw(rng, row)
        tape = tape_write(tape, x, b.write)
        x += MOVE_SHIFT[b.move]
        q = b.next_state
        steps += 1


def _draw(rng, row):
    denom = lcm(*(b.weight.denominator for b in row))
    r = rng.randrange(denom)
    acc = 0
    for b in row:
        acc += b.weight.numerator * (denom // b.weight.denominator)
        if r < acc:
            return b
    raise InvariantError("branch probabilities do not cover the unit draw")


def _expect_kind(m, kind):
    if m.kind != kind:
        raise StructureError(f"expected a {kind} machine, got {m.kind} {m.name!r}")


def _expect_nat(v, what):
    if not isinstance(v, int) or v < 0:
        raise ValidationError(f"{what} must be a nonnegative integer, got {v!r}")
