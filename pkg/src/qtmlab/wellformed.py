"""Well-formedness checks for quantum machine rule tables.

Two independent routes decide whether a rule table generates a
norm-preserving step:

* `check_wellformed_local` evaluates four closed-form conditions on the
  table itself (row norms and three orthogonality families between rows
  whose head positions can collide after one step).
* `check_unitary_window` builds the full step matrix on a small cyclic
  tape and tests its Gram matrix against the identity by brute force.

Both are exact.  They are kept separate so that each can serve as an
oracle for the other in tests; nothing here calls the step engine.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import NamedTuple

from .errors import NotWellFormed, ResourceLimitError, StructureError, ValidationError
from .exact import R2_ONE, R2_ZERO
from .machines import MOVE_SHIFT, SYMBOLS, MachineDesc

WELL_FORMED = "WELL_FORMED"
VIOLATION = "VIOLATION"

DEFAULT_STATE_CAP = 100_000


class Violation(NamedTuple):
    """One failed condition with a human-readable witness.

    `residual` is the exact offending value: the deviation of a row norm
    from 1 for C1, or a nonzero inner-product sum for C2 to C4.
    """

    condition: str
    witness: tuple
    residual: object


class WellFormedReport(NamedTuple):
    verdict: str
    violations: tuple

    @property
    def is_well_formed(self) -> bool:
        return self.verdict == WELL_FORMED


def _expect_qtm(m: MachineDesc) -> None:
    if m.kind != "qtm":
        raise StructureError(f"expected a qtm, got kind {m.kind!r}")


def _require_total(m: MachineDesc) -> None:
    for q in m.live_states():
        for s in SYMBOLS:
            if (q, s) not in m.rule_map:
                raise StructureError(
                    f"rule table is not total: no rule for ({m.state_name(q)}, {s})"
                )


def _src_label(m: MachineDesc, source) -> str:
    q, s = source
    return f"({m.state_name(q)}, {s})"


def _check_row_norms(m, violations):
    for source, branches in m.rules:
        n = R2_ZERO
        for b in branches:
            n = n + b.weight.norm_sq()
        if n != R2_ONE:
            violations.append(Violation("C1", (_src_label(m, source),), abs(n - 1)))


def _check_row_orthogonality(m, violations):
    # Distinct sources at the same head position collide exactly on
    # shared (write, move, next) triples.
    rows = m.rules
    for i in range(len(rows)):
        src1, bs1 = rows[i]
        index1 = {b.triple(): b.weight for b in bs1}
        for j in range(i + 1, len(rows)):
            src2, bs2 = rows[j]
            total = None
            for b in bs2:
                w1 = index1.get(b.triple())
                if w1 is None:
                    continue
                term = w1.conj() * b.weight
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                violations.append(
                    Violation(
                        "C2", (_src_label(m, src1), _src_label(m, src2)), total
                    )
                )


def _check_offset_orthogonality(m, condition, move_pairs, violations):
    # Sources one cell apart (C3) or two cells apart (C4), left row
    # first.  A branch pair can only merge targets when the left write
    # matches what the right source reads off-head and vice versa, so
    # the sums must vanish separately per (left write, right write).
    for src1, bs1 in m.rules:
        for src2, bs2 in m.rules:
            buckets = {}
            for b1 in bs1:
                for b2 in bs2:
                    if b1.next_state != b2.next_state:
                        continue
                    if (b1.move, b2.move) not in move_pairs:
                        continue
                    key = (b1.write, b2.write)
                    term = b1.weight.conj() * b2.weight
                    prev = buckets.get(key)
                    buckets[key] = term if prev is None else prev + term
            for (w1, w2), total in sorted(buckets.items()):
                if not total.is_zero():
                    violations.append(
                        Violation(
                            condition,
                            (
                                _src_label(m, src1),
                                _src_label(m, src2),
                                f"writes {w1} {w2}",
                            ),
                            total,
                        )
                    )


@lru_cache(maxsize=256)
def check_wellformed_local(m: MachineDesc) -> WellFormedReport:
    """Decide well-formedness from the rule table alone.

    Returns a report whose verdict is WELL_FORMED or VIOLATION; each
    violation names the condition (C1 row norms, C2 same-cell
    orthogonality, C3 one-cell overlap, C4 two-cell overlap), the
    offending sources and the exact residual.
    """
    _expect_qtm(m)
    _require_total(m)
    violations = []
    _check_row_norms(m, violations)
    _check_row_orthogonality(m, violations)
    _check_offset_orthogonality(m, "C3", (("R", "S"), ("S", "L")), violations)
    _check_offset_orthogonality(m, "C4", (("R", "L"),), violations)
    verdict = WELL_FORMED if not violations else VIOLATION
    return WellFormedReport(verdict, tuple(violations))


def require_wellformed(m: MachineDesc) -> None:
    """Raise NotWellFormed unless `m` passes the local conditions."""
    report = check_wellformed_local(m)
    if report.is_well_formed:
        return
    first = report.violations[0]
    raise NotWellFormed(
        f"machine {m.name!r} is not well-formed: {first.condition} fails at "
        f"{' vs '.join(first.witness)} with residual {first.residual}"
    )


def check_unitary_window(
    m: MachineDesc, tape_len: int, state_cap: int = DEFAULT_STATE_CAP
) -> bool:
    """Brute-force unitarity of the step on a cyclic tape of `tape_len` cells.

    Columns are the live configurations (state, head, tape contents);
    the head wraps modulo `tape_len`.  Returns True iff the Gram matrix
    of the expanded columns is exactly the identity.
    """
    _expect_qtm(m)
    _require_total(m)
    if not isinstance(tape_len, int) or isinstance(tape_len, bool):
        raise ValidationError("tape_len must be an integer")
    if not 2 <= tape_len <= 8:
        raise ValidationError(f"tape_len must be between 2 and 8, got {tape_len}")
    live = m.live_states()
    n_cols = len(live) * tape_len * len(SYMBOLS) ** tape_len
    if n_cols > state_cap:
        raise ResourceLimitError(
            f"window has {n_cols} columns, exceeding the cap of {state_cap}"
        )

    # target config -> [(column id, accumulated amplitude)]
    hits = {}
    col = 0
    for q in live:
        for x in range(tape_len):
            for tape in product(SYMBOLS, repeat=tape_len):
                # wrapping can merge two branches of one column (equal
                # write and next state, moves L and R, tape_len 2), so
                # accumulate the column vector before anything else
                column = {}
                for b in m.rule_map[(q, tape[x])]:
                    written = tape[:x] + (b.write,) + tape[x + 1 :]
                    nx = (x + MOVE_SHIFT[b.move]) % tape_len
                    h2 = 1 if b.next_state == m.halt else 0
                    target = (h2, b.next_state, nx, written)
                    prev = column.get(target)
                    column[target] = b.weight if prev is None else prev + b.weight
                norm = R2_ZERO
                for target, amp in column.items():
                    if amp.is_zero():
                        continue
                    norm = norm + amp.norm_sq()
                    hits.setdefault(target, []).append((col, amp))
                if norm != R2_ONE:
                    return False
                col += 1

    # Off-diagonal Gram entries sum over every shared target; single
    # contributions may cancel, so accumulate before testing for zero.
    off = {}
    for entries in hits.values():
        if len(entries) < 2:
            continue
        for i, (c1, a1) in enumerate(entries):
            for c2, a2 in entries[i + 1 :]:
                if c1 < c2:
                    key, term = (c1, c2), a1.conj() * a2
                else:
                    key, term = (c2, c1), a2.conj() * a1
                prev = off.get(key)
                off[key] = term if prev is None else prev + term
    return all(total.is_zero() for total in off.values())
