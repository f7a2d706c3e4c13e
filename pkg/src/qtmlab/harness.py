"""Universality checks, distribution accuracy, and the hybrid-device driver.

The hybrid driver (`suhd_run`) realizes the simulate / signal / observe
/ reset loop: each outer iteration evolves the quantum part S = T steps,
signals, optionally measures the halt bit, then attempts a reset with S
applications of `step_inverse` and records the exact fidelity against
the original state.  The engine is an exact simulator, so the slowdown
is 1 and the per-iteration accuracy budget epsilon/T is carried through
the records purely for bookkeeping; the simulation error is 0.

Reset means inverse evolution, never state reload: reloading a stored
copy is exactly what no-cloning forbids, and the point of the records
is to show where inverse evolution stops being a true reset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .classical import HALTED, RUNNING, ClassicalDist, ClassicalOutcome, ptm_evolve_exact, tm_run
from .coding import decode_machine, pair_cantor, unpair_cantor
from .errors import ResourceLimitError, StructureError, ValidationError
from .exact import R2_ONE, R2_ZERO, RealQ2
from .machines import DEFAULT_SUPPORT_BOUND, MachineDesc, tape_render
from .quantum import (
    OutcomeDist,
    fidelity,
    initial_superposition,
    measure_halt,
    read_output_distribution,
    run,
    step,
    step_inverse,
)
from .wellformed import require_wellformed


def _to_exact(value) -> RealQ2:
    if isinstance(value, RealQ2):
        return value
    if isinstance(value, bool):
        raise ValidationError("probabilities must be rational or RealQ2 values")
    if isinstance(value, (int, Fraction)):
        return RealQ2.from_rat(value)
    raise ValidationError(f"cannot treat {value!r} as an exact probability")


def _checked_distribution(dist, label: str) -> dict:
    out = {}
    total = R2_ZERO
    for key, value in dist.items():
        p = _to_exact(value)
        if p.sign() < 0:
            raise ValidationError(f"{label} has a negative probability at {key!r}")
        out[key] = p
        total = total + p
    if total != R2_ONE:
        raise ValidationError(f"{label} sums to {total}, not 1")
    return out


def tv_distance(P, Q) -> RealQ2:
    """Total variation distance, half the L1 gap over the union of supports."""
    p = _checked_distribution(P, "first distribution")
    q = _checked_distribution(Q, "second distribution")
    acc = R2_ZERO
    for key in p.keys() | q.keys():
        acc = acc + abs(p.get(key, R2_ZERO) - q.get(key, R2_ZERO))
    return acc * Fraction(1, 2)


def distributions_equal(P, Q) -> bool:
    """Exact equality of two finite distributions over the union of keys."""
    p = _checked_distribution(P, "first distribution")
    q = _checked_distribution(Q, "second distribution")
    return all(p.get(k, R2_ZERO) == q.get(k, R2_ZERO) for k in p.keys() | q.keys())


@dataclass(frozen=True)
class SimAccuracyReport:
    tv: RealQ2
    epsilon: Fraction
    within_budget: bool


def accuracy_report(P, Q, epsilon) -> SimAccuracyReport:
    if not isinstance(epsilon, (int, Fraction)) or isinstance(epsilon, bool):
        raise ValidationError("epsilon must be a rational number")
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValidationError("epsilon must be nonnegative")
    tv = tv_distance(P, Q)
    return SimAccuracyReport(tv, epsilon, tv <= epsilon)


RUNNING_KEY = (RUNNING,)


def outcome_marginal(outcome) -> dict:
    """Project any engine outcome onto a common key space.

    Halted mass appears under (HALTED, (offset, bits)); everything still
    running is pooled under a single (RUNNING,) key, since the quantum
    residual carries no per-tape breakdown.
    """
    if isinstance(outcome, ClassicalOutcome):
        if outcome.status == HALTED:
            return {(HALTED, tape_render(outcome.tape)): Fraction(1)}
        return {RUNNING_KEY: Fraction(1)}
    if isinstance(outcome, ClassicalDist):
        out: dict = {}
        for (status, tape), p in outcome.events.items():
            key = (HALTED, tape_render(tape)) if status == HALTED else RUNNING_KEY
            out[key] = out.get(key, Fraction(0)) + p
        return out
    if isinstance(outcome, OutcomeDist):
        out = {}
        for (_, rendered), mass in outcome.events.items():
            key = (HALTED, rendered)
            prev = out.get(key)
            out[key] = mass if prev is None else prev + mass
        if not outcome.residual_running.is_zero():
            out[RUNNING_KEY] = outcome.residual_running
        return out
    raise StructureError(f"no marginal defined for {type(outcome).__name__}")


def _nat_to_input(m: int) -> str:
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ValidationError(f"input number must be a natural, got {m!r}")
    return "" if m == 0 else format(m, "b")


def _dispatch(machine: MachineDesc, input_str: str, horizon: int, max_support: int):
    if machine.kind == "tm":
        return tm_run(machine, input_str, horizon)
    if machine.kind == "ptm":
        return ptm_evolve_exact(machine, input_str, horizon, max_support=max_support)
    return run(
        machine,
        input_str,
        range(1, horizon + 1),
        horizon,
        max_support=max_support,
    )


def apply_universal(
    kind: str, code: int, horizon: int, max_support: int = DEFAULT_SUPPORT_BOUND
):
    """Run the machine-and-input pair packed into `code`.

    `code` unpairs into (n, m); n decodes to a machine of the expected
    kind and m renders to its binary input.  The simulator itself plays
    the universal machine, so the outcome is whatever the matching
    engine returns.
    """
    n, m = unpair_cantor(code)
    machine = decode_machine(n)
    if machine.kind != kind:
        raise StructureError(
            f"code describes a {machine.kind}, expected a {kind}"
        )
    return _dispatch(machine, _nat_to_input(m), horizon, max_support)


def _same_outcome(kind: str, direct, universal) -> bool:
    if kind == "tm":
        return direct == universal
    if kind == "ptm":
        return distributions_equal(direct.events, universal.events)
    direct_events = dict(direct.events)
    direct_events[RUNNING_KEY] = direct.residual_running
    universal_events = dict(universal.events)
    universal_events[RUNNING_KEY] = universal.residual_running
    return distributions_equal(direct_events, universal_events)


@dataclass(frozen=True)
class UniversalityReport:
    kind: str
    horizon: int
    checked: int
    mismatches: tuple
    note: str

    @property
    def passed(self) -> bool:
        return not self.mismatches


def universality_check(
    kind: str,
    machine_family,
    inputs,
    horizon: int,
    apply_fn: Callable = apply_universal,
    max_support: int = DEFAULT_SUPPORT_BOUND,
) -> UniversalityReport:
    """Certify apply-through-code against direct execution.

    Agreement is horizon-bounded: equal behaviour within `horizon` steps
    says nothing about longer runs, and the report's note records that
    limitation instead of claiming extensional equality.
    """
    mismatches = []
    checked = 0
    for code in machine_family:
        machine = decode_machine(code)
        if machine.kind != kind:
            raise StructureError(
                f"family code describes a {machine.kind}, expected a {kind}"
            )
        if machine.kind == "qtm":
            require_wellformed(machine)
        for m in inputs:
            direct = _dispatch(machine, _nat_to_input(m), horizon, max_support)
            universal = apply_fn(kind, pair_cantor(code, m), horizon)
            checked += 1
            if not _same_outcome(kind, direct, universal):
                mismatches.append((machine.name, code, m))
    return UniversalityReport(
        kind,
        horizon,
        checked,
        tuple(mismatches),
        f"agreement certified within horizon {horizon} only",
    )


@dataclass(frozen=True)
class ObservationPolicy:
    """When the operator looks at the halt bit.

    NEVER and ALWAYS are self-describing; AT observes at the listed
    outer iterations; INTERACTIVE defers to a callback per signal.
    """

    kind: str
    iterations: tuple = ()
    decide: Callable | None = None

    NEVER = "never"
    ALWAYS = "always"
    AT = "at"
    INTERACTIVE = "interactive"

    @classmethod
    def never(cls) -> "ObservationPolicy":
        return cls(cls.NEVER)

    @classmethod
    def always(cls) -> "ObservationPolicy":
        return cls(cls.ALWAYS)

    @classmethod
    def at_iterations(cls, iterations) -> "ObservationPolicy":
        its = tuple(iterations)
        for t in its:
            if not isinstance(t, int) or isinstance(t, bool) or t < 1:
                raise ValidationError(f"iteration {t!r} is not a positive integer")
        if any(a >= b for a, b in zip(its, its[1:])):
            raise ValidationError("iterations must be strictly increasing")
        return cls(cls.AT, its)

    @classmethod
    def interactive(cls, decide: Callable) -> "ObservationPolicy":
        if not callable(decide):
            raise ValidationError("interactive policy needs a decision callback")
        return cls(cls.INTERACTIVE, (), decide)

    def observes(self, outer_T: int, halt_prob) -> bool:
        if self.kind == self.NEVER:
            return False
        if self.kind == self.ALWAYS:
            return True
        if self.kind == self.AT:
            return outer_T in self.iterations
        return bool(self.decide(outer_T, halt_prob))


class SuhdIterationRecord(NamedTuple):
    outer_T: int
    steps_executed: int
    observed: bool
    halt_prob_at_signal: RealQ2
    reset_fidelity: RealQ2
    state_restored: bool
    accuracy_budget: Fraction
    halted_read: dict | None


def _evolve(m, psi, steps, operator, max_support):
    for _ in range(steps):
        psi = operator(m, psi)
        if len(psi) > max_support:
            raise ResourceLimitError(
                f"support {len(psi)} exceeds the bound of {max_support}"
            )
    return psi


def suhd_run(
    mbar: int,
    input_str: str,
    epsilon,
    policy: ObservationPolicy,
    max_outer_T: int,
    max_support: int = DEFAULT_SUPPORT_BOUND,
):
    """Drive the simulate/signal/observe/reset loop on machine code `mbar`.

    Returns one record per outer iteration.  The state carried between
    iterations is whatever the reset produced, so a disturbed reset
    contaminates everything after it.
    """
    machine = decode_machine(mbar)
    if machine.kind != "qtm":
        raise StructureError(f"hybrid device needs a qtm, got {machine.kind}")
    require_wellformed(machine)
    if not isinstance(epsilon, (int, Fraction)) or isinstance(epsilon, bool):
        raise ValidationError("epsilon must be a rational number")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValidationError("epsilon must lie in (0, 1]")
    if not isinstance(max_outer_T, int) or isinstance(max_outer_T, bool) or max_outer_T < 1:
        raise ValidationError("max_outer_T must be a positive integer")
    if not isinstance(policy, ObservationPolicy):
        raise ValidationError("policy must be an ObservationPolicy")

    psi0 = initial_superposition(machine, input_str)
    state = psi0
    records = []
    for outer_T in range(1, max_outer_T + 1):
        steps_executed = outer_T
        budget = epsilon / outer_T
        current = _evolve(machine, state, steps_executed, step, max_support)
        p1, halted, running = measure_halt(current)
        observed = policy.observes(outer_T, p1)
        halted_read = None
        if observed:
            if p1 == R2_ONE:
                # projection onto h=1 keeps the whole state
                halted_read = read_output_distribution(halted)
            elif p1.sign() > 0:
                halted_read = read_output_distribution(halted)
                current = running
            # p1 = 0: projection onto h=0 is the identity
        reset = _evolve(machine, current, steps_executed, step_inverse, max_support)
        fid = fidelity(reset, psi0)
        records.append(
            SuhdIterationRecord(
                outer_T,
                steps_executed,
                observed,
                p1,
                fid,
                fid == R2_ONE,
                budget,
                halted_read,
            )
        )
        state = reset
    return tuple(records)


CONJECTURE_HEADER = (
    "Empirical evidence at desk scale: exact fidelities under each "
    "observation policy. This tabulation supports, but does not prove, "
    "the reversibility conjecture."
)


@dataclass(frozen=True)
class ConjectureEntry:
    machine: str
    never_policy_reversible: bool
    eligible_signals: tuple
    irreversible_under_observation: bool
    witness_outer_T: int | None


@dataclass(frozen=True)
class ConjectureReport:
    header: str
    epsilon: Fraction
    max_outer_T: int
    entries: tuple


def conjecture_report(corpus, epsilon, max_outer_T: int) -> ConjectureReport:
    """Tabulate reversibility evidence over machine codes in `corpus`.

    A signal is eligible when its exact halt probability lies strictly
    between 0 and 1; for the first such signal the machine is re-run
    with an observation there, and the entry records whether the reset
    fidelity dropped below 1 from that iteration on.
    """
    entries = []
    for code in corpus:
        machine = decode_machine(code)
        never_records = suhd_run(
            code, "", epsilon, ObservationPolicy.never(), max_outer_T
        )
        eligible = tuple(
            r.outer_T
            for r in never_records
            if r.halt_prob_at_signal.sign() > 0 and r.halt_prob_at_signal != R2_ONE
        )
        witness = eligible[0] if eligible else None
        irreversible = False
        if witness is not None:
            observed_records = suhd_run(
                code,
                "",
                epsilon,
                ObservationPolicy.at_iterations([witness]),
                max_outer_T,
            )
            irreversible = all(
                not r.state_restored for r in observed_records[witness - 1 :]
            )
        entries.append(
            ConjectureEntry(
                machine.name,
                all(r.state_restored for r in never_records),
                eligible,
                irreversible,
                witness,
            )
        )
    return ConjectureReport(CONJECTURE_HEADER, Fraction(epsilon), max_outer_T, tuple(entries))
