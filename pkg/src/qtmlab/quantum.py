"""Exact sparse evolution of quantum machine superpositions.

A superposition is a finite map from configurations to amplitudes in
Q(zeta_8).  The step operator freezes halted terms: a configuration
with h=1 is carried through unchanged, and a live configuration expands
through its rule row, raising h on every branch that enters the halting
state.  Freezing makes partial halting observable mid-run but costs
injectivity, so the inverse is not a matrix adjoint.  `step_inverse`
instead pulls each term back through the conjugated rules that could
have produced it and keeps the term unchanged when no rule could have;
on the image of a live superposition of a well-formed machine this
undoes `step` exactly, which is all reversibility of the evolution
itself promises.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

from .errors import (
    InvariantError,
    ResourceLimitError,
    StructureError,
    ValidationError,
)
from .exact import CYC_ONE, R2_ONE, R2_ZERO, CycQ8, RealQ2
from .machines import (
    DEFAULT_SUPPORT_BOUND,
    MOVE_SHIFT,
    Config,
    MachineDesc,
    initial_config,
    tape_read,
    tape_render,
    tape_write,
)
from .wellformed import require_wellformed


class Superposition:
    """Immutable finite superposition with exact amplitudes.

    Zero-amplitude entries are dropped on construction, so support size
    and equality are canonical.  The squared norm is computed lazily and
    cached; instances are treated as values and never mutated.
    """

    __slots__ = ("_terms", "_norm_sq")

    def __init__(self, terms) -> None:
        self._terms = {c: a for c, a in terms.items() if not a.is_zero()}
        self._norm_sq = None

    @classmethod
    def point(cls, config: Config, amp: CycQ8 = CYC_ONE) -> "Superposition":
        return cls({config: amp})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def amplitude(self, config: Config) -> CycQ8:
        return self._terms.get(config, CycQ8(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __contains__(self, config) -> bool:
        return config in self._terms

    def __eq__(self, other):
        if not isinstance(other, Superposition):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def norm_sq(self) -> RealQ2:
        if self._norm_sq is None:
            total = R2_ZERO
            for a in self._terms.values():
                total = total + a.norm_sq()
            self._norm_sq = total
        return self._norm_sq

    def inner(self, other: "Superposition") -> CycQ8:
        """Hermitian inner product, conjugate-linear in `self`."""
        a, b = self._terms, other._terms
        if len(b) < len(a):
            total = CycQ8(0)
            for c, amp in b.items():
                mine = a.get(c)
                if mine is not None:
                    total = total + mine.conj() * amp
            return total
        total = CycQ8(0)
        for c, amp in a.items():
            theirs = b.get(c)
            if theirs is not None:
                total = total + amp.conj() * theirs
        return total

    def __repr__(self) -> str:
        return f"Superposition({len(self._terms)} terms, norm_sq={self.norm_sq()})"


def initial_superposition(m: MachineDesc, input_str: str) -> Superposition:
    return Superposition.point(initial_config(m, input_str))


def _expect_qtm(m: MachineDesc) -> None:
    if m.kind != "qtm":
        raise StructureError(f"expected a qtm, got kind {m.kind!r}")


@lru_cache(maxsize=256)
def _forward_index(m: MachineDesc):
    # (state, symbol) -> ((halt flag, next state, head shift, write, weight), ...)
    halt = m.halt
    return {
        source: tuple(
            (1 if b.next_state == halt else 0, b.next_state, MOVE_SHIFT[b.move], b.write, b.weight)
            for b in branches
        )
        for source, branches in m.rules
    }


def step(m: MachineDesc, psi: Superposition) -> Superposition:
    """Apply one step of `m`, freezing halted terms in place."""
    _expect_qtm(m)
    rows = _forward_index(m)
    acc = {}
    for cfg, amp in psi.terms.items():
        if cfg.h:
            prev = acc.get(cfg)
            acc[cfg] = amp if prev is None else prev + amp
            continue
        read = tape_read(cfg.tape, cfg.x)
        row = rows.get((cfg.q, read))
        if row is None:
            raise StructureError(f"no rule for ({m.state_name(cfg.q)}, {read})")
        for h2, nq, shift, write, weight in row:
            target = Config(h2, nq, cfg.x + shift, tape_write(cfg.tape, cfg.x, write))
            term = amp * weight
            prev = acc.get(target)
            acc[target] = term if prev is None else prev + term
    return Superposition(acc)


@lru_cache(maxsize=256)
def _reverse_index(m: MachineDesc):
    # next state -> branches that enter it, with conjugated amplitudes
    rev = {}
    for (src_q, src_sym), branches in m.rules:
        for b in branches:
            rev.setdefault(b.next_state, []).append(
                (src_q, src_sym, b.write, MOVE_SHIFT[b.move], b.weight.conj())
            )
    return {q: tuple(entries) for q, entries in rev.items()}


def step_inverse(m: MachineDesc, psi: Superposition) -> Superposition:
    """Undo one `step` on the image of a live superposition.

    Each term is pulled back through every conjugated rule branch that
    could have produced it: the branch must enter the term's state with
    the halt flag the step would have set, and its write must match the
    tape cell the head came from.  Terms no branch explains are kept
    unchanged, mirroring how `step` carries frozen terms.  Requires a
    well-formed machine; on anything else the pullback has no inverse
    meaning.
    """
    _expect_qtm(m)
    require_wellformed(m)
    rev = _reverse_index(m)
    halt = m.halt
    acc = {}
    for cfg, amp in psi.terms.items():
        matched = False
        if (cfg.h == 1) == (cfg.q == halt):
            for src_q, src_sym, write, shift, conj_amp in rev.get(cfg.q, ()):
                came_from = cfg.x - shift
                if tape_read(cfg.tape, came_from) != write:
                    continue
                matched = True
                source = Config(
                    0, src_q, came_from, tape_write(cfg.tape, came_from, src_sym)
                )
                term = conj_amp * amp
                prev = acc.get(source)
                acc[source] = term if prev is None else prev + term
        if not matched:
            prev = acc.get(cfg)
            acc[cfg] = amp if prev is None else prev + amp
    return Superposition(acc)


def measure_halt(psi: Superposition):
    """Split `psi` by the halt flag.

    Returns (p1, halted part, running part) where p1 is the exact
    probability of seeing the halt flag set and both parts keep their
    unnormalized amplitudes.
    """
    if not psi:
        raise StructureError("cannot measure an empty superposition")
    halted = {}
    running = {}
    for cfg, amp in psi.terms.items():
        (halted if cfg.h else running)[cfg] = amp
    halted_part = Superposition(halted)
    running_part = Superposition(running)
    p1 = halted_part.norm_sq() / psi.norm_sq()
    return p1, halted_part, running_part


def read_output_distribution(halted_part: Superposition):
    """Distribution over rendered tapes of a halted superposition.

    Keys are (offset, contents) pairs as produced by `tape_render`;
    values are exact probabilities normalized over the part's own mass.
    """
    if not halted_part:
        raise StructureError("cannot read an empty halted part")
    for cfg in halted_part:
        if not cfg.h:
            raise ValidationError("output read requires every term halted")
    total = halted_part.norm_sq()
    out = {}
    for cfg, amp in halted_part.terms.items():
        key = tape_render(cfg.tape)
        mass = amp.norm_sq()
        prev = out.get(key)
        out[key] = mass if prev is None else prev + mass
    return {key: mass / total for key, mass in out.items()}


def check_schedule(schedule, horizon: int):
    """Validate and normalize a measurement schedule.

    Steps must be strictly increasing nonnegative integers, none past
    `horizon`.  Returns them as a tuple.
    """
    steps = tuple(schedule)
    for t in steps:
        if not isinstance(t, int) or isinstance(t, bool) or t < 0:
            raise ValidationError(f"schedule step {t!r} is not a nonnegative integer")
        if t > horizon:
            raise ValidationError(f"schedule step {t} is past the horizon {horizon}")
    for a, b in zip(steps, steps[1:]):
        if a >= b:
            raise ValidationError("schedule steps must be strictly increasing")
    return steps


@dataclass(frozen=True)
class OutcomeDist:
    """Result of a scheduled run.

    `events` maps (halt step, rendered tape) to the exact path
    probability of observing that outcome; `residual_running` is the
    probability mass still evolving at the horizon; `peak_support` is
    the largest support size the run touched.
    """

    events: dict
    residual_running: RealQ2
    peak_support: int
    horizon: int

    def halted_mass(self) -> RealQ2:
        total = R2_ZERO
        for mass in self.events.values():
            total = total + mass
        return total

    def marginal_output(self):
        """Collapse event keys to rendered tapes, summing over steps."""
        out = {}
        for (_, rendered), mass in self.events.items():
            prev = out.get(rendered)
            out[rendered] = mass if prev is None else prev + mass
        return out


def run(
    m: MachineDesc,
    input_str: str,
    schedule,
    horizon: int,
    max_support: int = DEFAULT_SUPPORT_BOUND,
) -> OutcomeDist:
    """Evolve `m` on `input_str`, measuring the halt flag at scheduled steps.

    At each scheduled step the halted component is recorded as events
    keyed by (step, rendered tape) with its unnormalized squared norm,
    which is its exact path probability, and the run continues with the
    unnormalized running component.  Events plus residual sum to 1.
    """
    _expect_qtm(m)
    require_wellformed(m)
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {horizon!r}")
    steps = set(check_schedule(schedule, horizon))
    psi = initial_superposition(m, input_str)
    events = {}
    peak = len(psi)
    # a schedule entry of 0 observes the initial state, which is live
    for t in range(1, horizon + 1):
        if not psi:
            break
        psi = step(m, psi)
        if len(psi) > peak:
            peak = len(psi)
        if len(psi) > max_support:
            raise ResourceLimitError(
                f"support {len(psi)} exceeds the bound of {max_support}"
            )
        if t in steps:
            halted = {}
            running = {}
            for cfg, amp in psi.terms.items():
                (halted if cfg.h else running)[cfg] = amp
            if halted:
                for cfg, amp in halted.items():
                    key = (t, tape_render(cfg.tape))
                    mass = amp.norm_sq()
                    prev = events.get(key)
                    events[key] = mass if prev is None else prev + mass
                psi = Superposition(running)
    residual = psi.norm_sq() if psi else R2_ZERO
    total = residual
    for mass in events.values():
        total = total + mass
    if total != R2_ONE:
        raise InvariantError(f"event masses and residual sum to {total}, not 1")
    return OutcomeDist(events, residual, peak, horizon)


def halting_probability(
    m: MachineDesc,
    input_str: str,
    horizon: int,
    max_support: int = DEFAULT_SUPPORT_BOUND,
) -> RealQ2:
    """Probability of halting within `horizon` steps, measuring every step."""
    dist = run(m, input_str, range(1, horizon + 1), horizon, max_support=max_support)
    return dist.halted_mass()


def fidelity(psi: Superposition, phi: Superposition) -> RealQ2:
    """|<psi|phi>|^2 normalized by both squared norms."""
    if not psi or not phi:
        raise StructureError("fidelity requires two nonempty superpositions")
    overlap = psi.inner(phi)
    return overlap.norm_sq() / (psi.norm_sq() * phi.norm_sq())
