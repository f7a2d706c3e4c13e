"""Exact simulation and analysis of deterministic, probabilistic, and quantum Turing machines.

Everything is computed in the field Q(zeta_8): amplitudes are exact
cyclotomic numbers, probabilities and fidelities are exact elements of
Q(sqrt 2), and no float enters any simulation path.  Floats appear only
in reports, as approximations printed next to the exact value.

The public surface, by layer:

- `exact`: the number types (`CycQ8`, `RealQ2`).
- `dsl` / `machines`: the machine description format, parsing, and the
  classical-to-quantum lifts.
- `classical` / `quantum`: the three engines and their outcome types.
- `wellformed`: local well-formedness checking plus the brute-force
  finite-window unitarity oracle.
- `coding`: machine numbering and the pairing functions.
- `harness`: distribution metrics, universality certification, and the
  signal-and-reset measurement loop.
- `corpus`: the bundled example machines.
"""

from __future__ import annotations

from .classical import (
    HALTED,
    RUNNING,
    ClassicalDist,
    ClassicalOutcome,
    ptm_evolve_exact,
    ptm_sample,
    tm_run,
)
from .coding import (
    decode_machine,
    encode_machine,
    pair_cantor,
    unpair_cantor,
)
from .corpus import (
    VIOLATOR_QTMS,
    WELL_FORMED_QTMS,
    corpus_files,
    load_corpus_machine,
    load_corpus_text,
)
from .dsl import parse_machine, serialize_machine
from .errors import (
    InvariantError,
    MachineSyntaxError,
    NotAMachineCode,
    NotWellFormed,
    QtmLabError,
    ResourceLimitError,
    ValidationError,
)
from .exact import CycQ8, RealQ2
from .harness import (
    ObservationPolicy,
    SuhdIterationRecord,
    accuracy_report,
    apply_universal,
    conjecture_report,
    distributions_equal,
    outcome_marginal,
    suhd_run,
    tv_distance,
    universality_check,
)
from .machines import Branch, Config, MachineDesc, make_machine, tm_to_ptm, tm_to_qtm
from .quantum import (
    OutcomeDist,
    Superposition,
    fidelity,
    halting_probability,
    initial_superposition,
    measure_halt,
    run,
    step,
    step_inverse,
)
from .wellformed import (
    check_unitary_window,
    check_wellformed_local,
    require_wellformed,
)

__version__ = "0.1.0"

__all__ = [
    "CycQ8",
    "RealQ2",
    "MachineDesc",
    "Branch",
    "Config",
    "make_machine",
    "parse_machine",
    "serialize_machine",
    "tm_to_ptm",
    "tm_to_qtm",
    "HALTED",
    "RUNNING",
    "ClassicalOutcome",
    "ClassicalDist",
    "tm_run",
    "ptm_evolve_exact",
    "ptm_sample",
    "Superposition",
    "OutcomeDist",
    "initial_superposition",
    "step",
    "step_inverse",
    "run",
    "measure_halt",
    "halting_probability",
    "fidelity",
    "check_wellformed_local",
    "check_unitary_window",
    "require_wellformed",
    "encode_machine",
    "decode_machine",
    "pair_cantor",
    "unpair_cantor",
    "tv_distance",
    "distributions_equal",
    "accuracy_report",
    "outcome_marginal",
    "apply_universal",
    "universality_check",
    "ObservationPolicy",
    "SuhdIterationRecord",
    "suhd_run",
    "conjecture_report",
    "corpus_files",
    "load_corpus_text",
    "load_corpus_machine",
    "WELL_FORMED_QTMS",
    "VIOLATOR_QTMS",
    "QtmLabError",
    "MachineSyntaxError",
    "ValidationError",
    "NotAMachineCode",
    "NotWellFormed",
    "ResourceLimitError",
    "InvariantError",
    "__version__",
]
