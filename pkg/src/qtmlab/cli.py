"""Command line surface: check, run, compare, suhd, encode, universal, corpus-test.

Exit codes: 0 success, 1 validation or parse failure, 2 resource bound
exceeded, 3 internal invariant breach.  Identical invocations produce
byte-identical reports; the only randomness anywhere is behind --seed.
"""

from __future__ import annotations

import argparse
import io
import json
import select
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from importlib import resources

from .classical import ptm_evolve_exact, ptm_sample, tm_run
from .coding import encode_machine, pair_cantor
from .corpus import resolve_machine_text
from .dsl import parse_machine
from .errors import (
    InvariantError,
    QtmLabError,
    ResourceLimitError,
    ValidationError,
)
from .harness import (
    ObservationPolicy,
    accuracy_report,
    apply_universal,
    outcome_marginal,
    suhd_run,
)
from .machines import DEFAULT_SUPPORT_BOUND
from .quantum import run
from .reporting import (
    accuracy_fields,
    check_payload,
    classical_dist_fields,
    evidence_line,
    exact_field,
    machine_fields,
    marginal_rows,
    quantum_dist_fields,
    render,
    suhd_record_fields,
    tm_outcome_fields,
)
from .wellformed import WELL_FORMED, check_unitary_window, check_wellformed_local

DEFAULT_HORIZON = 100


def _load_machine(spec: str):
    return parse_machine(resolve_machine_text(spec))


def _parse_fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{flag} wants a fraction like 1/100, got {text!r}")


def _parse_schedule(args, horizon: int):
    if args.measure_at is not None and args.measure_every is not None:
        raise ValidationError("choose one of --measure-at and --measure-every")
    if args.measure_at is not None:
        try:
            return tuple(int(part) for part in args.measure_at.split(","))
        except ValueError:
            raise ValidationError(
                f"--measure-at wants comma-separated steps, got {args.measure_at!r}"
            )
    if args.measure_every is not None:
        if args.measure_every < 1:
            raise ValidationError("--measure-every must be positive")
        return tuple(range(args.measure_every, horizon + 1, args.measure_every))
    return tuple(range(1, horizon + 1))


def cmd_check(args):
    m = _load_machine(args.machine)
    report = check_wellformed_local(m)
    window = None
    if args.window is not None:
        window = (args.window, check_unitary_window(m, args.window))
    ok = report.verdict == WELL_FORMED and (window is None or window[1])
    return check_payload(m, report, window), 0 if ok else 1


def cmd_run(args):
    m = _load_machine(args.machine)
    horizon = args.horizon
    if m.kind != "qtm" and (args.measure_at is not None or args.measure_every is not None):
        raise ValidationError("measurement schedules apply only to a qtm")
    if m.kind != "ptm" and args.sample is not None:
        raise ValidationError("--sample applies only to a ptm")
    payload = {
        "command": "run",
        **machine_fields(m),
        "input": args.input,
        "horizon": horizon,
    }
    if m.kind == "tm":
        payload["outcome"] = tm_outcome_fields(tm_run(m, args.input, horizon))
    elif m.kind == "ptm":
        if args.sample is not None:
            if args.sample < 1:
                raise ValidationError("--sample must be positive")
            rows = []
            for i in range(args.sample):
                outcome = tm_outcome_fields(ptm_sample(m, args.input, horizon, args.seed + i))
                rows.append({**outcome, "seed": args.seed + i})
            payload["samples"] = rows
            payload["seed"] = args.seed
        else:
            dist = ptm_evolve_exact(m, args.input, horizon, max_support=args.max_support)
            payload.update(classical_dist_fields(dist))
    else:
        schedule = _parse_schedule(args, horizon)
        dist = run(m, args.input, schedule, horizon, max_support=args.max_support)
        payload["schedule"] = list(schedule)
        payload.update(quantum_dist_fields(dist))
    return payload, 0


def _outcome_for_compare(m, input_str: str, horizon: int, max_support: int):
    if m.kind == "tm":
        return tm_run(m, input_str, horizon)
    if m.kind == "ptm":
        return ptm_evolve_exact(m, input_str, horizon, max_support=max_support)
    return run(m, input_str, range(1, horizon + 1), horizon, max_support=max_support)


def cmd_compare(args):
    a = _load_machine(args.machine_a)
    b = _load_machine(args.machine_b)
    epsilon = _parse_fraction(args.epsilon, "--epsilon")
    marginals = [
        outcome_marginal(_outcome_for_compare(m, args.input, args.horizon, args.max_support))
        for m in (a, b)
    ]
    report = accuracy_report(marginals[0], marginals[1], epsilon)
    payload = {
        "command": "compare",
        "machines": [machine_fields(a), machine_fields(b)],
        "input": args.input,
        "horizon": args.horizon,
        "outputs": [marginal_rows(marg) for marg in marginals],
        **accuracy_fields(report),
    }
    return payload, 0


def _interactive_policy(deadline: float) -> ObservationPolicy:
    def decide(outer_T, halt_prob):
        sys.stderr.write(f"signal at iteration {outer_T}: halt probability {halt_prob}\n")
        sys.stderr.write("observe halt bit? [y/N] ")
        sys.stderr.flush()
        ready, _, _ = select.select([sys.stdin], [], [], deadline)
        if not ready:
            sys.stderr.write("\n(no response before the deadline, continuing unobserved)\n")
            return False
        line = sys.stdin.readline()
        return line.strip().lower() in ("y", "yes")

    return ObservationPolicy.interactive(decide)


def _parse_policy(args):
    spec = args.policy
    if spec == "never":
        return ObservationPolicy.never()
    if spec == "always":
        return ObservationPolicy.always()
    if spec.startswith("at:"):
        try:
            iterations = tuple(int(part) for part in spec[3:].split(","))
        except ValueError:
            raise ValidationError(f"--policy at: wants iterations like at:2,5, got {spec!r}")
        return ObservationPolicy.at_iterations(iterations)
    if spec == "interactive":
        return _interactive_policy(args.response_deadline)
    raise ValidationError(
        f"unknown policy {spec!r}; use never, always, at:k1,k2 or interactive"
    )


def cmd_suhd(args):
    m = _load_machine(args.machine)
    epsilon = _parse_fraction(args.epsilon, "--epsilon")
    policy = _parse_policy(args)
    records = suhd_run(
        encode_machine(m),
        args.input,
        epsilon,
        policy,
        args.max_T,
        max_support=args.max_support,
    )
    payload = {
        "command": "suhd",
        **machine_fields(m),
        "input": args.input,
        "epsilon": exact_field(epsilon),
        "policy": args.policy,
        "max_T": args.max_T,
        "records": [suhd_record_fields(r) for r in records],
        "conjecture_evidence": evidence_line(records),
    }
    return payload, 0


def cmd_encode(args):
    m = _load_machine(args.machine)
    code = encode_machine(m)
    payload = {"command": "encode", **machine_fields(m), "code": str(code)}
    if args.input_number is not None:
        if args.input_number < 0:
            raise ValidationError("--input-number must be a natural number")
        payload["input_number"] = args.input_number
        payload["packed_code"] = str(pair_cantor(code, args.input_number))
    return payload, 0


def cmd_universal(args):
    try:
        code = int(args.code)
    except ValueError:
        raise ValidationError(f"code must be a natural number, got {args.code!r}")
    outcome = apply_universal(args.kind, code, args.horizon, max_support=args.max_support)
    payload = {
        "command": "universal",
        "kind": args.kind,
        "code": args.code,
        "horizon": args.horizon,
    }
    if args.kind == "tm":
        payload["outcome"] = tm_outcome_fields(outcome)
    elif args.kind == "ptm":
        payload.update(classical_dist_fields(outcome))
    else:
        payload.update(quantum_dist_fields(outcome))
    return payload, 0


def cmd_corpus_test(args):
    root = resources.files(__package__).joinpath("corpus", "golden")
    entries = sorted(
        (entry for entry in root.iterdir() if entry.name.endswith(".json")),
        key=lambda entry: entry.name,
    )
    if not entries:
        raise ValidationError("no golden fixtures bundled")
    fixtures, failures = [], []
    for entry in entries:
        fixture = json.loads(entry.read_text("utf-8"))
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = main(fixture["argv"])
        fixtures.append(entry.name)
        if code != fixture["exit_code"] or buffer.getvalue() != fixture["stdout"]:
            failures.append(entry.name)
    payload = {"command": "corpus-test", "fixtures": fixtures, "failures": failures}
    return payload, 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtmlab",
        description="Exact simulation and analysis of deterministic, random and quantum tape machines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, machine=True):
        if machine:
            p.add_argument("machine", help="machine file path or bundled corpus name")
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("check", help="well-formedness verdict, optionally with the window cross-check")
    common(p)
    p.add_argument("--window", type=int, default=None, metavar="N", help="also check unitarity on a circular tape of N cells")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("run", help="run one machine and report its outcome distribution")
    common(p)
    p.add_argument("--input", default="")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--measure-at", default=None, metavar="s1,s2,...")
    p.add_argument("--measure-every", type=int, default=None, metavar="K")
    p.add_argument("--sample", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-support", type=int, default=DEFAULT_SUPPORT_BOUND, metavar="N")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("compare", help="total variation distance between two machines' outputs")
    p.add_argument("machine_a")
    p.add_argument("machine_b")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--input", default="")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--epsilon", default="0", metavar="p/q")
    p.add_argument("--max-support", type=int, default=DEFAULT_SUPPORT_BOUND, metavar="N")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("suhd", help="simulate, signal, optionally observe, reset by inverse evolution")
    common(p)
    p.add_argument("--input", default="")
    p.add_argument("--epsilon", default="1/100", metavar="p/q")
    p.add_argument("--policy", default="never", metavar="never|always|at:k1,k2|interactive")
    p.add_argument("--max-T", type=int, default=5, dest="max_T")
    p.add_argument("--response-deadline", type=float, default=30.0, metavar="SECONDS")
    p.add_argument("--max-support", type=int, default=DEFAULT_SUPPORT_BOUND, metavar="N")
    p.set_defaults(handler=cmd_suhd)

    p = sub.add_parser("encode", help="number a machine, optionally packed with an input number")
    common(p)
    p.add_argument("--input-number", type=int, default=None, metavar="M")
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("universal", help="run a packed machine-and-input code")
    p.add_argument("kind", choices=("tm", "ptm", "qtm"))
    p.add_argument("code")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--max-support", type=int, default=DEFAULT_SUPPORT_BOUND, metavar="N")
    p.set_defaults(handler=cmd_universal)

    p = sub.add_parser("corpus-test", help="replay the bundled golden reports and compare bytes")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(handler=cmd_corpus_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        payload, code = args.handler(args)
    except ResourceLimitError as exc:
        print(f"error: resource bound: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"error: invariant breach: {exc}", file=sys.stderr)
        return 3
    except QtmLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(payload, args.format))
    return code
