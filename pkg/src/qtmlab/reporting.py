"""Report payloads behind the command line, and their two renderings.

Every inexact-looking number in a payload is a pair: the exact value as
text in the amplitude grammar, plus a float approximation clearly named
as such.  JSON output is key-sorted so identical invocations serialize
to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .classical import HALTED, ClassicalDist, ClassicalOutcome
from .exact import RealQ2
from .harness import RUNNING_KEY, SimAccuracyReport
from .machines import MachineDesc, tape_render
from .quantum import OutcomeDist


def exact_field(value) -> dict:
    """Exact text plus annotated float approximation."""
    if isinstance(value, (RealQ2, Fraction)):
        return {"exact": str(value), "approx": float(value)}
    if isinstance(value, int) and not isinstance(value, bool):
        return {"exact": str(value), "approx": float(value)}
    raise TypeError(f"no exact rendering for {value!r}")


def _tape_fields(rendered) -> dict:
    offset, bits = rendered
    return {"offset": offset, "bits": bits}


def _read_rows(read: dict | None):
    if read is None:
        return None
    return [
        {**_tape_fields(key), "p": exact_field(p)}
        for key, p in sorted(read.items())
    ]


def machine_fields(m: MachineDesc) -> dict:
    return {"machine": m.name, "kind": m.kind}


def check_payload(m: MachineDesc, report, window=None) -> dict:
    payload = {
        "command": "check",
        **machine_fields(m),
        "verdict": report.verdict,
        "violations": [
            {
                "condition": v.condition,
                "witness": list(v.witness),
                "residual": exact_field(v.residual),
            }
            for v in report.violations
        ],
    }
    if window is not None:
        tape_len, unitary = window
        payload["window"] = {"tape_len": tape_len, "unitary": unitary}
    return payload


def tm_outcome_fields(out: ClassicalOutcome) -> dict:
    return {
        "status": out.status,
        **_tape_fields(tape_render(out.tape)),
        "steps": out.steps,
    }


def classical_dist_fields(dist: ClassicalDist) -> dict:
    rows = [
        {
            "status": status,
            **_tape_fields(tape_render(tape)),
            "p": exact_field(p),
        }
        for (status, tape), p in dist.events.items()
    ]
    rows.sort(key=lambda r: (r["status"], r["offset"], r["bits"]))
    return {
        "events": rows,
        "halted_mass": exact_field(dist.halted_mass()),
        "support": len(dist.events),
    }


def quantum_dist_fields(dist: OutcomeDist) -> dict:
    rows = [
        {
            "step": step,
            **_tape_fields(rendered),
            "p": exact_field(mass),
        }
        for (step, rendered), mass in dist.events.items()
    ]
    rows.sort(key=lambda r: (r["step"], r["offset"], r["bits"]))
    return {
        "events": rows,
        "halted_mass": exact_field(dist.halted_mass()),
        "residual_running": exact_field(dist.residual_running),
        "peak_support": dist.peak_support,
    }


def marginal_rows(marginal: dict):
    rows = []
    for key, p in marginal.items():
        if key == RUNNING_KEY:
            rows.append({"status": key[0], "p": exact_field(p)})
        else:
            status, rendered = key
            rows.append({"status": status, **_tape_fields(rendered), "p": exact_field(p)})
    rows.sort(key=lambda r: (r["status"], r.get("offset", 0), r.get("bits", "")))
    return rows


def accuracy_fields(report: SimAccuracyReport) -> dict:
    return {
        "tv": exact_field(report.tv),
        "epsilon": exact_field(report.epsilon),
        "within_budget": report.within_budget,
    }


def suhd_record_fields(record) -> dict:
    return {
        "outer_T": record.outer_T,
        "steps_executed": record.steps_executed,
        "observed": record.observed,
        "halt_prob_at_signal": exact_field(record.halt_prob_at_signal),
        "reset_fidelity": exact_field(record.reset_fidelity),
        "state_restored": record.state_restored,
        "accuracy_budget": exact_field(record.accuracy_budget),
        "halted_read": _read_rows(record.halted_read),
    }


def evidence_line(records) -> str:
    """One honest sentence about what the run showed."""
    broken = [r for r in records if not r.state_restored]
    if not broken:
        return f"all {len(records)} resets exact at this horizon; nothing witnessed"
    first = broken[0]
    observed = [r.outer_T for r in records if r.observed and r.outer_T <= first.outer_T]
    if observed:
        return (
            f"reset fidelity {first.reset_fidelity} < 1 from iteration "
            f"{first.outer_T} after observation at iteration {observed[0]}"
        )
    return (
        f"reset fidelity {first.reset_fidelity} < 1 from iteration "
        f"{first.outer_T} with no observation: a frozen halting branch "
        f"made the raw step non-injective"
    )


def report_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _is_exact_pair(value) -> bool:
    return isinstance(value, dict) and set(value) == {"exact", "approx"}


def _text_lines(value, indent: int):
    pad = "  " * indent
    if _is_exact_pair(value):
        yield f"{pad}{value['exact']} (~{value['approx']:.6g})"
    elif isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if _is_exact_pair(item):
                yield f"{pad}{key}: {item['exact']} (~{item['approx']:.6g})"
            elif isinstance(item, (dict, list)):
                yield f"{pad}{key}:"
                yield from _text_lines(item, indent + 1)
            else:
                yield f"{pad}{key}: {item}"
    elif isinstance(value, list):
        if not value:
            yield f"{pad}(none)"
        for item in value:
            if isinstance(item, (dict, list)):
                yield f"{pad}-"
                yield from _text_lines(item, indent + 1)
            else:
                yield f"{pad}- {item}"
    else:
        yield f"{pad}{value}"


def report_text(payload) -> str:
    return "\n".join(_text_lines(payload, 0)) + "\n"


def render(payload, fmt: str) -> str:
    return report_json(payload) if fmt == "json" else report_text(payload)
