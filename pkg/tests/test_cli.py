"""End-to-end command line tests, run through real subprocesses.

Subprocesses matter here: byte determinism must hold across fresh
interpreters with fresh hash seeds, and the interactive session needs a
real stdin pipe for its select-based deadline.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from qtmlab.coding import encode_machine, pair_cantor
from qtmlab.corpus import load_corpus_machine


def invoke(*argv, stdin: str | None = None):
    return subprocess.run(
        [sys.executable, "-m", "qtmlab", *argv],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=120,
    )


def payload_of(result) -> dict:
    assert result.returncode == 0, result.stderr
    return json.loads(result.stdout)


class TestCheck:
    def test_well_formed_machine(self):
        result = invoke("check", "h1.qtm")
        assert result.returncode == 0
        assert "WELL_FORMED" in result.stdout

    def test_violation_exits_nonzero(self):
        result = invoke("check", "bad-norm.qtm", "--format", "json")
        assert result.returncode == 1
        payload = json.loads(result.stdout)
        assert payload["verdict"] == "VIOLATION"
        assert payload["violations"][0]["condition"] == "C1"

    def test_window_flag(self):
        payload = payload_of(invoke("check", "h1.qtm", "--window", "4", "--format", "json"))
        assert payload["window"] == {"tape_len": 4, "unitary": True}

    def test_wrong_kind(self):
        result = invoke("check", "increment.tm")
        assert result.returncode == 1
        assert "expected a qtm" in result.stderr

    def test_missing_machine(self):
        result = invoke("check", "nosuch.qtm")
        assert result.returncode == 1
        assert "nosuch" in result.stderr

    def test_reads_machine_files_from_disk(self, tmp_path):
        path = tmp_path / "local.qtm"
        path.write_text(
            "kind qtm\nname local\nstates q0 qH\nhalt qH\n"
            "rule q0 0 -> (qH, 0, S, 1)\n"
            "rule q0 1 -> (qH, 1, S, 1)\n"
            "rule q0 _ -> (qH, _, S, 1)\n"
        )
        result = invoke("check", str(path))
        assert result.returncode == 0
        assert "WELL_FORMED" in result.stdout

    def test_parse_error_goes_to_stderr(self, tmp_path):
        path = tmp_path / "broken.qtm"
        path.write_text("kind qtm\nname broken\n")
        result = invoke("check", str(path))
        assert result.returncode == 1
        assert result.stdout == ""
        assert "error:" in result.stderr


class TestRun:
    def test_deterministic_machine(self):
        result = invoke("run", "increment.tm", "--input", "111")
        assert result.returncode == 0
        assert "bits: 1111" in result.stdout

    def test_quantum_measured_run(self):
        payload = payload_of(
            invoke("run", "h1.qtm", "--measure-at", "1", "--horizon", "1", "--format", "json")
        )
        probs = {row["bits"]: row["p"]["exact"] for row in payload["events"]}
        assert probs == {"0": "1/2", "1": "1/2"}
        assert payload["residual_running"]["exact"] == "0"

    def test_random_machine_exact_distribution(self):
        payload = payload_of(invoke("run", "faircoin.ptm", "--horizon", "4", "--format", "json"))
        assert payload["halted_mass"]["exact"] == "1"
        assert len(payload["events"]) == 2

    def test_sampling_is_seeded(self):
        argv = ("run", "faircoin.ptm", "--horizon", "4", "--sample", "5", "--seed", "9", "--format", "json")
        first, second = invoke(*argv), invoke(*argv)
        assert first.stdout == second.stdout
        rows = payload_of(first)["samples"]
        assert [row["seed"] for row in rows] == [9, 10, 11, 12, 13]

    def test_schedule_flags_conflict(self):
        result = invoke("run", "h1.qtm", "--measure-at", "1", "--measure-every", "2")
        assert result.returncode == 1
        assert "choose one" in result.stderr

    def test_schedule_flags_require_quantum(self):
        result = invoke("run", "increment.tm", "--measure-at", "1")
        assert result.returncode == 1
        assert "only to a qtm" in result.stderr

    def test_sampling_requires_random(self):
        result = invoke("run", "h1.qtm", "--sample", "3")
        assert result.returncode == 1
        assert "only to a ptm" in result.stderr

    def test_resource_bound_exit_code(self):
        result = invoke("run", "walk.qtm", "--horizon", "6", "--max-support", "4")
        assert result.returncode == 2
        assert "bound of 4" in result.stderr


class TestCompare:
    def test_cross_engine_agreement(self):
        payload = payload_of(
            invoke("compare", "h1.qtm", "faircoin.ptm", "--horizon", "1", "--format", "json")
        )
        assert payload["tv"]["exact"] == "0"
        assert payload["within_budget"] is True

    def test_biased_variant_gap(self):
        payload = payload_of(
            invoke(
                "compare", "h1.qtm", "biased34.ptm",
                "--horizon", "1", "--epsilon", "1/4", "--format", "json",
            )
        )
        assert payload["tv"]["exact"] == "1/4"
        assert payload["within_budget"] is True

    def test_identical_files(self):
        payload = payload_of(
            invoke("compare", "walk.qtm", "walk.qtm", "--horizon", "3", "--format", "json")
        )
        assert payload["tv"]["exact"] == "0"

    def test_bad_epsilon(self):
        result = invoke("compare", "h1.qtm", "h1.qtm", "--epsilon", "lots")
        assert result.returncode == 1
        assert "fraction" in result.stderr


class TestSuhd:
    def test_unobserved_run_is_clean_for_walk(self):
        payload = payload_of(
            invoke("suhd", "walk.qtm", "--policy", "never", "--max-T", "5", "--format", "json")
        )
        assert all(r["state_restored"] for r in payload["records"])
        assert "all 5 resets exact" in payload["conjecture_evidence"]

    def test_observation_breaks_the_reset(self):
        payload = payload_of(
            invoke("suhd", "halfhalt.qtm", "--policy", "at:2", "--max-T", "5", "--format", "json")
        )
        fidelities = [r["reset_fidelity"]["exact"] for r in payload["records"]]
        assert fidelities == ["1", "1/2", "1/2", "1/2", "2/3"]
        assert payload["records"][1]["halted_read"] == [
            {"offset": 0, "bits": "0", "p": {"exact": "1", "approx": 1.0}}
        ]
        assert "after observation at iteration 2" in payload["conjecture_evidence"]

    def test_freezing_alone_can_break_the_reset(self):
        payload = payload_of(
            invoke("suhd", "halfhalt.qtm", "--policy", "never", "--max-T", "3", "--format", "json")
        )
        assert "with no observation" in payload["conjecture_evidence"]

    def test_unknown_policy(self):
        result = invoke("suhd", "walk.qtm", "--policy", "sometimes")
        assert result.returncode == 1
        assert "unknown policy" in result.stderr


class TestInteractiveSession:
    def test_scripted_session_matches_the_schedule(self):
        scripted = invoke(
            "suhd", "halfhalt.qtm", "--policy", "interactive", "--max-T", "4", "--format", "json",
            stdin="n\ny\n",
        )
        scheduled = invoke(
            "suhd", "halfhalt.qtm", "--policy", "at:2", "--max-T", "4", "--format", "json"
        )
        assert scripted.returncode == 0, scripted.stderr
        left, right = json.loads(scripted.stdout), json.loads(scheduled.stdout)
        assert left["records"] == right["records"]
        assert left["conjecture_evidence"] == right["conjecture_evidence"]
        assert "observe halt bit? [y/N]" in scripted.stderr
        assert "signal at iteration 1: halt probability 1/2" in scripted.stderr

    def test_deadline_defaults_to_not_observing(self):
        read_fd, write_fd = os.pipe()
        try:
            with open(read_fd, closefd=False) as stdin_file:
                proc = subprocess.run(
                    [
                        sys.executable, "-m", "qtmlab",
                        "suhd", "halfhalt.qtm", "--policy", "interactive",
                        "--max-T", "2", "--response-deadline", "0.05",
                        "--format", "json",
                    ],
                    stdin=stdin_file,
                    capture_output=True,
                    text=True,
                    timeout=60,
                )
        finally:
            os.close(write_fd)
            os.close(read_fd)
        assert proc.returncode == 0, proc.stderr
        payload = json.loads(proc.stdout)
        assert [r["observed"] for r in payload["records"]] == [False, False]
        assert "no response before the deadline" in proc.stderr


class TestEncodeAndUniversal:
    def test_roundtrip_through_the_pairing(self):
        encoded = payload_of(
            invoke("encode", "increment.tm", "--input-number", "3", "--format", "json")
        )
        m = load_corpus_machine("increment.tm")
        assert int(encoded["code"]) == encode_machine(m)
        assert int(encoded["packed_code"]) == pair_cantor(encode_machine(m), 3)

        universal = payload_of(
            invoke("universal", "tm", encoded["packed_code"], "--horizon", "12", "--format", "json")
        )
        direct = payload_of(
            invoke("run", "increment.tm", "--input", "11", "--horizon", "12", "--format", "json")
        )
        assert universal["outcome"] == direct["outcome"]

    def test_invalid_code(self):
        result = invoke("universal", "tm", "5")
        assert result.returncode == 1
        assert "not a machine code" in result.stderr

    def test_random_machine_code(self):
        m = load_corpus_machine("faircoin.ptm")
        packed = str(pair_cantor(encode_machine(m), 0))
        universal = payload_of(invoke("universal", "ptm", packed, "--horizon", "4", "--format", "json"))
        direct = payload_of(invoke("run", "faircoin.ptm", "--horizon", "4", "--format", "json"))
        assert universal["events"] == direct["events"]


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("check", "coin2.qtm", "--format", "json"),
            ("run", "interference.qtm", "--measure-at", "1,2", "--horizon", "2", "--format", "json"),
            ("run", "geometric.ptm", "--horizon", "6", "--format", "json"),
            ("compare", "h1.qtm", "faircoin.ptm", "--horizon", "2", "--format", "json"),
            ("suhd", "interference.qtm", "--policy", "at:1", "--max-T", "3", "--format", "json"),
            ("run", "walk.qtm", "--horizon", "4"),
        ],
        ids=lambda argv: " ".join(argv[:2]),
    )
    def test_byte_identical_reruns(self, argv):
        first, second = invoke(*argv), invoke(*argv)
        assert first.returncode == second.returncode
        assert first.stdout == second.stdout
        assert first.stdout.encode() == second.stdout.encode()


class TestCorpusTest:
    def test_golden_replay(self):
        result = invoke("corpus-test")
        assert result.returncode == 0, result.stdout + result.stderr
        assert "failures:" in result.stdout

    def test_reports_fixture_names(self):
        payload = payload_of(invoke("corpus-test", "--format", "json"))
        assert payload["failures"] == []
        assert "suhd-halfhalt-at2.json" in payload["fixtures"]


class TestArgumentHandling:
    def test_help_exits_zero(self):
        assert invoke("--help").returncode == 0

    def test_no_verb_is_a_usage_error(self):
        assert invoke().returncode == 1

    def test_unknown_flag(self):
        assert invoke("check", "h1.qtm", "--frobnicate").returncode == 1

    def test_console_script_is_installed(self):
        result = subprocess.run(
            ["qtmlab", "check", "h1.qtm"], capture_output=True, text=True, timeout=60
        )
        assert result.returncode == 0
        assert "WELL_FORMED" in result.stdout
