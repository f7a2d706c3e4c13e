"""Regenerate the golden CLI fixtures under src/qtmlab/corpus/golden/.

Run from the repository root after an intentional report-format change:

    python3 tools/regen_golden.py

Every number that ends up in a fixture is pinned independently by the
unit suites; these files freeze the byte-level rendering on top.
"""

from __future__ import annotations

import io
import json
import pathlib
import sys
from contextlib import redirect_stdout

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qtmlab.cli import main  # noqa: E402
from qtmlab.coding import encode_machine, pair_cantor  # noqa: E402
from qtmlab.corpus import load_corpus_machine  # noqa: E402

GOLDEN = pathlib.Path(__file__).resolve().parents[1] / "src" / "qtmlab" / "corpus" / "golden"

PACKED_INCREMENT = str(pair_cantor(encode_machine(load_corpus_machine("increment.tm")), 3))

FIXTURES = {
    "check-h1.json": ["check", "h1.qtm", "--format", "json"],
    "check-window-h1.json": ["check", "h1.qtm", "--window", "4", "--format", "json"],
    "check-bad-norm.json": ["check", "bad-norm.qtm", "--format", "json"],
    "run-h1-measured.json": ["run", "h1.qtm", "--measure-at", "1", "--horizon", "1", "--format", "json"],
    "run-increment.json": ["run", "increment.tm", "--input", "111", "--horizon", "20", "--format", "json"],
    "run-faircoin.json": ["run", "faircoin.ptm", "--horizon", "4", "--format", "json"],
    "run-walk-text.json": ["run", "walk.qtm", "--horizon", "3", "--measure-every", "3"],
    "run-sample-faircoin.json": ["run", "faircoin.ptm", "--horizon", "4", "--sample", "3", "--seed", "7", "--format", "json"],
    "compare-h1-faircoin.json": ["compare", "h1.qtm", "faircoin.ptm", "--horizon", "1", "--format", "json"],
    "compare-h1-biased34.json": ["compare", "h1.qtm", "biased34.ptm", "--horizon", "1", "--epsilon", "1/4", "--format", "json"],
    "suhd-halfhalt-at2.json": ["suhd", "halfhalt.qtm", "--policy", "at:2", "--max-T", "5", "--format", "json"],
    "suhd-interference-never.json": ["suhd", "interference.qtm", "--policy", "never", "--max-T", "3", "--format", "json"],
    "encode-increment.json": ["encode", "increment.tm", "--input-number", "3", "--format", "json"],
    "universal-increment.json": ["universal", "tm", PACKED_INCREMENT, "--horizon", "12", "--format", "json"],
}


def regenerate() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, argv in sorted(FIXTURES.items()):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            exit_code = main(list(argv))
        fixture = {"argv": argv, "exit_code": exit_code, "stdout": buffer.getvalue()}
        path = GOLDEN / name
        path.write_text(json.dumps(fixture, sort_keys=True, indent=2) + "\n", "utf-8")
        print(f"wrote {path.relative_to(GOLDEN.parents[3])} (exit {exit_code})")


if __name__ == "__main__":
    regenerate()
