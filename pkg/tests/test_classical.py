"""Classical engines against hand-traced oracles.

Expected tapes, step counts, and distributions in this file were worked
out on paper from the rule tables in corpus/ before the engines ran.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtmlab.classical import (
    HALTED,
    RUNNING,
    ClassicalOutcome,
    ptm_decide,
    ptm_evolve_exact,
    ptm_sample,
    tm_run,
)
from qtmlab.corpus import load_corpus_machine
from qtmlab.errors import ResourceLimitError, StructureError, ValidationError
from qtmlab.machines import tape_render, tm_to_ptm

from strategies import machines


def tape(*entries):
    return tuple(entries)


class TestTmRun:
    def test_increment_appends_a_one(self):
        m = load_corpus_machine("increment.tm")
        out = tm_run(m, "111", 100)
        assert out == ClassicalOutcome(
            HALTED, tape((0, "1"), (1, "1"), (2, "1"), (3, "1")), 4
        )
        assert tape_render(out.tape) == (0, "1111")

    def test_increment_on_empty_input(self):
        m = load_corpus_machine("increment.tm")
        assert tm_run(m, "", 100) == ClassicalOutcome(HALTED, tape((0, "1")), 1)

    def test_zero_rule_machine_halts_at_step_zero(self):
        m = load_corpus_machine("donothing.tm")
        assert tm_run(m, "", 100) == ClassicalOutcome(HALTED, (), 0)
        assert tm_run(m, "101", 100).steps == 0

    def test_oscillator_never_halts(self):
        m = load_corpus_machine("oscillator.tm")
        out = tm_run(m, "", 100)
        assert out.status == RUNNING
        assert out.steps == 100

    def test_flipper(self):
        m = load_corpus_machine("flipper.tm")
        out = tm_run(m, "0011", 100)
        assert out.status == HALTED
        assert tape_render(out.tape) == (0, "1100")
        assert out.steps == 4

    def test_step_budget_boundary(self):
        m = load_corpus_machine("increment.tm")
        assert tm_run(m, "111", 3).status == RUNNING
        assert tm_run(m, "111", 4).status == HALTED

    def test_kind_check(self):
        with pytest.raises(StructureError):
            tm_run(load_corpus_machine("faircoin.ptm"), "", 10)

    def test_bad_input_rejected(self):
        with pytest.raises(ValidationError):
            tm_run(load_corpus_machine("increment.tm"), "12", 10)


class TestPtmEvolve:
    def test_faircoin(self):
        m = load_corpus_machine("faircoin.ptm")
        dist = ptm_evolve_exact(m, "", 1)
        assert dist.events == {
            (HALTED, tape((0, "0"))): Fraction(1, 2),
            (HALTED, tape((0, "1"))): Fraction(1, 2),
        }

    def test_faircoin_horizon_zero_is_still_running(self):
        dist = ptm_evolve_exact(load_corpus_machine("faircoin.ptm"), "", 0)
        assert dist.events == {(RUNNING, ()): Fraction(1)}

    def test_twocoin_four_outcomes(self):
        dist = ptm_evolve_exact(load_corpus_machine("twocoin.ptm"), "", 2)
        expected = {
            (HALTED, tape((0, a), (1, b))): Fraction(1, 4)
            for a in "01"
            for b in "01"
        }
        assert dist.events == expected

    def test_geometric_tail(self):
        dist = ptm_evolve_exact(load_corpus_machine("geometric.ptm"), "", 4)
        expected = {
            (HALTED, tape((k, "1"))): Fraction(1, 2 ** (k + 1)) for k in range(4)
        }
        expected[(RUNNING, ())] = Fraction(1, 16)
        assert dist.events == expected

    def test_halted_mass_monotone_in_horizon(self):
        m = load_corpus_machine("geometric.ptm")
        masses = [ptm_evolve_exact(m, "", h).halted_mass() for h in range(8)]
        assert masses == sorted(masses)
        assert masses[0] == 0 and masses[7] == Fraction(127, 128)

    def test_missing_rule_halts_without_a_step(self):
        # faircoin has no rule for reading 1, so input "1" halts at once
        dist = ptm_evolve_exact(load_corpus_machine("faircoin.ptm"), "1", 5)
        assert dist.events == {(HALTED, tape((0, "1"))): Fraction(1)}

    def test_support_bound(self):
        m = load_corpus_machine("geometric.ptm")
        with pytest.raises(ResourceLimitError, match="bound of 3"):
            ptm_evolve_exact(m, "", 6, max_support=3)

    @settings(max_examples=40, deadline=None)
    @given(machines(kind="ptm"), st.integers(0, 5))
    def test_mass_conservation(self, m, horizon):
        dist = ptm_evolve_exact(m, "", horizon)
        assert sum(dist.events.values()) == 1

    @settings(max_examples=40, deadline=None)
    @given(machines(kind="tm"), st.sampled_from(["", "1", "01"]), st.integers(0, 6))
    def test_degenerate_ptm_tracks_tm(self, m, input_str, horizon):
        out = tm_run(m, input_str, horizon)
        dist = ptm_evolve_exact(tm_to_ptm(m), input_str, horizon)
        assert dist.events == {(out.status, out.tape): Fraction(1)}


class TestPtmDecide:
    def test_biased78_decides_one(self):
        assert ptm_decide(load_corpus_machine("biased78.ptm"), "", 1) == "1"

    def test_faircoin_undecided(self):
        assert ptm_decide(load_corpus_machine("faircoin.ptm"), "", 1) is None

    def test_threshold_is_strict(self):
        m = load_corpus_machine("biased34.ptm")
        assert ptm_decide(m, "", 1) is None
        assert ptm_decide(m, "", 1, threshold=Fraction(7, 10)) == "1"

    def test_deterministic_machine_decides_its_output(self):
        m = tm_to_ptm(load_corpus_machine("increment.tm"))
        assert ptm_decide(m, "11", 10) == "111"

    def test_threshold_validation(self):
        m = load_corpus_machine("faircoin.ptm")
        with pytest.raises(ValidationError, match="exceed 1/2"):
            ptm_decide(m, "", 1, threshold=Fraction(1, 2))

    def test_agreement_with_tm_run(self):
        for stem in ("increment", "flipper", "donothing"):
            m = load_corpus_machine(f"{stem}.tm")
            out = tm_run(m, "10", 50)
            assert ptm_decide(tm_to_ptm(m), "10", 50) == tape_render(out.tape)[1]


class TestPtmSample:
    def test_reproducible(self):
        m = load_corpus_machine("twocoin.ptm")
        a = ptm_sample(m, "", 10, seed=42)
        b = ptm_sample(m, "", 10, seed=42)
        assert a == b
        assert a.status == HALTED

    def test_matches_tm_on_deterministic_machines(self):
        m = load_corpus_machine("increment.tm")
        lifted = tm_to_ptm(m)
        for seed in range(20):
            assert ptm_sample(lifted, "11", 100, seed) == tm_run(m, "11", 100)

    def test_faircoin_frequency(self):
        m = load_corpus_machine("faircoin.ptm")
        ones = sum(
            1
            for seed in range(10_000)
            if tape_render(ptm_sample(m, "", 5, seed).tape)[1] == "1"
        )
        assert 4500 <= ones <= 5500

    def test_geometric_sample_respects_budget(self):
        m = load_corpus_machine("geometric.ptm")
        out = ptm_sample(m, "", 3, seed=7)
        assert out.steps <= 3
