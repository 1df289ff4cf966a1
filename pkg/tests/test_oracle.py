import numpy as np
import pytest
from hypothesis import given

from ensconce import oracle
from ensconce.ensconcement import Ensconcement, validate
from ensconce.logic import parse, table
from ensconce.operators import DerivedEntrenchment, SevereWithdrawal
from ensconce.oracle import (THEOREMS, Definitions, GenerationExhausted, GeneratorConfig,
                             Semantics, exhaustive_two_atom, generate_ensconcement, generated,
                             hand_corpus, run_corpus, verify_theorem)

from conftest import P, Q, SIG2, SIG3, ensconcements, formulas

E = Ensconcement.of
TWO = E("p q", ("p", 0), ("q", 1))


class TestSemantics:
    def test_models(self):
        sem = Semantics(SIG2)
        assert len(sem.models(P)) == 2
        assert sem.entails([P, Q], parse("p & q"))
        assert sem.valid(parse("p -> p")) and not sem.valid(P)
        assert sem.models_of_set([]) == sem.everything

    @given(formulas())
    def test_agrees_with_truth_tables(self, f):
        sem = Semantics(SIG3)
        assert sem.valid(f) == (table(f, SIG3) == SIG3.full)


class TestDefinitions:
    def test_cut_examples(self):
        d = Definitions(TWO)
        assert d.cut_of(P, strict=True) == {P, Q}
        assert d.cut_of(Q, strict=True) == {Q}
        assert d.cut_of(P, strict=False) == {Q}

    def test_relations(self):
        d = Definitions(TWO)
        assert d.leq(P, Q) and not d.leq(Q, P)
        assert d.severe(P, Q) and not d.severe(Q, P)

    @given(ensconcements(3))
    def test_matches_library_relations(self, e):
        d = Definitions(e)
        t = np.array([table(f, e.sig) for f in d.universe])
        assert (DerivedEntrenchment(e).matrix[np.ix_(t, t)] == d.L).all()
        assert (SevereWithdrawal(e).matrix[np.ix_(t, t)] == d.SEV).all()


DIAMOND = E("p q", ("p", 0), ("q", 0), ("p | q", 1))
CONJ = E("p q", ("p & q", 0))


def names(fs):
    return sorted(str(f) for f in fs)


class TestWorkedExamples:
    """Small examples worked from the definitions by the oracle alone."""

    def brutal(self, e, f):
        d = Definitions(e)
        return d.members(int(d.brutal[d.index(parse(f))]))

    def test_cuts(self):
        d = Definitions(TWO)
        assert d.cut_of(parse("p"), strict=True) == {P, Q}
        assert d.cut_of(parse("q"), strict=True) == {Q}
        assert Definitions(DIAMOND).cut_of(P, strict=False) == {parse("p | q")}

    def test_brutal(self):
        assert self.brutal(TWO, "p") == {Q}
        assert self.brutal(TWO, "q") == set()
        assert self.brutal(DIAMOND, "p") == {parse("p | q")}
        assert self.brutal(CONJ, "p") == set()
        assert self.brutal(TWO, "p | !p") == {P, Q}

    def test_withdrawal_membership(self):
        d = Definitions(TWO)
        assert d.severe(P, Q) and d.severe(P, parse("p | q"))
        assert not Definitions(CONJ).severe(P, Q)
        assert d.GARD[d.index(P), d.index(Q)]
        c = Definitions(CONJ)
        assert not c.GARD[c.index(P), c.index(parse("p | q"))]

    def test_recovery_shape(self):
        d = Definitions(CONJ)
        kept = d.SEV[d.index(P)]
        assert (kept == d.valid).all()      # K ÷ p = Cn(∅)

    def test_entrenchment_from_withdrawal(self):
        d = Definitions(TWO)
        # a <= b iff a not in K ÷ b, or |- b
        assert not d.severe(Q, P) and d.severe(P, Q)
        assert d.leq(P, Q) and not d.leq(Q, P)


class TestVerify:
    @pytest.mark.parametrize("id", THEOREMS)
    def test_hand_corpus(self, id):
        for e in hand_corpus():
            report = verify_theorem(id, e)
            assert report.passed, str(report)
            assert str(report) == f"{id}: PASS"

    @given(ensconcements(3))
    def test_generated(self, e):
        d = Definitions(e)
        for id in THEOREMS:
            assert verify_theorem(id, e, d).passed

    def test_unknown(self):
        with pytest.raises(KeyError):
            verify_theorem("thm9", TWO)

    def test_detects_wrong_brutal_contraction(self, monkeypatch):
        monkeypatch.setattr(oracle, "brutal_contract", lambda e, a: e.base)
        report = verify_theorem("thm2-bridge", TWO)
        assert not report.passed
        assert "library result differs" in report.witness
        assert str(report).endswith("atoms p q\n0 : p\n1 : q\n")

    def test_detects_wrong_cut(self, monkeypatch):
        # the proper cut computed with the strict cohort instead
        monkeypatch.setattr(Ensconcement, "cut_proper_mask", Ensconcement.cut_nonstrict_mask)
        e = E("p q", ("p", 0), ("q", 1))
        failed = {id for id in THEOREMS if not verify_theorem(id, e).passed}
        assert {"thm2-bridge", "cut-lemma-suite"} <= failed

    def test_detects_wrong_entrenchment(self, monkeypatch):
        original = DerivedEntrenchment.leq_t
        monkeypatch.setattr(DerivedEntrenchment, "leq_t", lambda self, a, b: original(self, b, a))
        monkeypatch.delattr(DerivedEntrenchment, "matrix")
        report = verify_theorem("thm3-closure", TWO)
        assert not report.passed and "library withdrawal membership" in report.witness


class TestGeneration:
    def test_deterministic(self):
        cfg = GeneratorConfig(seed=5, atom_count=3, base_size=5, rank_levels=4)
        assert generate_ensconcement(cfg, 3) == generate_ensconcement(cfg, 3)
        assert cfg(3) == GeneratorConfig(seed=5, atom_count=3, base_size=5, rank_levels=4)(3)
        assert len({cfg(i) for i in range(20)}) > 15

    def test_single_member_single_level(self):
        cfg = GeneratorConfig(seed=1, atom_count=2, base_size=1, rank_levels=1)
        for e in generated(GeneratorConfig(**{**cfg.__dict__, "sample_count": 30})):
            assert len(e) == 1 and e.ranks == (0,)
            assert table(e.formulas[0], SIG2) not in (0, SIG2.full)

    @given(ensconcements(3))
    def test_always_valid(self, e):
        assert validate(e).ok

    def test_bounds(self):
        cfg = GeneratorConfig(seed=2, atom_count=3, base_size=4, rank_levels=2)
        for i in range(50):
            e = cfg(i)
            assert 1 <= len(e) <= 4 and set(e.ranks) <= {0, 1}

    @pytest.mark.parametrize("kwargs", [{"atom_count": 4}, {"atom_count": 0},
                                        {"base_size": 0}, {"rank_levels": 5},
                                        {"sample_count": -1}])
    def test_config_ranges(self, kwargs):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=0, **kwargs)

    def test_exhaustion(self, monkeypatch):
        monkeypatch.setattr(oracle, "validate", lambda e: False)
        with pytest.raises(GenerationExhausted):
            generate_ensconcement(GeneratorConfig(seed=0), 0)

    def test_exhaustive_two_atom(self, two_atom_corpus):
        assert len(two_atom_corpus) == 2643
        assert all(validate(e).ok for e in two_atom_corpus[::50])
        assert len(set(two_atom_corpus)) == len(two_atom_corpus)
        assert len(exhaustive_two_atom(max_size=1, max_levels=1)) == 14


class TestCorpus:
    def test_hand_only(self):
        summary = run_corpus(GeneratorConfig(seed=0, sample_count=0))
        assert summary.ok and not summary.failures
        assert all(r.samples == len(hand_corpus()) for r in summary.rows)
        assert any("recovery: FAIL" in line for line in summary.negative)
        assert summary.negative[0].startswith("hand:")

    def test_two_atom_samples(self):
        summary = run_corpus(GeneratorConfig(seed=8, atom_count=2, sample_count=200))
        assert summary.ok
        assert all(r.passed == r.samples == 200 + len(hand_corpus()) for r in summary.rows)

    def test_deterministic_summary(self):
        cfg = GeneratorConfig(seed=9, atom_count=3, sample_count=3)
        assert run_corpus(cfg).table() == run_corpus(cfg).table()

    def test_table_format(self):
        summary = run_corpus(GeneratorConfig(seed=3, atom_count=2, sample_count=5),
                             ids=("thm2-bridge", "obs-AAZ"), extra=[TWO])
        lines = summary.table().splitlines()
        assert [c.strip() for c in lines[0].split(" | ")] == ["theorem", "samples", "pass", "fail",
                                         "first-failing-seed"]
        assert lines[1].split()[:3] == ["thm2-bridge", "|", "15"]
        assert lines[1].endswith("| -")

    def test_failures_are_labelled(self, monkeypatch):
        monkeypatch.setattr(oracle, "brutal_contract", lambda e, a: frozenset())
        summary = run_corpus(GeneratorConfig(seed=4, sample_count=3), ids=("thm2-bridge",))
        assert not summary.ok
        assert summary.rows[0].first_failure == "hand:0"
        assert summary.failures[0][0] == "hand:0"
