import pytest
from hypothesis import given

from ensconce.ensconcement import (AXIOMS, BeliefSetRepr, Ensconcement, EnsconcementError,
                                   cut_nonstrict, cut_proper, dumps, lift_tautologies, loads,
                                   validate)
from ensconce.logic import UnknownAtomError, entails, parse

from conftest import P, Q, SIG2, ensconcements

E = Ensconcement.of


def fs(*texts):
    return frozenset(parse(t) for t in texts)


class TestValidate:
    def test_conjunction_below_its_conjuncts_violates_first_axiom(self):
        result = validate(E("p q", ("p & q", 0), ("p", 1), ("q", 1)))
        assert not result.ok
        assert [v.axiom for v in result.violations] == [AXIOMS[0]]
        assert result.violations[0].witnesses == (parse("p & q"),)

    def test_disjunction_above_atoms_is_valid(self):
        assert validate(E("p q", ("p", 0), ("q", 0), ("p | q", 1))).ok

    def test_tautology_below_non_tautology(self):
        result = validate(E("p", ("p", 1), ("p | !p", 0)))
        assert AXIOMS[1] in {v.axiom for v in result.violations}

    def test_tautologies_on_different_ranks(self):
        result = validate(E("p", ("p", 0), ("p | !p", 1), ("p -> p", 2)))
        assert {v.axiom for v in result.violations} == {AXIOMS[2]}

    def test_empty_base_is_valid(self):
        assert validate(E("p q")).ok
        assert validate(E("p q")).lines() == ["ok"]

    def test_equivalent_members_must_share_a_rank(self):
        assert not validate(E("p q", ("p", 0), ("!!p", 1))).ok
        assert validate(E("p q", ("p", 1), ("!!p", 1))).ok

    def test_construction_errors(self):
        with pytest.raises(EnsconcementError):
            E("p", ("p", -1))
        with pytest.raises(EnsconcementError):
            E("p", ("p", 0), ("p", 1))
        with pytest.raises(UnknownAtomError):
            Ensconcement(SIG2, [(parse("r"), 0)])


class TestCuts:
    two = E("p q", ("p", 0), ("q", 1))
    diamond = E("p q", ("p", 0), ("q", 0), ("p | q", 1))

    def test_nonstrict(self):
        assert cut_nonstrict(self.two, P) == (fs("p", "q"), True)
        assert cut_nonstrict(self.two, Q).members == fs("q")
        assert cut_nonstrict(self.two, parse("p | !p")).members == frozenset()

    def test_nonstrict_out_of_domain_is_flagged(self):
        cut = cut_nonstrict(E("p q", ("p", 0)), Q)
        assert cut.members == frozenset() and not cut.in_domain

    def test_proper(self):
        assert cut_proper(self.two, P) == fs("q")
        assert cut_proper(self.diamond, P) == fs("p | q")
        assert cut_proper(E("p q", ("p", 0)), Q) == fs("p")

    @given(ensconcements(3))
    def test_proper_cut_of_member_is_strictly_higher(self, e):
        for f, r in e.entries:
            assert cut_proper(e, f) == frozenset(g for g, s in e.entries if s > r)

    @given(ensconcements(2))
    def test_proper_cut_never_entails_non_tautology(self, e):
        from ensconce.logic import enumerate_universe, is_tautology
        for a in enumerate_universe(e.sig):
            if not is_tautology(a, e.sig):
                assert not entails(cut_proper(e, a), a, e.sig)

    @given(ensconcements(2))
    def test_nonstrict_cut_entails_beliefs(self, e):
        from ensconce.logic import enumerate_universe
        for a in enumerate_universe(e.sig):
            cut = cut_nonstrict(e, a)
            assert cut.in_domain == (a in e.belief_set)
            if cut.in_domain:
                assert entails(cut.members, a, e.sig)


class TestBeliefSet:
    def test_membership_by_entailment(self):
        k = BeliefSetRepr([P, Q], SIG2)
        assert parse("p & q") in k and parse("p | !q") in k
        assert parse("!p") not in k
        assert k.consistent
        assert not BeliefSetRepr([P, parse("!p")], SIG2).consistent

    def test_generators_keep_order_without_duplicates(self):
        assert BeliefSetRepr([Q, P, Q], SIG2).generators == (Q, P)


class TestFileFormat:
    def test_loads_with_header_and_comments(self):
        e = loads("# two atoms\natoms p q r\n\n0 : p   # lowest\n1: q\n")
        assert e.sig.atoms == ("p", "q", "r")
        assert e.entries == ((P, 0), (Q, 1))

    def test_signature_inferred_from_atoms(self):
        assert loads("0: q\n1: p & r\n").sig.atoms == ("p", "q", "r")

    def test_strict_rejects_violations(self):
        with pytest.raises(EnsconcementError, match="⪯1"):
            loads("0: p & q\n1: p\n1: q\n")
        assert len(loads("0: p & q\n1: p\n1: q\n", strict=False)) == 3

    def test_lift_repairs_tautology_ranks(self):
        text = "0: p | !p\n1: p\n2: q -> q\n"
        with pytest.raises(EnsconcementError):
            loads(text)
        e = loads(text, lift=True)
        assert e.ranks == (2, 1, 2)

    def test_lift_tautologies_function(self):
        e = lift_tautologies(E("p q", ("p | !p", 0), ("p", 3), ("q", 1)))
        assert e.rank(parse("p | !p")) == 4 and validate(e).ok

    @pytest.mark.parametrize("text", ["0 p\n", "x : p\n", "0 : p &\n", "0: p\natoms p\n"])
    def test_malformed(self, text):
        with pytest.raises(EnsconcementError):
            loads(text)

    @given(ensconcements(3))
    def test_dumps_loads_roundtrip(self, e):
        assert loads(dumps(e)) == e
