import itertools

import pytest
from hypothesis import given, strategies as st

from ensconce.logic import (BOTTOM, TOP, And, Atom, CeilingExceeded, Iff, Implies, Not,
                            Or, ParseError, Signature, SignatureError, UnknownAtomError,
                            canonical, closed_set_equal, entails, enumerate_universe,
                            equivalent, expand, is_tautology, parse, probe_order, render,
                            simplest, table, truth_table)

from conftest import P, Q, R, SIG2, SIG3, formulas


def evaluate(f, val):
    """Reference evaluator, kept deliberately naive."""
    if isinstance(f, Atom):
        return val[f.name]
    if f == TOP:
        return True
    if f == BOTTOM:
        return False
    if isinstance(f, Not):
        return not evaluate(f.operand, val)
    a, b = evaluate(f.left, val), evaluate(f.right, val)
    return {And: a and b, Or: a or b, Implies: (not a) or b, Iff: a == b}[type(f)]


def valuations(sig):
    for bits in itertools.product([False, True], repeat=len(sig)):
        yield dict(zip(sig.atoms, bits))


class TestParse:
    def test_precedence(self):
        assert parse("p & q -> r") == Implies(And(P, Q), R)
        assert parse("!p | p") == Or(Not(P), P)

    def test_implication_is_right_associative(self):
        assert parse("p -> q -> r") == Implies(P, Implies(Q, R))

    def test_iff_and_or_are_left_associative(self):
        assert parse("p <-> q <-> r") == Iff(Iff(P, Q), R)
        assert parse("p | q | r") == Or(Or(P, Q), R)

    def test_constants_and_nesting(self):
        assert parse("!!true & (false | p)") == And(Not(Not(TOP)), Or(BOTTOM, P))

    def test_unbalanced_paren_offset(self):
        with pytest.raises(ParseError) as exc:
            parse("p <-> (q")
        assert exc.value.offset == 9

    @pytest.mark.parametrize("text", ["", "p &", "& p", "p q", "(p", "p)", "p => q", "!"])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse(text)

    def test_unknown_atom_named(self):
        with pytest.raises(UnknownAtomError) as exc:
            parse("p & s", SIG2)
        assert exc.value.name == "s"

    def test_keywords_are_not_atoms(self):
        assert parse("true") == TOP
        with pytest.raises(SignatureError):
            Signature(["true"])

    @given(formulas())
    def test_render_parse_roundtrip(self, f):
        assert parse(render(f)) == f

    def test_render_spacing(self):
        assert render(parse("(p&q)->(r|!p)")) == "p & q -> r | !p"
        assert render(Implies(Implies(P, Q), R)) == "(p -> q) -> r"
        assert render(Not(And(P, Q))) == "!(p & q)"


class TestSemantics:
    @given(formulas())
    def test_table_matches_reference_evaluator(self, f):
        t = truth_table(f, SIG3)
        assert t.size == 8
        assert list(t) == [evaluate(f, v) for v in valuations(SIG3)]

    def test_entails_examples(self):
        assert entails({P, Implies(P, Q)}, Q, SIG2)
        assert entails(set(), Or(P, Not(P)), SIG2)
        assert not entails({P}, Q, SIG2)

    def test_tautology_examples(self):
        assert is_tautology(parse("p | !p"), SIG2)
        assert not is_tautology(parse("p & q"), SIG2)
        assert is_tautology(parse("(p -> q) | (q -> p)"), SIG2)

    def test_closed_set_equal_examples(self):
        assert closed_set_equal({P, Q}, {And(P, Q)}, SIG2)
        assert not closed_set_equal({P}, {Or(P, Q)}, SIG2)
        assert closed_set_equal({Q, Or(P, Q)}, {Q}, SIG2)

    def test_expand(self):
        assert expand({Q}, P) == {Q, P}
        assert expand({P}, P) == {P}
        assert expand(set(), And(P, Q)) == {And(P, Q)}

    @given(st.lists(formulas(), max_size=4), formulas(), formulas())
    def test_deduction(self, base, a, b):
        assert entails(set(base) | {a}, b, SIG3) == entails(base, Implies(a, b), SIG3)

    @given(st.lists(formulas(), max_size=4), st.lists(formulas(), max_size=3), formulas())
    def test_tarskian_properties(self, xs, ys, f):
        for x in xs:
            assert entails(xs, x, SIG3)                      # inclusion
        if entails(xs, f, SIG3):
            assert entails(xs + ys, f, SIG3)                 # monotony
        closure = enumerate_universe(SIG2)
        if all(a in ("p", "q") for g in xs for a in g.atoms()):
            cn = [g for g in closure if entails(xs, g, SIG2)]
            for g in closure:                                # iteration
                assert entails(cn, g, SIG2) == entails(xs, g, SIG2)


class TestUniverse:
    @pytest.mark.parametrize("n,size", [(0, 2), (1, 4), (2, 16), (3, 256)])
    def test_counts(self, n, size):
        sig = Signature(["p", "q", "r"][:n])
        assert len(enumerate_universe(sig)) == size

    def test_pairwise_inequivalent_and_indexed_by_table(self):
        for sig in (SIG2, SIG3):
            u = enumerate_universe(sig)
            assert [table(f, sig) for f in u] == list(range(len(u)))

    def test_empty_signature(self):
        assert enumerate_universe(Signature()) == [BOTTOM, TOP]

    def test_ceiling(self):
        assert len(enumerate_universe(Signature.of("a b c d"))) == 65536
        with pytest.raises(CeilingExceeded):
            Signature.of("a b c d e")

    def test_canonical_is_full_dnf(self):
        assert canonical(0, SIG2) == BOTTOM
        assert canonical(SIG2.full, SIG2) == TOP
        assert render(canonical(table(P, SIG2), SIG2)) == "p & !q | p & q"

    def test_simplest_forms_are_short_and_correct(self):
        for sig in (SIG2, SIG3):
            for t in range(sig.universe_size):
                f = simplest(t, sig)
                assert table(f, sig) == t
        assert render(simplest(table(parse("p & !q"), SIG2), SIG2)) == "p & !q"

    def test_probe_order_is_a_permutation_starting_small(self):
        order = probe_order(SIG2)
        assert sorted(order) == list(range(16))
        assert [render(simplest(t, SIG2)) for t in order[:4]] == ["false", "true", "p", "q"]

    @given(formulas(), formulas())
    def test_equivalence_is_table_equality(self, f, g):
        assert equivalent(f, g, SIG3) == (table(f, SIG3) == table(g, SIG3))
