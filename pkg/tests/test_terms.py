"""Surface syntax: parsing, precedence, pretty-printing, desugaring."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from gkat_workbench.terms import (
    Arrow,
    Atom,
    Halt,
    If,
    IfThen,
    One,
    ParseError,
    Plus,
    Seq,
    SeqProg,
    Skip,
    Sort,
    SortError,
    Star,
    Var,
    While,
    Zero,
    desugar,
    free_vars,
    mk_arrow,
    mk_not,
    parse_program,
    parse_term,
    pretty,
    sort_of,
)

SORTS = {name: Sort.TEST for name in "abcd"} | {name: Sort.PROGRAM for name in "pqrs"}

_a, _b = Var("a", Sort.TEST), Var("b", Sort.TEST)
_p, _q = Var("p", Sort.PROGRAM), Var("q", Sort.PROGRAM)


def test_plus_binds_loosest():
    assert parse_term("a+b;p", SORTS) == Plus(_a, Seq(_b, _p))


def test_star_and_not_bind_tightest():
    assert parse_term("!a;p", SORTS) == Seq(mk_not(_a), _p)
    assert parse_term("p;q*", SORTS) == Seq(_p, Star(_q))
    assert parse_term("(p+q)*", SORTS) == Star(Plus(_p, _q))


def test_binary_operators_associate_left():
    assert parse_term("p;q;r", SORTS) == Seq(Seq(_p, _q), Var("r", Sort.PROGRAM))
    assert parse_term("p+q+r", SORTS) == Plus(Plus(_p, _q), Var("r", Sort.PROGRAM))


def test_arrow_associates_right():
    assert parse_term("a->b->a", SORTS) == Arrow(_a, Arrow(_b, _a))


def test_bang_is_arrow_into_zero():
    assert parse_term("!a", SORTS) == Arrow(_a, Zero())
    assert parse_term("a -> 0", SORTS) == mk_not(_a)
    assert pretty(Arrow(_a, Zero())) == "!a"


def test_constants_parse():
    assert parse_term("0+1", SORTS) == Plus(Zero(), One())


@pytest.mark.parametrize("bad", ["a +", "(a", "p *;", "if", "a & b", "p q"])
def test_malformed_input_raises(bad):
    with pytest.raises(ParseError):
        parse_term(bad, SORTS)


def test_unknown_identifier_lists_known_names():
    with pytest.raises(ParseError, match="unknown identifier 'z'"):
        parse_term("z", SORTS)


def test_arrow_rejects_program_operands():
    with pytest.raises(SortError, match="must be test-sorted"):
        parse_term("p->a", SORTS)
    with pytest.raises(SortError):
        mk_arrow(_p, _a)


def test_sorts_of_compound_terms():
    assert sort_of(Plus(_a, _b)) is Sort.TEST
    assert sort_of(Seq(_a, _p)) is Sort.PROGRAM
    assert sort_of(Star(_a)) is Sort.PROGRAM
    assert sort_of(Arrow(_a, _b)) is Sort.TEST


def test_free_vars_in_first_occurrence_order():
    t = parse_term("q;(a+p)+q", SORTS)
    assert free_vars(t) == (_q, _a, _p)


def test_free_vars_rejects_sort_conflicts():
    clash = Plus(Var("x", Sort.TEST), Var("x", Sort.PROGRAM))
    with pytest.raises(SortError, match="two different sorts"):
        free_vars(clash)


# -- while-programs ----------------------------------------------------------


def test_program_surface_forms():
    prog = parse_program("while a do { p }; q", SORTS)
    assert prog == SeqProg(While(_a, Atom("p", Sort.PROGRAM)), Atom("q", Sort.PROGRAM))


def test_desugar_shapes():
    ap = Atom("p", Sort.PROGRAM)
    aq = Atom("q", Sort.PROGRAM)
    assert desugar(Skip()) == One()
    assert desugar(Halt()) == Zero()
    assert desugar(While(_a, ap)) == Seq(Star(Seq(_a, _p)), mk_not(_a))
    assert desugar(If(_a, ap, aq)) == Plus(Seq(_a, _p), Seq(mk_not(_a), _q))
    assert desugar(IfThen(_a, ap)) == Plus(Seq(_a, _p), mk_not(_a))


def test_program_guard_must_be_test():
    with pytest.raises(SortError, match="must be test-sorted"):
        parse_program("while p do { q }", SORTS)


def test_if_without_else_parses():
    prog = parse_program("if a+b then { p }", SORTS)
    assert prog == IfThen(Plus(_a, _b), Atom("p", Sort.PROGRAM))


def test_reserved_words_stay_reserved():
    with pytest.raises(ParseError, match="reserved word"):
        parse_term("while", SORTS)


# -- generated round-trips ---------------------------------------------------

_test_leaves = st.one_of(
    st.builds(Zero),
    st.builds(One),
    st.sampled_from("abcd").map(lambda n: Var(n, Sort.TEST)),
)

test_terms = st.recursive(
    _test_leaves,
    lambda inner: st.one_of(
        st.builds(Plus, inner, inner),
        st.builds(Seq, inner, inner),
        st.builds(Arrow, inner, inner),
    ),
    max_leaves=12,
)

program_terms = st.recursive(
    st.one_of(_test_leaves, st.sampled_from("pqrs").map(lambda n: Var(n, Sort.PROGRAM))),
    lambda inner: st.one_of(
        st.builds(Plus, inner, inner),
        st.builds(Seq, inner, inner),
        st.builds(Star, inner),
        st.builds(Arrow, inner.filter(lambda t: sort_of(t) is Sort.TEST),
                  inner.filter(lambda t: sort_of(t) is Sort.TEST)),
    ),
    max_leaves=12,
)


class TestRoundTrips:
    @given(program_terms)
    def test_pretty_then_parse_is_identity(self, t):
        assert parse_term(pretty(t), SORTS) == t

    @given(test_terms)
    def test_test_terms_stay_test_sorted(self, t):
        assert sort_of(t) is Sort.TEST
        assert parse_term(pretty(t), SORTS) == t

    @given(program_terms)
    def test_free_vars_are_exactly_the_named_leaves(self, t):
        names = {v.name for v in free_vars(t)}
        assert names == {tok for tok in pretty(t).replace("(", " ") if tok.isalpha()}
