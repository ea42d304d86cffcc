import pytest
from hypothesis import given, settings, strategies as st

from khow.formula import (Atom, BOT, Bot, Kh, KhAtom, Not, Or, ParseError, TOP,
                          conj, implies, kh_atoms, parse, prop_atoms, render,
                          subformulas, universally)

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def test_parse_kh():
    assert parse("Kh[i](p, q)", ["i"]) == Kh("i", P, Q)


def test_parse_universal_single_agent_collapses():
    assert parse("A (p -> p)", ["i"]) == Kh("i", Not(Or(Not(P), P)), BOT)


def test_parse_conjunction_desugars():
    assert parse("p & ~p", ["i"]) == Not(Or(Not(P), Not(Not(P))))


def test_parse_implication_and_equiv():
    assert parse("p -> q", ["i"]) == Or(Not(P), Q)
    assert parse("p <-> q", ["i"]) == conj(implies(P, Q), implies(Q, P))


def test_parse_universal_two_agents():
    f = parse("A p", ["i", "j"])
    assert f == Or(Kh("i", Not(P), BOT), Kh("j", Not(P), BOT))
    assert f == universally(P, ["i", "j"])


def test_parse_existential():
    assert parse("E p", ["i"]) == Not(Kh("i", Not(Not(P)), BOT))


def test_precedence():
    # ~, A, E bind tightest; & over |; -> loosest and right-associative
    assert parse("~p | q", ["i"]) == Or(Not(P), Q)
    assert parse("p & q | r", ["i"]) == Or(conj(P, Q), R)
    assert parse("p -> q -> r", ["i"]) == implies(P, implies(Q, R))
    assert parse("A p -> p", ["i"]) == implies(universally(P, ["i"]), P)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("p |", ["i"])
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse("Kh[k](p, q)", ["i"])  # unknown agent
    with pytest.raises(ValueError):
        parse("p", [])  # empty agent list


def test_parse_rejects_garbage():
    for bad in ["", "p q", "Kh[i](p)", "(p", "p # q"]:
        with pytest.raises(ParseError):
            parse(bad, ["i"])


def test_render_goldens():
    assert render(Kh("i", P, Q)) == "Kh[i](p, q)"
    assert render(parse("(p | q) | r", ["i"])) == "(p | q) | r"
    assert render(BOT) == "bot"
    assert render(Not(Or(P, Q))) == "~(p | q)"


def test_subformulas_postorder_dedup():
    assert subformulas(P) == [P]
    assert subformulas(Kh("i", P, Q)) == [P, Q, Kh("i", P, Q)]
    assert subformulas(Or(P, P)) == [P, Or(P, P)]


def test_kh_atoms():
    assert kh_atoms(Or(P, Q)) == []
    assert kh_atoms(Or(Kh("i", P, Q), Kh("j", Q, R))) == [
        KhAtom("i", P, Q), KhAtom("j", Q, R)]
    nested = Kh("i", Kh("i", P, Q), R)
    assert kh_atoms(nested) == [KhAtom("i", P, Q), KhAtom("i", nested.cond, R)]


def test_prop_atoms_sorted():
    assert prop_atoms(Or(R, Or(P, P))) == ["p", "r"]


AGENTS = ("i", "j")


def formulas(max_leaves=6):
    leaf = st.one_of(
        st.sampled_from([P, Q, R, TOP, BOT]),
    )
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(st.sampled_from(AGENTS), sub, sub).map(lambda t: Kh(*t)),
        ),
        max_leaves=max_leaves,
    )


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_render_parse_round_trip(f):
    assert parse(render(f), AGENTS) == f


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_subformula_count_bounded_by_node_count(f):
    def nodes(g):
        if isinstance(g, Not):
            return 1 + nodes(g.sub)
        if isinstance(g, Or):
            return 1 + nodes(g.left) + nodes(g.right)
        if isinstance(g, Kh):
            return 1 + nodes(g.cond) + nodes(g.goal)
        return 1

    assert len(subformulas(f)) <= nodes(f)
