import pickle

import pytest
from hypothesis import given, settings

from lkvr.formula import (
    BOT, TOP, And, Box, FormulaSyntaxError, Nabla, Not, Prop, SymbolError, agents,
    canonical, depth, diamond, disj, implies, parse, size, sub_plus, subformulas,
    to_sugar, to_text, validate, value_names,
)

from strategies import formulas

p, q = Prop("p"), Prop("q")


@pytest.mark.parametrize("text, expected", [
    ("Kv1(p & q, d)", Nabla(1, And(p, q), "d")),
    ("<1>p", Not(Box(1, Not(p)))),
    ("F", Not(TOP)),
    ("p | q", Not(And(Not(p), Not(q)))),
    ("p -> q", Not(And(p, Not(q)))),
    ("p -> q -> p", implies(p, implies(q, p))),
    ("p & q | p", disj(And(p, q), p)),
    ("~~p", Not(Not(p))),
    ("[12] T", Box(12, TOP)),
    ("  (p)  ", p),
])
def test_parse_examples(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (Nabla(1, TOP, "d"), "Kv1(T, d)"),
    (Not(Not(p)), "~~p"),
    (And(p, Box(2, q)), "(p & [2]q)"),
])
def test_print_examples(f, text):
    assert to_text(f) == text
    assert parse(text) == f


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p & & q")
    assert e.value.pos == 4


@pytest.mark.parametrize("text", ["[0]p", "Kv0(p, d)", "Kv1(p, )"])
def test_symbol_errors(text):
    with pytest.raises(SymbolError):
        parse(text)


@pytest.mark.parametrize("text", ["", "p q", "(p", "Kv1(p, q)", "dog", "[x]p", "p ; q"])
def test_malformed(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_validate_rejects_bad_nodes():
    with pytest.raises(SymbolError):
        validate(Box(0, p))
    with pytest.raises(SymbolError):
        validate(Nabla(1, p, "x"))
    assert validate(Nabla(1, p, "d")) == Nabla(1, p, "d")


def test_sub_plus_examples():
    assert sub_plus(Box(1, p)) == {Box(1, p), p, Not(Box(1, p)), Not(p)}
    n = Nabla(1, p, "d")
    assert sub_plus(n) == {n, p, Not(n), Not(p)}
    assert sub_plus(TOP) == {TOP, BOT}


def test_depth_examples():
    assert depth(p) == 0
    assert depth(Nabla(1, Box(2, p), "d")) == 2
    assert depth(And(Box(1, TOP), q)) == 1


def test_value_names_examples():
    assert value_names(Nabla(1, Nabla(2, p, "d2"), "d1")) == {"d1", "d2"}
    assert value_names(p) == frozenset()
    assert value_names(And(Nabla(1, TOP, "d"), Nabla(2, TOP, "d"))) == {"d"}


def test_immutable_and_hashable():
    f = parse("[1]p & q")
    with pytest.raises(AttributeError):
        f.left = q
    assert hash(f) == hash(parse("([1]p & q)"))
    assert pickle.loads(pickle.dumps(f)) == f


def test_canonical_order_is_textual():
    xs = [q, Not(p), p, Box(1, p)]
    assert [to_text(f) for f in canonical(xs)] == sorted(to_text(f) for f in xs)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_round_trip(f):
    assert parse(to_text(f)) == f
    assert parse(to_sugar(f)) == f


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_closure_invariants(f):
    sp = sub_plus(f)
    for g in sp:
        for c in g.children():
            assert c in sp or Not(c) in sp
    assert len(sp) <= 2 * size(f)
    assert depth(f) <= size(f)
    assert subformulas(f) <= sp


@settings(max_examples=100, deadline=None)
@given(formulas, formulas)
def test_depth_of_sugar(a, b):
    assert depth(diamond(1, a)) == depth(Box(1, a))
    assert depth(implies(a, b)) == depth(And(a, b)) == depth(disj(a, b))
    assert agents(Box(3, a)) >= {3}
