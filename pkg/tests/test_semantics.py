import json
import random

import pytest

from lkvr.formula import BOT, TOP, And, Box, Nabla, Not, Prop, diamond, parse
from lkvr.generate import SCHEMAS, Pools, axiom_instance, random_formula
from lkvr.semantics import (
    BULLET, CIRC, CellToken, DefaultToken, Model, ModelFormatError, dump_model, evaluate,
    load_model, model_from_json, model_to_json, oracle_sat, parse_token, token_text,
)

from helpers import extension, random_model

p = Prop("p")


def single():
    return Model(("w",), "w")


def test_vacuous_box_and_nabla():
    assert evaluate(single(), "w", Box(1, BOT))
    assert evaluate(single(), "w", Nabla(1, TOP, "d"))


def test_nabla_fails_on_distinct_values():
    m = Model(("w", "t1", "t2"), "w", {1: frozenset({("w", "t1"), ("w", "t2")})},
              {"t1": frozenset({"p"}), "t2": frozenset({"p"})},
              {("d", "t1"): BULLET, ("d", "t2"): CIRC})
    assert not evaluate(m, "w", Nabla(1, p, "d"))
    assert evaluate(m, "w", Nabla(1, Not(p), "d"))
    assert evaluate(m, "w", Nabla(2, p, "d"))  # unknown agent: empty relation


def test_unknown_world():
    with pytest.raises(KeyError):
        evaluate(single(), "nope", p)


def test_model_validation():
    with pytest.raises(ModelFormatError):
        Model(("w",), "v")
    with pytest.raises(ModelFormatError):
        Model(("w",), "w", {1: frozenset({("w", "x")})})
    with pytest.raises(ModelFormatError):
        Model(("w", "w"), "w")


@pytest.mark.parametrize("tok", [BULLET, CIRC, DefaultToken(3), CellToken(),
                                 CellToken.of([p, parse("[1]q & r")])])
def test_token_round_trip(tok):
    assert parse_token(token_text(tok)) == tok


def test_token_errors_and_distinctness():
    for bad in ["", "default:x", "cell:p", "blob"]:
        with pytest.raises(ModelFormatError):
            parse_token(bad)
    assert len({BULLET, CIRC, DefaultToken(0), CellToken()}) == 4


def test_json_round_trip(tmp_path):
    rng = random.Random(3)
    for _ in range(20):
        m = random_model(rng)
        path = tmp_path / "m.json"
        dump_model(m, path)
        back = load_model(path)
        assert model_to_json(back) == model_to_json(m)
        assert json.loads(path.read_text()) == model_to_json(m)


def test_json_errors():
    with pytest.raises(ModelFormatError):
        model_from_json({"worlds": ["a"], "root": "b"})
    with pytest.raises(ModelFormatError):
        model_from_json({"worlds": ["a"], "root": "a", "values": {"a": {"d": "nope"}}})


def test_oracle_examples():
    assert oracle_sat(And(p, Not(p)), 3, 2) is None
    f = Not(Nabla(1, TOP, "d"))
    m = oracle_sat(f, 3, 2)
    kids = m.successors(1, m.root)
    assert len(kids) == 2 and m.value("d", kids[0]) != m.value("d", kids[1])
    assert evaluate(m, m.root, f)
    g = And(And(Nabla(1, p, "d"), diamond(1, p)), diamond(1, Not(p)))
    m = oracle_sat(g, 3, 2)
    assert m is not None and evaluate(m, m.root, g)
    pw = [w for w in m.successors(1, m.root) if m.holds("p", w)]
    assert pw and len({m.value("d", w) for w in pw}) == 1
    assert any(not m.holds("p", w) for w in m.successors(1, m.root))


def test_oracle_bounds():
    with pytest.raises(ValueError):
        oracle_sat(p, 0, 1)
    with pytest.raises(ValueError):
        oracle_sat(p, 1, 0)


def test_oracle_methods_agree():
    rng = random.Random(11)
    pools = Pools(agents=2, props=2, names=1)
    for _ in range(150):
        f = random_formula(rng, 7, pools)
        a = oracle_sat(f, 2, 2, method="sat")
        b = oracle_sat(f, 2, 2, method="enumerate")
        assert (a is None) == (b is None)
        if a is not None:
            assert model_to_json(a) == model_to_json(b)
            assert evaluate(a, a.root, f)


def test_evaluate_matches_reference():
    rng = random.Random(5)
    for _ in range(300):
        m = random_model(rng, n_worlds=rng.randint(1, 4))
        f = random_formula(rng, 10)
        ext = extension(m, f)
        assert all(evaluate(m, w, f) == (w in ext) for w in m.worlds)


@pytest.mark.parametrize("schema", SCHEMAS)
def test_axioms_valid_on_random_models(schema):
    rng = random.Random(SCHEMAS.index(schema))
    for _ in range(150):
        m = random_model(rng, n_worlds=rng.randint(1, 4))
        f = axiom_instance(rng, schema)
        assert all(evaluate(m, w, f) for w in m.worlds), f


def test_diamond_reads_as_some_successor():
    rng = random.Random(9)
    for _ in range(100):
        m = random_model(rng)
        for w in m.worlds:
            some = any(m.holds("p", v) for v in m.successors(1, w))
            assert evaluate(m, w, diamond(1, p)) == some
