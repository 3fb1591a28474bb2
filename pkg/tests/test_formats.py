import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelcat.core import FinCategory, two
from kernelcat.io.corpus import build, entry
from kernelcat.io.formats import (ParseError, emit_category, emit_lax, emit_simplicial, parse_category, parse_lax,
                                  parse_simplicial)
from kernelcat.simplicial import supercoherent_nerve, tabulate

from helpers import CORPUS, lax


@pytest.mark.parametrize("name", CORPUS)
def test_category_round_trip(name):
    c = build(name)
    text = emit_category(c, zero=entry(name).zero)
    back = parse_category(text, name=c.name)
    assert back == c
    assert back.zero == entry(name).zero
    assert emit_category(back) == text


def test_two_is_emitted_without_zero():
    data = json.loads(emit_category(two()))
    assert "zero" not in data
    assert data["objects"] == ["0", "1"]


@given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(["finptset2", "finptset3", "nokernel"]))
def test_round_trip_after_relabelling(seed, name):
    c = build(name)
    rng = np.random.default_rng(seed)
    tag = lambda s: f"{s}_{rng.integers(1000)}"  # noqa: E731
    objs = [tag(o) for o in c.objects]
    mors = [f"m{i}_{tag('')}" for i in range(c.n_mor)]
    r = FinCategory(objs, mors, c.dom, c.cod, c.identity, dict(c.composition), name=c.name)
    assert parse_category(emit_category(r)) == r


@pytest.mark.parametrize("name", ["terminal", "finptset2", "finptset3", "finvect2"])
def test_lax_round_trip(name):
    d = lax(name)
    d2, C = parse_lax(emit_lax(d))
    assert C == d.category
    assert np.array_equal(d2.K_obj, d.K_obj)
    assert np.array_equal(d2.K_mor, d.K_mor)
    assert np.array_equal(d2.phi, d.phi)


def test_simplicial_round_trip():
    x = tabulate(supercoherent_nerve(lax("finptset2"), 3), name="nerve")
    text = emit_simplicial(x)
    y = parse_simplicial(text, name="nerve")
    assert emit_simplicial(y) == text
    assert [L.C == M.C for L, M in zip(x.levels, y.levels)] == [True] * 4


def test_emit_simplicial_needs_tables():
    with pytest.raises(TypeError):
        emit_simplicial(supercoherent_nerve(lax("finptset2"), 3))


def _data():
    return json.loads(emit_category(build("finptset2"), zero="star"))


def _expect_error(data, fragment):
    with pytest.raises(ParseError) as err:
        parse_category(json.dumps(data))
    assert fragment in str(err.value)
    return err.value


def test_syntax_error_has_a_line():
    with pytest.raises(ParseError) as err:
        parse_category('{\n "objects": [\n')
    assert err.value.line is not None


def test_unknown_key():
    d = _data()
    d["colour"] = "red"
    _expect_error(d, "colour: unknown key")


def test_dangling_reference():
    d = _data()
    d["morphisms"][0]["cod"] = "Z"
    _expect_error(d, "unknown object 'Z'")


def test_non_composable_entry():
    d = _data()
    d["composition"].append({"g": "X>X[1]", "f": "X>star[0]", "gf": "X>X[1]"})
    _expect_error(d, "is not composable")


def test_duplicate_entry():
    d = _data()
    d["composition"].append(dict(d["composition"][0]))
    _expect_error(d, "given twice")


def test_missing_composite():
    d = _data()
    del d["composition"][0]
    e = _expect_error(d, "missing entry for (g, f)")
    assert e.field == "composition"


def test_duplicate_and_invalid_ids():
    d = _data()
    d["objects"].append("X")
    _expect_error(d, "duplicate id")
    d = _data()
    d["objects"][0] = "has space"
    _expect_error(d, "invalid id")


def test_unknown_zero():
    d = _data()
    d["zero"] = "nowhere"
    _expect_error(d, "zero")


def test_lax_without_zero():
    text = emit_lax(lax("finptset2"))
    data = json.loads(text)
    del data["category"]["zero"]
    with pytest.raises(ParseError) as err:
        parse_lax(json.dumps(data))
    assert err.value.field == "category.zero"


def test_lax_missing_square():
    data = json.loads(emit_lax(lax("finptset2")))
    data["phi"].pop()
    with pytest.raises(ParseError) as err:
        parse_lax(json.dumps(data))
    assert "missing square" in str(err.value)


def test_simplicial_bad_level():
    x = tabulate(supercoherent_nerve(lax("finptset2"), 3))
    data = json.loads(emit_simplicial(x))
    data["faces"][0]["level"] = 9
    with pytest.raises(ParseError) as err:
        parse_simplicial(json.dumps(data))
    assert "out of range" in str(err.value)
