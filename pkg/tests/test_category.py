import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelcat.arrow import build_arrow_category
from kernelcat.core import (CategoryError, FinCategory, Functor, FunctorError, NatTransformation, NaturalityError,
                            ResourceLimit, chain, compose_functors, cube_category, enumerate_diagrams,
                            identity_functor, interval_monoid, ordinal, product_category, terminal, two,
                            validate_category, vert_compose)
from kernelcat.io.corpus import build, corpus
from kernelcat.simplicial import nerve

import oracles
from helpers import CORPUS

# Values computed by the brute-force oracle once and frozen here.
FROZEN = {
    "terminal": dict(objects=1, morphisms=1, zeros=[0], squares=1, chains=[1, 1, 1], nerve_mor=[1, 1, 1]),
    "two": dict(objects=2, morphisms=3, zeros=[], squares=6, chains=[2, 3, 4], nerve_mor=[3, 6, 10]),
    "finptset2": dict(objects=2, morphisms=5, zeros=[0], squares=39, chains=[2, 5, 13], nerve_mor=[5, 39, 322]),
    "finptset3": dict(objects=3, morphisms=23, zeros=[0], squares=3639, chains=[3, 23, 233],
                      nerve_mor=[23, 3639, 731597]),
    "finvect2": dict(objects=3, morphisms=31, zeros=[0], squares=12381, chains=[3, 31, 499], nerve_mor=[31, 12381]),
    "nokernel": dict(objects=5, morphisms=32, zeros=[0], squares=1617, chains=[5, 32, 207]),
}
SMALL = ["terminal", "two", "finptset2"]


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_categories_validate(name):
    rep = validate_category(build(name))
    assert rep.ok, [str(v) for v in rep]


@pytest.mark.parametrize("name", CORPUS)
def test_sizes_and_zero_objects_frozen(name):
    c = build(name)
    f = FROZEN[name]
    assert (c.n_obj, c.n_mor) == (f["objects"], f["morphisms"])
    assert oracles.zero_objects(c) == f["zeros"]


@pytest.mark.parametrize("name", CORPUS)
def test_square_count_matches_oracle(name):
    A = build_arrow_category(build(name))
    assert A.n_squares == FROZEN[name]["squares"]
    if name in SMALL + ["nokernel"]:
        assert len(oracles.commuting_squares(build(name))) == FROZEN[name]["squares"]


@pytest.mark.parametrize("name", CORPUS)
def test_chain_counts(name):
    c = build(name)
    for n, expected in enumerate(FROZEN[name]["chains"]):
        assert len(nerve(c, n).objects()) == expected
        assert len(oracles.chains(c, n)) == expected


@pytest.mark.parametrize("name", [n for n in CORPUS if "nerve_mor" in FROZEN[n]])
def test_nerve_morphism_counts(name):
    c = build(name)
    for n, expected in enumerate(FROZEN[name]["nerve_mor"]):
        assert len(nerve(c, n, cap=10**6).morphisms()) == expected
        if name in SMALL:
            assert oracles.chain_morphism_count(c, n) == expected


def test_finvect2_endomorphisms_of_the_plane():
    c = build("finvect2")
    v2 = c.obj("V2")
    assert len(c.hom(v2, v2)) == 16
    assert len(oracles.hom(c, v2, v2)) == 16


def test_two_has_no_zero_object():
    assert oracles.zero_objects(two()) == []


def test_corpus_order_and_expectations():
    names = [e.name for e in corpus()]
    assert names == ["terminal", "finptset2", "finptset3", "finvect2", "nokernel", "two"]
    exp = {e.name: e.expectation for e in corpus()}
    assert exp["nokernel"] == "missing_kernel"
    assert exp["two"] == "not_pointed"


@pytest.mark.parametrize("name", CORPUS)
@given(data=st.data())
def test_associativity_on_random_triples(name, data):
    c = build(name)
    f = data.draw(st.integers(0, c.n_mor - 1))
    g = data.draw(st.sampled_from([m for m in range(c.n_mor) if c.dom[m] == c.cod[f]]))
    h = data.draw(st.sampled_from([m for m in range(c.n_mor) if c.dom[m] == c.cod[g]]))
    assert c.compose(h, c.compose(g, f)) == c.compose(c.compose(h, g), f)


@pytest.mark.parametrize("name", CORPUS)
@given(data=st.data())
def test_units_on_random_morphisms(name, data):
    c = build(name)
    f = data.draw(st.integers(0, c.n_mor - 1))
    assert c.compose(int(c.identity[c.cod[f]]), f) == f
    assert c.compose(f, int(c.identity[c.dom[f]])) == f


def _broken_two():
    # 0 -> 1 with a second parallel arrow b, but b composed with 1_0 gives a
    return FinCategory(["0", "1"], ["0", "1", "a", "b"], [0, 1, 0, 0], [0, 1, 1, 1], [0, 1],
                       {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2, (3, 0): 2, (1, 3): 3})


def test_validation_names_the_broken_unit():
    rep = validate_category(_broken_two())
    assert not rep.ok
    assert [v.law for v in rep] == ["right-unit"]


def test_validation_reports_missing_composite():
    c = two()
    comp = dict(c.composition)
    del comp[(1, 2)]
    rep = validate_category(FinCategory(c.objects, c.morphisms, c.dom, c.cod, c.identity, comp))
    assert [v.law for v in rep] == ["composition-missing"]


def test_from_names_rejects_unknown_ids():
    with pytest.raises(CategoryError):
        FinCategory.from_names(["a"], [("1a", "a", "b")], {"a": "1a"}, [])
    with pytest.raises(CategoryError):
        FinCategory.from_names(["a"], [("1a", "a", "a")], {"a": "1a"}, [("1a", "1a", "x")])


def test_shapes():
    assert (ordinal(3).n_obj, ordinal(3).n_mor) == (4, 10)
    assert (cube_category(2).n_obj, cube_category(2).n_mor) == (4, 9)
    assert product_category(two(), two()).n_mor == 9
    assert terminal().n_mor == 1
    for c in (ordinal(3), cube_category(3), product_category(two(), two())):
        assert validate_category(c).ok


def test_interval_monoid_laws():
    assert interval_monoid().check() == []


def test_chain_diagrams_in_two_are_monotone_sequences():
    # diagrams [n] -> 2 are the n + 2 monotone 0/1 strings
    for n in range(4):
        assert len(enumerate_diagrams(chain(n), two())) == n + 2


def test_resource_cap_is_enforced():
    with pytest.raises(ResourceLimit):
        nerve(build("finptset3"), 3, cap=1000).morphisms()


def test_functor_checks():
    c = two()
    ident = identity_functor(c)
    assert compose_functors(ident, ident).mor_map.tolist() == [0, 1, 2]
    # collapsing everything onto object 0 is a functor; swapping objects is not
    Functor(c, c, [0, 0], [0, 0, 0])
    with pytest.raises(FunctorError):
        Functor(c, c, [1, 0], [1, 0, 2])


def test_natural_transformations():
    c = two()
    const0 = Functor(c, c, [0, 0], [0, 0, 0])
    ident = identity_functor(c)
    # the components (1_0, a) form a transformation const0 => 1
    eta = NatTransformation(const0, ident, [0, 2])
    assert vert_compose(NatTransformation(ident, ident, [0, 1]), eta).components.tolist() == [0, 2]
    with pytest.raises(NaturalityError):
        NatTransformation(ident, const0, [0, 2])


def test_dense_table_agrees_with_dictionary():
    c = build("finptset3")
    T = c.table()
    for (g, f), gf in c.composition.items():
        assert T[g, f] == gf
    assert np.count_nonzero(T >= 0) == len(c.composition)
