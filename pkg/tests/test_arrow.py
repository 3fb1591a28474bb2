import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelcat.arrow import (NotPointed, arrow_on_functor, build_arrow_category, check_comonad_laws,
                             comonad_structure, make_pointed)
from kernelcat.core import Functor, two, validate_category
from kernelcat.core.functor import compose_functors, functor_violation
from kernelcat.io.corpus import build

import oracles
from helpers import ALL_POINTED, CORPUS, pointed


@pytest.mark.parametrize("name", CORPUS)
def test_comonad_laws_hold(name):
    assert check_comonad_laws(build(name)) == []


@pytest.mark.parametrize("name", ["terminal", "two", "finptset2"])
def test_arrow_category_is_a_category(name):
    A = build_arrow_category(build(name))
    assert validate_category(A.category).ok


@pytest.mark.parametrize("name", ["two", "finptset2"])
def test_delta_and_epsilon_are_functors(name):
    cd = comonad_structure(build(name))
    assert functor_violation(cd.delta_functor()) is None
    assert functor_violation(cd.epsilon_functor()) is None


@pytest.mark.parametrize("name", ["two", "finptset2"])
def test_counit_through_explicit_functors(name):
    # A(eps) . delta = 1 and eps_A . delta = 1, with the nested A(A(C)) built explicitly
    cd = comonad_structure(build(name))
    delta = cd.delta_functor()
    AA = delta.target.arrow
    eps_outer = Functor(AA.category, AA.base, AA.base.dom, AA.h0, check=False)
    both = compose_functors(eps_outer, delta)
    assert both.mor_map.tolist() == list(range(cd.arrow.n_squares))


@pytest.mark.parametrize("name", ["finptset2", "finvect2"])
@given(data=st.data())
def test_square_composition_pastes_edges(name, data):
    A = build_arrow_category(build(name))
    C = A.base
    s = data.draw(st.integers(0, A.n_squares - 1))
    outs = np.nonzero(A.f == A.g[s])[0]
    t = int(data.draw(st.sampled_from(outs.tolist())))
    ts = int(A.compose(np.array([t]), np.array([s]))[0])
    assert ts >= 0
    assert A.h0[ts] == C.compose(int(A.h0[t]), int(A.h0[s]))
    assert A.h1[ts] == C.compose(int(A.h1[t]), int(A.h1[s]))
    assert (A.f[ts], A.g[ts]) == (A.f[s], A.g[t])


def test_arrow_on_functor():
    c = two()
    const0 = Functor(c, c, [0, 0], [0, 0, 0])
    F = arrow_on_functor(const0)
    assert functor_violation(F) is None
    assert set(F.obj_map.tolist()) == {0}


@pytest.mark.parametrize("name", ALL_POINTED)
def test_pointed_structure(name):
    p = pointed(name)
    C = p.category
    assert p.check_coalgebra() == []
    assert functor_violation(p.beta_functor()) is None
    for a in range(C.n_obj):
        for b in range(C.n_obj):
            assert p.zero_mor[a, b] == oracles.zero_map(C, p.zero, a, b)


@pytest.mark.parametrize("name", ALL_POINTED)
@given(data=st.data())
def test_zero_morphisms_absorb(name, data):
    p = pointed(name)
    C = p.category
    f = data.draw(st.integers(0, C.n_mor - 1))
    a, b = int(C.dom[f]), int(C.cod[f])
    x = data.draw(st.integers(0, C.n_obj - 1))
    assert C.compose(f, int(p.zero_mor[x, a])) == p.zero_mor[x, b]
    assert C.compose(int(p.zero_mor[b, x]), f) == p.zero_mor[a, x]


def test_two_is_not_pointed():
    with pytest.raises(NotPointed) as err:
        make_pointed(two(), None)
    assert "no zero object" in str(err.value)
    with pytest.raises(NotPointed):
        make_pointed(two(), "0")


def test_wrong_zero_is_rejected():
    with pytest.raises(NotPointed):
        make_pointed(build("finptset2"), "X")
