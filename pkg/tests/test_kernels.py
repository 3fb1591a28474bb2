import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelcat.arrow import KernelSystem, MissingKernel, find_kernels, is_universal, make_pointed, universal_kernels
from kernelcat.io.corpus import build

import oracles
from helpers import ALL_POINTED, KERNEL_BEARING, kernels, pointed


@pytest.mark.parametrize("name", ALL_POINTED)
def test_choice_matches_oracle(name):
    p = pointed(name)
    expected, missing = oracles.kernel_choice(p.category, p.zero)
    assert missing is None
    assert kernels(name).kappa.tolist() == expected


@pytest.mark.parametrize("name", ALL_POINTED)
def test_universal_candidates_match_oracle(name):
    p = pointed(name)
    C = p.category
    for f in range(C.n_mor):
        assert universal_kernels(p, f) == oracles.universal_kernels(C, p.zero, f)


@pytest.mark.parametrize("name", ALL_POINTED)
def test_chosen_system_has_no_violations(name):
    assert kernels(name).violations() == []


def test_finptset2_kernel_is_preimage_of_basepoint():
    ks = kernels("finptset2")
    C = ks.category
    # X -> X sending the point to the basepoint has kernel X itself
    f = C.mor("X>X[0]")
    assert C.objects[ks.ker[f]] == "X"
    assert C.morphisms[ks.kappa[f]] == "X>X[1]"
    # the identity of X has kernel the zero object
    assert C.objects[ks.ker[C.mor("X>X[1]")]] == "star"


def test_missing_kernel_names_the_witness():
    c = build("nokernel")
    p = make_pointed(c, "z")
    with pytest.raises(MissingKernel) as err:
        find_kernels(p)
    assert err.value.morphism == "a>b"
    _, witness = oracles.kernel_choice(c, p.zero)
    assert c.morphisms[witness] == "a>b"


def test_finvect2_has_several_kernels_for_zero_maps_out_of_the_plane():
    p = pointed("finvect2")
    C = p.category
    multi = [f for f in range(C.n_mor) if len(universal_kernels(p, f)) >= 2]
    assert multi
    for f in multi:
        assert C.objects[C.dom[f]] == "V2"
        assert p.is_zero(f)


@pytest.mark.parametrize("name", KERNEL_BEARING)
@given(data=st.data())
def test_factorization_through_the_kernel(name, data):
    ks = kernels(name)
    p, C = ks.pointed, ks.category
    f = data.draw(st.integers(0, C.n_mor - 1))
    zs = [g for g in range(C.n_mor) if C.cod[g] == C.dom[f] and p.is_zero(C.compose(f, g))]
    g = data.draw(st.sampled_from(zs))
    h = ks.factor(f, g)
    assert C.compose(int(ks.kappa[f]), h) == g


@pytest.mark.parametrize("name", KERNEL_BEARING)
@given(seed=st.integers(0, 2**32 - 1))
def test_tie_break_follows_the_order(name, seed):
    # any candidate order yields a valid system that picks the earliest candidate
    p = pointed(name)
    C = p.category
    order = np.random.default_rng(seed).permutation(C.n_mor)
    ks = find_kernels(p, order=order)
    assert ks.violations() == []
    pos = {int(m): i for i, m in enumerate(order)}
    normalized = set(C.identity.tolist()) | set(p.bang.tolist())
    for f in range(C.n_mor):
        if f in normalized:
            continue
        cands = universal_kernels(p, f)
        assert int(ks.kappa[f]) == min(cands, key=pos.__getitem__)


def test_non_universal_choice_is_flagged():
    ks = kernels("finptset3")
    p, C = ks.pointed, ks.category
    # replace one kernel by the zero map into the domain, which is not universal
    f = next(f for f in range(C.n_mor) if C.objects[ks.ker[f]] != "star")
    bad = ks.kappa.copy()
    bad[f] = p.zero_mor[p.zero, C.dom[f]]
    assert not is_universal(p, f, int(bad[f]))
    assert any(v[0] == "universal-property" for v in KernelSystem(p, bad).violations())
