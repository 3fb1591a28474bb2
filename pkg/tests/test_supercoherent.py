import numpy as np
import pytest

from kernelcat.report import FAIL, PASS
from kernelcat.simplicial import (check_supercoherence, compare_levelwise, extended_nerve_ops, simplicial_decalage,
                                  supercoherent_nerve, tabulate)
from kernelcat.simplicial.levels import TableLevel, is_terminal_level
from kernelcat.simplicial.supercoherent import nu_component, relations

from helpers import ALL_POINTED, KERNEL_BEARING, lax, pointed


@pytest.mark.parametrize("name", ALL_POINTED)
def test_supercoherent_nerve_passes(name):
    x = supercoherent_nerve(lax(name), 4)
    rep = check_supercoherence(x)
    assert rep.ok, rep.to_text()
    assert rep.status("X0 is terminal") == PASS
    for n in (3, 4):
        assert rep.status(f"alpha{n} typing") == PASS
        assert rep.status(f"alpha{n} naturality") == PASS
        assert rep.status(f"alpha{n} at s{n - 2}(y) = 1") == PASS
        assert rep.status(f"alpha{n} at s{n - 1}(y) = 1") == PASS


@pytest.mark.parametrize("name", ALL_POINTED)
def test_decalage_is_the_extended_nerve(name):
    x = supercoherent_nerve(lax(name), 4)
    E = extended_nerve_ops(pointed(name), 4)
    rep = compare_levelwise(simplicial_decalage(x), E, shift=1)
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize("name", ALL_POINTED)
def test_extended_nerve_is_strictly_simplicial(name):
    E = extended_nerve_ops(pointed(name), 4)
    rep = check_supercoherence(E, strict_top=True)
    assert rep.ok, rep.to_text()


def test_top_identity_is_strict_on_finptset2_but_not_on_finvect2():
    assert check_supercoherence(supercoherent_nerve(lax("finptset2"), 4), strict_top=True).ok
    rep = check_supercoherence(supercoherent_nerve(lax("finvect2"), 4), strict_top=True)
    assert [c.law for c in rep.failures()] == ["d2d3 = d2d2 at X3", "d3d4 = d3d3 at X4"]


def test_levels_are_shifted_nerves():
    x = supercoherent_nerve(lax("finptset2"), 4)
    assert is_terminal_level(x.levels[0])
    assert [L.n_objects for L in x.levels[1:]] == [2, 5, 13, 34]


def test_relations_cover_every_index():
    x = supercoherent_nerve(lax("finptset2"), 4)
    laws = {r[0] for n in range(5) for r in relations(x, n)}
    assert any(law.startswith("d") and "d" in law[2:] for law in laws)
    assert any(law.startswith("s") for law in laws)


@pytest.mark.parametrize("name", KERNEL_BEARING)
def test_nu_component_is_a_morphism(name):
    p = pointed(name)
    x = supercoherent_nerve(lax(name), 4)
    for n in (2, 3, 4):
        L = x.levels[n]
        T = L.objects()
        nu = nu_component(p, T, n)
        assert np.all(L.is_morphism(nu))
        # its target appends the map to the zero object
        top = x.degeneracies[(n - 1, n - 1)].obj(x.faces[(n, n - 1)].obj(T))
        assert np.array_equal(L.tgt(nu), top)


def test_tabulated_structure_passes():
    t = tabulate(supercoherent_nerve(lax("finptset2"), 3))
    assert all(isinstance(L, TableLevel) for L in t.levels)
    rep = check_supercoherence(t)
    assert rep.ok, rep.to_text()


def test_mutated_alpha_fails():
    x = supercoherent_nerve(lax("finptset3"), 3)
    L1 = x.levels[1]
    a = x.alpha[3]
    # move the first component to another morphism with the same source
    T = x.levels[3].objects()
    comp = a.at(T)
    k = 0
    other = L1.morphisms()
    src = L1.src(comp[k:k + 1])[0]
    cands = [m for m in other if np.array_equal(L1.src(m[None, :])[0], src) and not np.array_equal(m, comp[k])]
    assert cands
    bad = x.replace(alpha={**x.alpha, 3: a.patched(k, cands[0])})
    rep = check_supercoherence(bad)
    assert not rep.ok
    assert all(c.status == FAIL and c.witness for c in rep.failures())


def test_level_cap():
    with pytest.raises(ValueError):
        supercoherent_nerve(lax("finptset2"), 6)
