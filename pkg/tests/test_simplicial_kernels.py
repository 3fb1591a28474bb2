import numpy as np
import pytest

from kernelcat.arrow import UniversalPropertyFailure, compare_kernel_systems, find_kernels
from kernelcat.core import FinCategory
from kernelcat.report import PASS
from kernelcat.simplicial import (NoIsomorphism, Op, PreconditionFailure, compatibility, decalage_match,
                                  find_isomorphism, kernels_from_simplicial, supercoherent_nerve, tabulate)
from kernelcat.simplicial.kernels import _point, arrow_row, square_row
from kernelcat.simplicial.levels import TableLevel, Transformation

from helpers import ALL_POINTED, KERNEL_BEARING, kernels, lax, pointed


def _top_faces(name, N=3):
    x = supercoherent_nerve(lax(name), N)
    return x, x.faces[(2, 2)], x.faces[(3, 3)]


@pytest.mark.parametrize("name", ALL_POINTED)
def test_kernels_from_top_faces(name):
    _, d2, d3 = _top_faces(name)
    ks = kernels_from_simplicial(pointed(name), d2, d3)
    assert ks.report.ok, ks.report.to_text()
    assert ks.report.status("kappa_0 r = 1") == PASS
    assert ks.violations() == []
    assert compare_kernel_systems(ks, kernels(name)).ok


@pytest.mark.parametrize("name", ALL_POINTED)
def test_top_faces_are_compatible(name):
    _, d2, d3 = _top_faces(name)
    rep = compatibility(pointed(name), d2, d3)
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize("name", KERNEL_BEARING)
def test_decalage_match(name):
    x = supercoherent_nerve(lax(name), 4)
    m = decalage_match(pointed(name), x)
    assert m.report.ok, m.report.to_text()
    assert m.pseudoiso.ok
    for n in (3, 4):
        assert m.report.status(f"psi{n} = alpha{n}") == PASS
    for n in (1, 2, 3):
        assert m.report.status(f"top s{n} = append !") == PASS
    assert m.report.status("s0(*) is a zero object") == PASS


def test_retraction_through_the_zero_kernel():
    p = pointed("finvect2")
    C = p.category
    _, d2, d3 = _top_faces("finvect2")
    ks = kernels_from_simplicial(p, d2, d3)
    for a in range(C.n_obj):
        for b in range(C.n_obj):
            z = int(p.zero_mor[a, b])
            sq = square_row(C, p.bang[a], z, C.identity[a], p.cobang[b])
            r = int(_point(d2.mor(sq))[0])
            assert C.compose(int(ks.kappa[z]), r) == C.identity[a]


def test_precondition_failure_is_named():
    p = pointed("finptset2")
    C = p.category
    _, d2, d3 = _top_faces("finptset2")
    # d2 sending 1_X to X instead of the zero object breaks the normalization
    X = C.obj("X")
    ident = arrow_row(C, [C.identity[X]])[0]

    def obj(A):
        out = np.array(d2.obj(A), copy=True)
        out[np.all(A == ident[None, :], axis=1)] = C.identity[X]
        return out

    bad = Op(d2.src, d2.tgt, obj, d2.mor, "d2")
    with pytest.raises((PreconditionFailure, UniversalPropertyFailure)) as err:
        kernels_from_simplicial(p, bad, d3)
    assert str(err.value)


def _permuted(C, pi_obj, pi_mor, prefix):
    """A copy of C with ids renamed and reordered."""
    inv_o, inv_m = np.argsort(pi_obj), np.argsort(pi_mor)
    objs = [f"{prefix}{C.objects[i]}" for i in inv_o]
    mors = [f"{prefix}{C.morphisms[i]}" for i in inv_m]
    comp = {(int(pi_mor[g]), int(pi_mor[f])): int(pi_mor[gf]) for (g, f), gf in C.composition.items()}
    return FinCategory(objs, mors, pi_obj[C.dom[inv_m]], pi_obj[C.cod[inv_m]], pi_mor[C.identity[inv_o]], comp,
                       name=C.name)


def test_find_isomorphism_by_search():
    C = pointed("finptset3").category
    rng = np.random.default_rng(7)
    po, pm = rng.permutation(C.n_obj), rng.permutation(C.n_mor)
    X = _permuted(C, po, pm, "q")
    om, mm = find_isomorphism(X, C)
    for (g, f), gf in X.composition.items():
        assert mm[gf] == C.compose(int(mm[g]), int(mm[f]))
    assert find_isomorphism(X, C, search=False) is None


def test_find_isomorphism_rejects_different_sizes():
    assert find_isomorphism(pointed("finptset2").category, pointed("finptset3").category) is None


def test_decalage_match_on_renamed_tables():
    # level 1 of the tabulated structure renamed and reordered: theta_1 must be found by search
    p = pointed("finptset2")
    t = tabulate(supercoherent_nerve(lax("finptset2"), 3))
    L1 = t.levels[1].C
    rng = np.random.default_rng(3)
    po, pm = rng.permutation(L1.n_obj), rng.permutation(L1.n_mor)
    new1 = TableLevel(_permuted(L1, po, pm, "r"), name=t.levels[1].name)
    levels = list(t.levels)
    levels[1] = new1

    def conj(op, src_is_1, tgt_is_1, src, tgt):
        def obj(A):
            A = np.asarray(A)
            if src_is_1:
                A = np.argsort(po)[A[:, 0]][:, None]
            out = op.obj(A)
            return po[out[:, 0]][:, None] if tgt_is_1 else out

        def mor(A):
            A = np.asarray(A)
            if src_is_1:
                A = np.argsort(pm)[A[:, 0]][:, None]
            out = op.mor(A)
            return pm[out[:, 0]][:, None] if tgt_is_1 else out
        return Op(src, tgt, obj, mor, op.name)

    faces = {(n, i): conj(op, n == 1, n - 1 == 1, levels[n], levels[n - 1]) for (n, i), op in t.faces.items()}
    degs = {(n, j): conj(op, n == 1, n + 1 == 1, levels[n], levels[n + 1]) for (n, j), op in t.degeneracies.items()}
    alpha = {3: Transformation(levels[3], new1, lambda X: pm[t.alpha[3].at(X)[:, 0]][:, None], "alpha3")}
    x = t.replace(levels=levels, faces=faces, degeneracies=degs, alpha=alpha)
    m = decalage_match(p, x)
    assert m.report.ok, m.report.to_text()
    assert m.report.status("theta1 bijective") == PASS


def test_decalage_match_needs_three_levels():
    with pytest.raises(NoIsomorphism):
        decalage_match(pointed("finptset2"), supercoherent_nerve(lax("finptset2"), 2))


def test_reconstruction_equals_find_kernels_on_finvect2_alternative_choice():
    # rebuilding from the faces of the alternative kernel system recovers that system
    from kernelcat.arrow import kernel_functor
    from helpers import alternative_kernels
    ks2 = alternative_kernels("finvect2")
    x = supercoherent_nerve(kernel_functor(ks2), 3)
    ks = kernels_from_simplicial(ks2.pointed, x.faces[(2, 2)], x.faces[(3, 3)])
    assert ks == ks2
    assert not np.array_equal(ks.kappa, find_kernels(ks2.pointed).kappa)
