"""Acceptance run: one test per criterion, numbered 1 to 8.

Timed criteria rebuild everything from the corpus instead of using the
cached constructions in helpers, so the clock covers the whole pipeline.
"""
import time

import numpy as np

from kernelcat.arrow import (MissingKernel, NotPointed, check_comonad_laws, check_lax_algebra, compare_kernel_systems,
                             extract_kernels, find_kernels, kernel_functor, make_pointed)
from kernelcat.arrow.kernels import universal_kernels
from kernelcat.core import cube, enumerate_diagrams
from kernelcat.io.corpus import build, entry
from kernelcat.report import FAIL, PASS
from kernelcat.simplicial import (check_supercoherence, compare_levelwise, decalage_match, extended_nerve_ops, nerve,
                                  simplicial_decalage, spindle_hom_iso_check, supercoherent_nerve)
from kernelcat.simplicial.spindle import spindle_rows, spine_rows

import oracles
import test_mutations
import test_spindle
from helpers import ALL_POINTED, CORPUS, KERNEL_BEARING, alternative_kernels, kernels, lax, pointed


def _fresh_pointed(name):
    return make_pointed(build(name), entry(name).zero)


def test_criterion_1_comonad_laws():
    for name in CORPUS:
        t = time.perf_counter()
        assert check_comonad_laws(build(name)) == [], name
        assert time.perf_counter() - t < 10, name


def test_criterion_2_kernels_to_lax_algebra():
    t = time.perf_counter()
    for name in KERNEL_BEARING:
        rep = check_lax_algebra(kernel_functor(find_kernels(_fresh_pointed(name))))
        assert rep.ok, rep.to_text()
    assert time.perf_counter() - t < 120


def test_criterion_3_extracted_kernels():
    for name in ALL_POINTED:
        p = pointed(name)
        # extract_kernels raises unless the universal property holds for every (f, g)
        ks = extract_kernels(lax(name))
        expected, missing = oracles.kernel_choice(p.category, p.zero)
        assert missing is None
        assert ks.kappa.tolist() == expected, name


def test_criterion_4_finvect2_kernel_systems():
    p = pointed("finvect2")
    C = p.category
    assert any(len(universal_kernels(p, f)) >= 2 for f in range(C.n_mor))
    ks1, ks2 = kernels("finvect2"), alternative_kernels("finvect2")
    assert not np.array_equal(ks1.kappa, ks2.kappa)
    pi = compare_kernel_systems(ks1, ks2)
    assert pi.report.status("Phi invertible") == PASS
    assert pi.report.status("Phi natural") == PASS
    assert pi.report.status("Phi at !_a = 1") == PASS
    assert pi.report.status("phi coherence") == PASS


def test_criterion_5_spindle():
    for name in CORPUS:
        c = build(name)
        for n in range(4):
            X = nerve(c, n).objects()
            assert np.array_equal(spine_rows(spindle_rows(X, n), n), X), (name, n)
    test_spindle.test_example_decoration_n2()
    test_spindle.test_example_decoration_n3()
    c = build("finptset2")
    Xs, Ys = enumerate_diagrams(cube(2), c), nerve(c, 2).objects()
    for X in Xs:
        for Y in Ys:
            ok, _, _ = spindle_hom_iso_check(c, X, Y, 2)
            assert ok


def test_criterion_6_supercoherent_nerve():
    t = time.perf_counter()
    for name in ALL_POINTED:
        d = kernel_functor(find_kernels(_fresh_pointed(name)))
        x = supercoherent_nerve(d, 4)
        rep = check_supercoherence(x)
        assert rep.ok, rep.to_text()
        iso = compare_levelwise(simplicial_decalage(x), extended_nerve_ops(d.pointed, 4), shift=1)
        assert iso.ok, iso.to_text()
    assert time.perf_counter() - t < 300


def test_criterion_7_kernels_from_simplicial_data():
    for name in KERNEL_BEARING:
        m = decalage_match(pointed(name), supercoherent_nerve(lax(name), 4))
        assert m.report.ok, m.report.to_text()
        assert m.pseudoiso.ok
        assert m.report.status("kernels: kappa_0 r = 1") == PASS
        for n in (1, 2, 3):
            assert m.report.status(f"top s{n} = append !") == PASS
        for n in (3, 4):
            assert m.report.status(f"psi{n} = alpha{n}") == PASS


def test_criterion_8_negative_controls():
    try:
        find_kernels(_fresh_pointed("nokernel"))
        raise AssertionError("nokernel has all kernels")
    except MissingKernel as e:
        assert e.morphism == "a>b"
    try:
        make_pointed(build("two"), entry("two").zero)
        raise AssertionError("two is pointed")
    except NotPointed:
        pass
    mutants = test_mutations.MUTANTS
    assert len(mutants) >= 30
    killed = 0
    for label, run in mutants:
        fails = run().failures()
        if fails and all(c.status == FAIL and c.law for c in fails) and fails[0].witness:
            killed += 1
    assert killed == len(mutants)
