import numpy as np
import pytest
from hypothesis import given, strategies as st

from kernelcat.arrow import (UniversalPropertyFailure, check_adjunction, check_condition_ii, check_lax_algebra,
                             compare_kernel_systems, extract_kernels, phi_naturality)
from kernelcat.arrow.lax import all_cubes, condition_ii_generic
from kernelcat.core.diagrams import cube, single_vertex_morphisms
from kernelcat.report import FAIL

from helpers import ALL_POINTED, KERNEL_BEARING, alternative_kernels, kernels, lax, lax_report


@pytest.mark.parametrize("name", ALL_POINTED)
def test_kernel_functor_is_a_lax_algebra(name):
    rep = lax_report(name)
    assert rep.ok, rep.to_text()
    for law in ("(i) K.beta = 1", "(ii) associativity 2-cell", "(iii) phi.A(beta) = 1", "(iv) phi.delta = 1"):
        assert rep.status(law) == "PASS"


@pytest.mark.parametrize("name", ["terminal", "finptset2"])
def test_condition_ii_agrees_with_literal_evaluation(name):
    d = lax(name)
    rows = all_cubes(d.category)
    lhs, rhs = condition_ii_generic(d, rows)
    assert np.array_equal(lhs, rhs)


@given(data=st.data())
def test_condition_ii_literal_on_random_cubes_of_finptset3(data):
    # A^3(FinPtSet3) has over 5e7 objects; sample cubes out of random squares
    d = lax("finptset3")
    idx = data.draw(st.lists(st.integers(0, d.arrow.n_squares - 1), min_size=1, max_size=5))
    _, _, rows = single_vertex_morphisms(cube(2), d.category, d.arrow.rows[idx])
    lhs, rhs = condition_ii_generic(d, rows)
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("name", ALL_POINTED)
def test_extracted_kernels_are_the_original_ones(name):
    assert extract_kernels(lax(name)) == kernels(name)


@pytest.mark.parametrize("name", ALL_POINTED)
def test_adjunction(name):
    rep = check_adjunction(lax(name))
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize("name", KERNEL_BEARING)
def test_self_comparison_is_the_identity(name):
    ks = kernels(name)
    pi = compare_kernel_systems(ks, ks)
    assert pi.ok
    assert pi.Phi.tolist() == ks.category.identity[ks.ker].tolist()


def test_finvect2_alternative_system_is_pseudoisomorphic():
    ks1, ks2 = kernels("finvect2"), alternative_kernels("finvect2")
    assert not np.array_equal(ks1.kappa, ks2.kappa)
    assert ks2.violations() == []
    pi = compare_kernel_systems(ks1, ks2)
    assert pi.ok, pi.report.to_text()
    C = ks1.category
    # Phi is the identity on every morphism whose kernel did not change
    same = ks1.kappa == ks2.kappa
    assert np.array_equal(pi.Phi[same], C.identity[ks1.ker[same]])


def test_broken_K_is_detected():
    d = lax("finptset2").copy()
    C, A = d.category, d.arrow
    # send one non-identity square to a different map between the same kernels
    s = next(s for s in range(A.n_squares) if len(C.hom(int(C.dom[d.K_mor[s]]), int(C.cod[d.K_mor[s]]))) > 1)
    alt = [m for m in C.hom(int(C.dom[d.K_mor[s]]), int(C.cod[d.K_mor[s]])) if m != d.K_mor[s]]
    d.K_mor[s] = alt[0]
    rep = check_lax_algebra(d, naturality=False)
    assert not rep.ok
    assert all(c.witness for c in rep.checks if c.status == FAIL)


def test_broken_phi_is_detected_by_naturality_or_coherence():
    d = lax("finptset3").copy()
    C = d.category
    s = next(s for s in range(d.arrow.n_squares)
             if len(C.hom(int(C.dom[d.phi[s]]), int(C.cod[d.phi[s]]))) > 1)
    d.phi[s] = next(m for m in C.hom(int(C.dom[d.phi[s]]), int(C.cod[d.phi[s]])) if m != d.phi[s])
    rep = check_lax_algebra(d)
    assert rep.status("phi = K.A(kappa)") == FAIL


def test_extract_rejects_non_kernel():
    d = lax("finptset2").copy()
    p, C = d.pointed, d.category
    # K of nu_f for f = 1_X replaced by the zero map: no longer a kernel
    f = C.mor("X>X[1]")
    d.K_obj[f] = C.obj("X")
    d.K_mor[d.nu[f]] = p.zero_mor[C.obj("X"), C.obj("X")]
    with pytest.raises(UniversalPropertyFailure):
        extract_kernels(d)


def test_condition_ii_and_naturality_report_counts():
    d = lax("finptset2")
    fail, n = check_condition_ii(d)
    assert fail is None and n == len(all_cubes(d.category))
    fail, n = phi_naturality(d)
    assert fail is None and n > 0
