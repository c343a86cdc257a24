import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finestructure.algebra import Multivector, Paravector
from finestructure.jets import Jet
from finestructure.polynomials import (
    IDENTITY_NAMES,
    appell_moment_constant,
    appell_table,
    bilinear_sum,
    eval_appell,
    eval_harmonic,
    gamma_n,
    harmonic_table,
    identity_suite,
    k_alpha,
    kappa,
    kappa_uncorrected,
    real_axis_check,
    sce_exponent,
    sigma,
    slice_restriction_check,
)


def pochhammer_neg(h, ell):
    """(-h)_ell = (-h)(-h+1)...(-h+ell-1) by direct product."""
    out = 1
    for i in range(ell):
        out *= -h + i
    return out


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_constants_against_direct_products(n):
    h = (n - 1) // 2
    assert gamma_n(n) == math.factorial(h) ** 2 * 2 ** (n - 1) * (-1) ** h
    for ell in range(1, h + 1):
        assert sigma(n, ell) == 2 ** (2 * ell - 1) * math.factorial(ell - 1) * pochhammer_neg(h, ell)
    for a in range(1, h):
        assert k_alpha(n, a) == 4**a * math.factorial(a) * pochhammer_neg(h, a)


def test_small_values():
    assert gamma_n(3) == -4
    assert gamma_n(5) == 64
    assert sigma(3, 1) == -2
    assert sigma(3, 1) ** 2 == -gamma_n(3)


def appell_jet(k, center, order):
    x = Jet.identity(center, order)
    return bilinear_sum(appell_table(k, center.n), x, x.conj(), Jet.constant(center, order, 1.0))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 7), st.sampled_from([3, 5]), st.integers(0, 2**32 - 1))
def test_appell_polynomials_are_monogenic_and_appell(k, n, seed):
    rng = np.random.default_rng(seed)
    c = Paravector(rng.normal(), rng.normal(size=n))
    j = appell_jet(k, c, 1)
    assert j.dirac().value().norm() <= 1e-10 * max(1.0, c.norm()) ** k
    # conjugate Dirac acts as 2 k P_{k-1}
    if k:
        lhs = j.dirac(conjugate=True).value()
        rhs = eval_appell(k - 1, c) * (2.0 * k)
        assert lhs.allclose(rhs, atol=1e-10 * max(1.0, c.norm()) ** k)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 7), st.sampled_from([3, 5]), st.integers(0, 2**32 - 1))
def test_harmonic_polynomials_are_harmonic(k, n, seed):
    rng = np.random.default_rng(seed)
    c = Paravector(rng.normal(), rng.normal(size=n))
    x = Jet.identity(c, 2)
    j = bilinear_sum(harmonic_table(k, n), x, x.conj(), Jet.constant(c, 2, 1.0))
    assert j.laplacian().value().norm() <= 1e-9 * max(1.0, c.norm()) ** k
    assert j.value().allclose(eval_harmonic(k, c), atol=1e-10 * max(1.0, c.norm()) ** k)


@pytest.mark.parametrize("k", range(6))
def test_appell_restricted_to_real_axis_is_power(k):
    assert eval_appell(k, Paravector.real(5, 1.3)).allclose(Multivector.scalar(5, 1.3**k), atol=1e-12)


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("name", IDENTITY_NAMES)
def test_identity_suite(name, n):
    rep = identity_suite(name, n, kmax=20, points=3)
    assert rep.passed, (rep.exact_defect, rep.float_defect, rep.worst)
    # the Cliffordian sum has no admissible alpha at n = 3
    assert rep.cases > 0 or (name == "cliffordian_double_sum" and n == 3)


def test_uncorrected_kappa_breaks_the_double_sum():
    # the corrected coefficient is the one that makes the double sum close
    n, h = 5, 2
    k, alpha = 6, 1

    def total(fn):
        return sum(fn(k, h, alpha, ell, nu) * (-2) ** nu for ell in range(h - alpha + 1) for nu in range(ell + 1))
    target = math.comb(k, 2 * alpha)
    assert total(kappa) == target
    assert total(kappa_uncorrected) != target


def test_unknown_identity_is_rejected():
    with pytest.raises(KeyError):
        identity_suite("nope", 3)


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("name", ["dirac_laplace", "laplace", "real_values"])
def test_real_axis_checks(name, n):
    assert real_axis_check(name, n) <= 1e-12


def test_real_axis_checks_at_seven():
    assert real_axis_check("dirac_laplace", 7, kmax=8, points=(0.7,)) <= 1e-12


@pytest.mark.parametrize("n", [3, 5])
def test_slice_restriction(n):
    assert slice_restriction_check(n, kmax=8) <= 1e-8


def test_appell_moment_constant():
    n, h = 5, 2
    for m in range(4):
        expected = math.factorial(m) * math.factorial(2 * h) / (
            2 * math.pi * gamma_n(n) * math.factorial(m + 2 * h)
        )
        assert appell_moment_constant(m, n) == pytest.approx(expected, rel=1e-14)


def test_sce_exponent_rejects_even():
    assert sce_exponent(7) == 3
    with pytest.raises(ValueError):
        sce_exponent(4)


def test_tables_are_exact_fractions():
    assert all(isinstance(c, Fraction) for c in appell_table(4, 3))
    assert sum(appell_table(4, 3)) == 1
