import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finestructure.algebra import Multivector, Paravector
from finestructure.jets import (
    InsufficientOrderError,
    Jet,
    SingularJetError,
    apply_dirac,
    apply_laplacian_power,
    index_table,
    jet_recip,
)


def random_poly_jet(rng, n, order, degree=3):
    """Polynomial jet in x and conj(x) with noncommuting random coefficients."""
    c = Paravector(rng.normal(), rng.normal(size=n))
    x = Jet.identity(c, order)
    total = Jet.constant(c, order, Multivector(n, rng.normal(size=1 << n)))
    p = Jet.constant(c, order, 1.0)
    for _ in range(degree):
        p = p * x
        total = total + p * Multivector(n, rng.normal(size=1 << n)) + x.conj() * p
    return total


def test_index_table_sizes():
    t = index_table(4, 3)
    # monomials of degree <= 3 in 4 variables
    assert t.size(3) == 35
    assert t.size(0) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5]))
def test_dirac_times_conjugate_dirac_is_laplacian(seed, n):
    rng = np.random.default_rng(seed)
    j = random_poly_jet(rng, n, 5)
    for side in ("left", "right"):
        a = apply_dirac(apply_dirac(j, side=side), conjugate=True, side=side)
        b = apply_dirac(apply_dirac(j, conjugate=True, side=side), side=side)
        lap = j.laplacian()
        assert np.max(np.abs(a.coeffs - lap.coeffs)) <= 1e-12 * max(1.0, j.max_abs())
        assert np.max(np.abs(b.coeffs - lap.coeffs)) <= 1e-12 * max(1.0, j.max_abs())


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2), st.integers(0, 2))
def test_laplacian_powers_compose(seed, a, b):
    rng = np.random.default_rng(seed)
    j = random_poly_jet(rng, 3, 8)
    lhs = apply_laplacian_power(j, a + b)
    rhs = apply_laplacian_power(apply_laplacian_power(j, a), b)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-10)


def test_polynomial_jet_is_exact_taylor_expansion():
    rng = np.random.default_rng(3)
    c = Paravector(0.3, [0.1, -0.2, 0.5])
    x = Jet.identity(c, 4)
    a = Multivector(3, rng.normal(size=8))
    j = x * a * x * x
    t = np.array([0.2, -0.1, 0.3, 0.05])
    point = Paravector(c.x0 + t[0], c.vec + t[1:]).to_multivector()
    assert j.eval_offset(t).allclose(point * a * point * point, atol=1e-13)


def test_elementary_derivatives():
    c = Paravector(0.4, [0.2, -0.3, 0.1, 0.0, 0.7])
    x = Jet.identity(c, 3)
    # D x = 1 + sum e_i e_i = 1 - n and Delta |x|^2 = 2 (n + 1)
    assert apply_dirac(x).value().allclose(Multivector.scalar(5, -4.0), atol=1e-14)
    assert apply_dirac(x, conjugate=True).value().allclose(Multivector.scalar(5, 6.0), atol=1e-14)
    assert (x * x.conj()).laplacian().value().allclose(Multivector.scalar(5, 12.0), atol=1e-13)


def test_reciprocal_against_finite_differences():
    n = 3
    s = Paravector(1.8, [0.0, 0.9, 0.0])
    c = Paravector(0.2, [0.3, -0.1, 0.25])
    x = Jet.identity(c, 2)
    unit = np.array([0.0, 1.0, 0.0])
    sm = s.to_multivector()
    # Q = s^2 - 2 x0 s + |x|^2 stays in the slice of s
    q = Jet.constant(c, 2, sm * sm) - sm * (Jet.coordinate(c, 2, 0) * 2.0) + x * x.conj()
    r = jet_recip(q)

    def f(p: Paravector) -> complex:
        z = complex(s.x0, s.vec_norm())
        return 1.0 / (z * z - 2 * p.x0 * z + p.norm2())

    h = 1e-4
    for mu in range(n + 1):
        e = np.zeros(n + 1)
        e[mu] = h
        plus = Paravector.from_array(c.to_array() + e)
        minus = Paravector.from_array(c.to_array() - e)
        fd = (f(plus) - f(minus)) / (2 * h)
        exps = [0] * (n + 1)
        exps[mu] = 1
        coef = r.coefficient(exps)
        got = complex(coef.coeffs[0], coef.coeffs[1:4] @ unit)
        assert abs(got - fd) < 1e-7


def test_errors():
    c = Paravector(0.0, [0.0, 0.0, 0.0])
    with pytest.raises(InsufficientOrderError):
        Jet.identity(c, 1).laplacian()
    with pytest.raises(SingularJetError):
        jet_recip(Jet.identity(c, 2) * Jet.identity(c, 2).conj())
    with pytest.raises(InsufficientOrderError):
        Jet.identity(c, 2).truncate(3)
