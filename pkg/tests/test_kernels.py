import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finestructure.algebra import Multivector, Paravector, algebra
from finestructure.battery import random_pair, random_paravector
from finestructure.kernels import (
    DIFFERENTIAL_IDENTITIES,
    SERIES_FAMILIES,
    KernelId,
    ParameterRangeError,
    RatioTooLargeError,
    SphereViolationError,
    admissible_params,
    compare_series,
    eval_kernel,
    identity_parameters,
    kernel_forms_agree,
    slice_split,
    verify_differential_identity,
    verify_slice_regularity_in_s,
)


def fd_laplacian(fn, x: Paravector, h=1e-3) -> Multivector:
    base = x.to_array()
    total = fn(x) * (-2.0 * (x.n + 1))
    for mu in range(x.n + 1):
        e = np.zeros(x.n + 1)
        e[mu] = h
        total = total + fn(Paravector.from_array(base + e)) + fn(Paravector.from_array(base - e))
    return total / h**2


def fd_dirac(fn, x: Paravector, h=1e-5) -> Multivector:
    base = x.to_array()
    alg = algebra(x.n)
    out = Multivector(x.n)
    for mu in range(x.n + 1):
        e = np.zeros(x.n + 1)
        e[mu] = h
        d = (fn(Paravector.from_array(base + e)) - fn(Paravector.from_array(base - e))) / (2 * h)
        out = out + (d if mu == 0 else Multivector(x.n, alg.basis(mu)) * d)
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5, 7]))
def test_cauchy_forms_agree(seed, n):
    s, x = random_pair(np.random.default_rng(seed), n)
    assert kernel_forms_agree(s, x) <= 1e-12


def test_fueter_sce_map_by_finite_differences():
    # at n = 3 the F kernel is the Laplacian of the left Cauchy kernel
    s = Paravector(1.7, [0.4, -0.9, 0.3])
    x = Paravector(0.2, [0.1, 0.3, -0.2])
    lap = fd_laplacian(lambda p: eval_kernel(KernelId("CauchyL"), s, p), x)
    ref = eval_kernel(KernelId("Fn"), s, x)
    assert (lap - ref).norm() <= 1e-5 * ref.norm()


def test_monogenic_kernel_is_monogenic():
    s = Paravector(1.5, [0.2, 0.4, -0.1])
    x = Paravector(0.1, [0.3, -0.2, 0.2])
    # G(s - x) as a function of x; the Dirac operator in x flips sign only
    d = fd_dirac(lambda p: eval_kernel(KernelId("Monogenic"), s, p), x)
    assert d.norm() <= 1e-6


def test_left_and_right_kernels_are_reversed_orderings():
    s, x = random_pair(np.random.default_rng(4), 5)
    for fam in ("Fn", "K_alpha", "P_ell"):
        p = admissible_params(fam, 5)[0]
        left = eval_kernel(KernelId(fam, "left", "II", p), s, x)
        right = eval_kernel(KernelId(fam, "right", "II", p), s, x)
        # on the real axis of x both factors commute
        xr = Paravector.real(5, x.x0)
        assert eval_kernel(KernelId(fam, "left", "II", p), s, xr).allclose(
            eval_kernel(KernelId(fam, "right", "II", p), s, xr), atol=1e-12
        )
        assert not left.allclose(right, atol=1e-6)


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("family", SERIES_FAMILIES)
def test_series_within_tail_bound(family, n):
    rng = np.random.default_rng(7)
    for p in admissible_params(family, n):
        for side in ("left", "right"):
            kid = KernelId(family, side, "II", p)
            s = random_paravector(rng, n, 2.0, 2.0)
            x = random_paravector(rng, n, 1.0, 1.0)
            cmp = compare_series(kid, s, x, 60)
            assert cmp.passed, cmp


def test_series_refuses_large_ratio():
    s = Paravector(1.0, [0.0, 0.0, 0.0])
    x = Paravector(0.0, [0.9, 0.0, 0.0])
    with pytest.raises(RatioTooLargeError):
        compare_series(KernelId("CauchyL"), s, x, 10)


def test_sphere_and_range_errors():
    x = Paravector(0.5, [1.0, 0.0, 0.0])
    s = Paravector(0.5, [0.0, 1.0, 0.0])
    with pytest.raises(SphereViolationError):
        eval_kernel(KernelId("CauchyL"), s, x)
    with pytest.raises(ParameterRangeError):
        KernelId("K_alpha", param=1).check_range(3)
    with pytest.raises(ParameterRangeError):
        KernelId("H_ell", param=3).check_range(5)
    assert admissible_params("K_alpha", 3) == []


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("name", DIFFERENTIAL_IDENTITIES)
def test_differential_identities(name, n):
    rng = np.random.default_rng(11)
    for params in identity_parameters(name, n):
        for side in ("left", "right"):
            s, x = random_pair(rng, n)
            res = verify_differential_identity(name, s, x, params, side)
            assert res.relative <= 1e-10, (params, side, res)


def test_kernel_identity_at_seven_spot_check():
    s, x = random_pair(np.random.default_rng(2), 7)
    assert verify_differential_identity("fueter_sce", s, x, {}, "left", extra=0).relative <= 1e-8


@pytest.mark.parametrize("family", SERIES_FAMILIES)
def test_kernels_are_slice_functions_of_s(family):
    x = Paravector(0.2, [0.3, -0.1, 0.25, 0.1, 0.05])
    grid = [(1.7, 0.9), (-1.2, 1.5)]
    for p in admissible_params(family, 5):
        kid = KernelId(family, "left", "II", p)
        assert verify_slice_regularity_in_s(kid, x, grid) <= 1e-6


def test_polyharmonic_kernel_splits_into_real_parts():
    s = Paravector(1.7, [0.0, 0.9, 0.0])
    x = Paravector(0.2, [0.3, -0.1, 0.25])
    alpha, beta = slice_split(KernelId("H_ell", param=1), s, x)
    assert np.all(alpha.coeffs[1:] == 0) and np.all(np.abs(beta.coeffs[1:]) <= 1e-12)
