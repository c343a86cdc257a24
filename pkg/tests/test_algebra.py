import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finestructure.algebra import (
    Algebra,
    AlgebraMismatchError,
    Multivector,
    Paravector,
    SlicePoint,
    algebra,
    complex_to_multivector,
    pv_pow,
    same_sphere,
)

floats = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def blade_product_by_swaps(a: tuple, b: tuple) -> tuple[int, tuple]:
    """Sign and blade of e_a e_b by bubble-sorting the concatenated word."""
    word = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
    out = []
    for u in word:
        if out and out[-1] == u:
            out.pop()
            sign = -sign  # e_u e_u = -1
        else:
            out.append(u)
    return sign, tuple(out)


@pytest.mark.parametrize("n", [3, 5])
def test_sign_table_matches_swap_oracle(n):
    alg = algebra(n)
    for i, a in enumerate(alg.blades):
        for j, b in enumerate(alg.blades):
            sign, blade = blade_product_by_swaps(a, b)
            expected = np.zeros(alg.dim)
            expected[alg.blades.index(blade)] = sign
            got = alg.product(np.eye(alg.dim)[i], np.eye(alg.dim)[j])
            assert np.array_equal(got, expected), (a, b)


def test_generators_square_to_minus_one():
    alg = algebra(7)
    for i in range(1, 8):
        sq = alg.product(alg.basis(i), alg.basis(i))
        assert sq[0] == -1 and np.count_nonzero(sq) == 1


def test_dimension_and_unsupported_n():
    assert algebra(5).dim == 32
    with pytest.raises(ValueError):
        Algebra(4)


def test_times_blade_and_left_matrix_agree_with_product():
    rng = np.random.default_rng(1)
    alg = algebra(5)
    a, b = rng.normal(size=alg.dim), rng.normal(size=alg.dim)
    assert np.allclose(alg.left_matrix(a) @ b, alg.product(a, b))
    assert np.allclose(alg.right_matrix(b) @ a, alg.product(a, b))
    for k in (0, 3, 17, 31):
        e = np.eye(alg.dim)[k]
        assert np.allclose(alg.times_blade(a, k), alg.product(a, e))
        assert np.allclose(alg.blade_times(k, a), alg.product(e, a))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5, 7]))
def test_associativity_and_distributivity(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (Multivector(n, rng.normal(size=1 << n)) for _ in range(3))
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-11)
    assert (a * (b + c)).allclose(a * b + a * c, atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5, 7]))
def test_conjugation_reverses_products(seed, n):
    rng = np.random.default_rng(seed)
    a, b = (Multivector(n, rng.normal(size=1 << n)) for _ in range(2))
    assert (a * b).conj().allclose(b.conj() * a.conj(), atol=1e-11)
    assert (a * b).reverse().allclose(b.reverse() * a.reverse(), atol=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.lists(floats, min_size=4, max_size=4), st.lists(floats, min_size=4, max_size=4))
def test_paravector_norm_is_multiplicative(xs, ys):
    x, y = Paravector(xs[0], xs[1:]), Paravector(ys[0], ys[1:])
    prod = x.to_multivector() * y.to_multivector()
    assert abs(prod.norm() - x.norm() * y.norm()) <= 1e-10 * max(1.0, x.norm() * y.norm())
    xx = x.to_multivector() * x.conj().to_multivector()
    assert xx.allclose(Multivector.scalar(3, x.norm2()), atol=1e-10 * max(1.0, x.norm2()))


@settings(max_examples=80, deadline=None)
@given(st.lists(floats, min_size=6, max_size=6), st.integers(0, 7))
def test_slice_power_matches_repeated_product(xs, m):
    x = Paravector(xs[0], xs[1:])
    ref = x.to_multivector() ** m
    assert pv_pow(x, m).to_multivector().allclose(ref, atol=1e-9 * max(1.0, x.norm()) ** m)


def test_slice_embedding_is_a_homomorphism():
    unit = np.array([0.0, 0.6, 0.8])
    z, w = 0.3 - 1.1j, -0.7 + 0.4j
    lhs = complex_to_multivector(z, unit) * complex_to_multivector(w, unit)
    assert lhs.allclose(complex_to_multivector(z * w, unit), atol=1e-14)


def test_same_sphere_detects_rotated_points():
    x = Paravector(0.5, [1.0, 0.0, 0.0])
    rotated = Paravector(0.5, [0.0, 0.6, -0.8])
    assert same_sphere(x, rotated)
    assert not same_sphere(x, Paravector(0.5, [0.0, 0.0, 1.2]))


def test_slice_point_normalizes_sign_and_rejects_bad_unit():
    p = SlicePoint(1.0, -2.0, [0.0, 1.0, 0.0])
    assert p.v == 2.0 and p.I == (0.0, -1.0, 0.0)
    assert p.to_complex() == complex(1.0, 2.0)
    with pytest.raises(ValueError):
        SlicePoint(0.0, 1.0, [1.0, 1.0, 0.0])


def test_mixed_algebras_are_rejected():
    with pytest.raises(AlgebraMismatchError):
        Multivector.scalar(3, 1.0) * Multivector.scalar(5, 1.0)


def test_imaginary_unit_of_real_point_uses_fallback():
    x = Paravector.real(3, 2.0)
    assert np.allclose(x.imaginary_unit([0.0, 0.0, 1.0]), [0.0, 0.0, 1.0])


def test_blade_names_cover_all_grades():
    alg = algebra(3)
    names = [alg.blade_name(i) for i in range(alg.dim)]
    assert names == ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"]
    assert sum(1 for _ in itertools.combinations(range(5), 2)) == np.sum(algebra(5).grades == 2)
