import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finestructure.algebra import Multivector, Paravector, pv_pow
from finestructure.battery import random_operator, random_pair, random_paravector, random_polynomial
from finestructure.kernels import KernelId, eval_kernel
from finestructure.operators import (
    CliffordMatrix,
    CommutingParavectorOp,
    ContourSpec,
    DegreeError,
    EnclosureError,
    HypothesisError,
    SideMismatchError,
    SlicePolynomial,
    SpectralProximityError,
    appell_moment,
    compare_resolvent_series,
    contour_calculus,
    contour_integral,
    kernel_independence_check,
    monogenic_calibration,
    pseudo_resolvent_left,
    resolvent,
    s_spectrum,
)

KIND_TO_KERNEL = {
    "S_L": ("CauchyL", "left", None),
    "S_R": ("CauchyR", "right", None),
    "F_L": ("Fn", "left", None),
    "F_R": ("Fn", "right", None),
    "H": ("H_ell", "left", 2),
    "K_L": ("K_alpha", "left", 1),
    "K_R": ("K_alpha", "right", 1),
    "P_L": ("P_ell", "left", 1),
    "P_R": ("P_ell", "right", 0),
}


def diag_op(*rows):
    return CommutingParavectorOp.from_diagonals(rows)


def test_s_spectrum_of_diagonal_operator():
    T = diag_op([0, 0], [1, 2], [0, 0], [0, 0])
    assert np.allclose(s_spectrum(T), [(0.0, 1.0), (0.0, 2.0)], atol=1e-12)


def test_s_calculus_of_square():
    T = diag_op([0, 0], [1, 2], [0, 0], [0, 0])
    out = contour_calculus("S", SlicePolynomial.monomial(3, 2), T, ContourSpec.around(T))
    assert out.allclose(CliffordMatrix.from_real(3, -np.diag([1.0, 4.0])), atol=1e-12)


def test_f_calculus_of_square_at_zero():
    T = CommutingParavectorOp([np.zeros((2, 2))] * 4)
    out = contour_calculus("F", SlicePolynomial.monomial(3, 2), T, ContourSpec(0.0, 1.0))
    assert out.allclose(CliffordMatrix.identity(3, 2) * -4.0, atol=1e-12)


def test_polyharmonic_calculus_of_identity_at_zero():
    T = CommutingParavectorOp([np.zeros((2, 2))] * 4)
    out = contour_calculus("polyharmonic", SlicePolynomial.monomial(3, 1), T, ContourSpec(0.0, 1.0), 1)
    assert out.allclose(CliffordMatrix.identity(3, 2) * -2.0, atol=1e-12)


def test_first_appell_operator():
    T = diag_op([0, 0], [1, 2], [0, 0], [0, 0])
    out = appell_moment(T, 1, ContourSpec.around(T))
    e1 = Multivector.unit(3, 1)
    expected = CliffordMatrix.from_real(3, np.diag([1.0, 2.0]) / 3) * e1
    assert out.allclose(expected, atol=1e-12)


def test_f_resolvent_value():
    T = CommutingParavectorOp([np.zeros((1, 1))] * 4)
    out = resolvent("F_L", Paravector(2.0, [0.0, 0.0, 0.0]), T)
    assert out.allclose(CliffordMatrix.identity(3, 1) * -0.5, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(KIND_TO_KERNEL)))
def test_scalar_operators_reduce_to_pointwise_kernels(seed, kind):
    s, x = random_pair(np.random.default_rng(seed), 5)
    fam, side, p = KIND_TO_KERNEL[kind]
    T = CommutingParavectorOp.from_paravector(x)
    got = resolvent(kind, s, T, p).coeffs[0, 0]
    ref = eval_kernel(KernelId(fam, side, "II", p), s, x).coeffs
    assert np.max(np.abs(got - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pseudo_resolvent_matches_s_resolvent(seed):
    rng = np.random.default_rng(seed)
    T = random_operator(rng, 3, 3)
    s = random_paravector(rng, 3, 2.0, 3.0)
    assert (pseudo_resolvent_left(s, T) - resolvent("S_L", s, T)).max_abs() <= 1e-11


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_real_representation_round_trip_and_inverse(seed):
    rng = np.random.default_rng(seed)
    A = CliffordMatrix(3, rng.normal(size=(2, 2, 8)))
    B = CliffordMatrix(3, rng.normal(size=(2, 2, 8)))
    assert CliffordMatrix.from_real_representation(3, A.real_representation()).allclose(A, atol=0)
    assert CliffordMatrix.from_real_representation(3, A.real_representation() @ B.real_representation()).allclose(
        A @ B, atol=1e-12
    )
    assert (A @ A.inverse()).allclose(CliffordMatrix.identity(3, 2), atol=1e-9)


def test_noncommuting_components_are_rejected():
    with pytest.raises(HypothesisError, match="do not commute"):
        CommutingParavectorOp([np.eye(2), np.array([[0, 1], [0, 0]]), np.array([[1, 0], [0, 2]]), np.zeros((2, 2))])


def test_polyanalytic_needs_vanishing_last_component():
    T = diag_op([0.1], [0.2], [0.0], [0.3])
    with pytest.raises(HypothesisError, match="T_3"):
        contour_calculus("polyanalytic", SlicePolynomial.monomial(3, 2), T, ContourSpec.around(T), 0)


def test_enclosure_and_proximity_errors():
    T = diag_op([0, 0], [1, 2], [0, 0], [0, 0])
    with pytest.raises(EnclosureError):
        contour_calculus("S", SlicePolynomial.monomial(3, 1), T, ContourSpec(0.0, 1.0))
    with pytest.raises(SpectralProximityError):
        resolvent("S_L", Paravector(0.0, [0.0, 2.0, 0.0]), T)


def test_side_mismatch_is_rejected():
    T = diag_op([0], [0.5], [0], [0])
    f = SlicePolynomial.monomial(3, 2, "right")
    with pytest.raises(SideMismatchError):
        contour_integral("S_L", f, T, ContourSpec(0.0, 1.0))


def test_junk_degree_bound_is_enforced():
    rng = np.random.default_rng(0)
    T = random_operator(rng, 3, 2)
    f = random_polynomial(rng, 3, 3)
    junk = random_polynomial(rng, 3, 2)
    with pytest.raises(DegreeError):
        kernel_independence_check("F", f, junk, T, ContourSpec.around(T))


def test_d1_s_calculus_equals_slice_power():
    x = Paravector(1.0, [1.0, 0.0, 0.0])
    T = CommutingParavectorOp.from_paravector(x)
    out = contour_calculus("S", SlicePolynomial.monomial(3, 2), T, ContourSpec.around(T))
    assert np.allclose(out.coeffs[0, 0], pv_pow(x, 2).to_multivector().coeffs, atol=1e-12)


def test_harmonic_series_exponent_sign():
    # the +k exponent closes against the closed form, the -k variant does not
    rng = np.random.default_rng(5)
    T = random_operator(rng, 5, 2)
    s = random_paravector(rng, 5, 1.0, 1.0).scale(T.operator_norm() / 0.5)
    assert compare_resolvent_series("H", s, T, 40, 1, "collected").passed
    assert compare_resolvent_series("H", s, T, 40, 1, "default").passed
    assert not compare_resolvent_series("H", s, T, 40, 1, "collected_negk").passed


def test_contour_json_and_defaults():
    spec = ContourSpec.from_json({"center": 0.5, "radius": 2.0, "slice_unit": [0, 0, 2], "nodes": 64})
    assert np.allclose(spec.unit_vector(3), [0, 0, 1])
    z, w = spec.points()
    assert len(z) == 64 and np.isclose(np.sum(w), 0.0)
    with pytest.raises(ValueError):
        ContourSpec(0.0, 1.0, None, 7)


def test_operator_json_round_trip():
    T = random_operator(np.random.default_rng(1), 3, 2)
    back = CommutingParavectorOp.from_json(T.to_json())
    assert all(np.array_equal(a, b) for a, b in zip(T.components, back.components))


def test_monogenic_calibration_is_one():
    assert abs(monogenic_calibration(grid=(16, 16, 32)) - 1.0) <= 1e-10
