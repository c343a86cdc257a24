"""Closed forms, power series and differential identities of the kernels.

Every kernel is a paravector factor times a power of Q_{c,s}(x) = s^2 - 2x_0 s + |x|^2.
Q only takes values in the slice C_{I_s}, so its powers are computed as complex
numbers and mapped back through i -> I_s.  The paravector factors are then
multiplied in the written order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import Multivector, Paravector, complex_to_multivector, same_sphere
from .jets import Jet, index_table, series_power, series_reciprocal
from .polynomials import (
    binom,
    eval_appell,
    eval_harmonic,
    eval_polyharm,
    factorial_ratio,
    gamma_n,
    k_alpha,
    kappa,
    kon,
    laplace_constant,
    sce_exponent,
    sigma,
    sphere_area,
)

FAMILIES = ("CauchyL", "CauchyR", "Fn", "H_ell", "K_alpha", "P_ell", "Monogenic")
SERIES_FAMILIES = ("CauchyL", "CauchyR", "Fn", "H_ell", "K_alpha", "P_ell")
MAX_SERIES_RATIO = 0.75


class SphereViolationError(ValueError):
    """s lies on the sphere [x], where the kernels are singular."""


class ParameterRangeError(ValueError):
    pass


class RatioTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class KernelId:
    family: str
    side: str = "left"
    form: str = "II"
    param: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.form not in ("I", "II"):
            raise ValueError(f"form must be 'I' or 'II', got {self.form!r}")

    @property
    def effective_side(self) -> str:
        if self.family == "CauchyL":
            return "left"
        if self.family == "CauchyR":
            return "right"
        return self.side

    def check_range(self, n: int) -> None:
        h = sce_exponent(n)
        p = self.param
        if self.family == "H_ell" and not (p is not None and 1 <= p <= h):
            raise ParameterRangeError(f"H_ell needs 1 <= ell <= {h}, got {p}")
        if self.family == "K_alpha" and not (p is not None and 1 <= p <= h - 1):
            raise ParameterRangeError(f"K_alpha needs 1 <= alpha <= {h - 1}, got {p}")
        if self.family == "P_ell" and not (p is not None and 0 <= p <= h - 1):
            raise ParameterRangeError(f"P_ell needs 0 <= ell <= {h - 1}, got {p}")

    def label(self) -> str:
        tail = "" if self.param is None else f"[{self.param}]"
        return f"{self.family}{tail}/{self.effective_side}/{self.form}"


def admissible_params(family: str, n: int) -> list[int | None]:
    h = sce_exponent(n)
    if family == "H_ell":
        return list(range(1, h + 1))
    if family == "K_alpha":
        return list(range(1, h))
    if family == "P_ell":
        return list(range(0, h))
    return [None]


# pointwise closed forms -------------------------------------------------------------


def _slice_complex(s: Paravector) -> complex:
    return complex(s.x0, s.vec_norm())


def q_complex(s: Paravector, x: Paravector) -> complex:
    """Q_{c,s}(x) as a complex number in the slice of s."""
    sc = _slice_complex(s)
    return sc * sc - 2 * x.x0 * sc + x.norm2()


def q_power(s: Paravector, x: Paravector, m: int) -> Multivector:
    """Q_{c,s}(x)^m for any integer m, as an element of C_{I_s}."""
    return complex_to_multivector(q_complex(s, x) ** m, s.imaginary_unit())


def _check_sphere(s: Paravector, x: Paravector) -> None:
    if s.n != x.n:
        raise ValueError("s and x must live in the same R^{n+1}")
    if same_sphere(x, s):
        raise SphereViolationError("s lies on the sphere [x]")


def _prefactor(kid: KernelId, n: int) -> float:
    h = sce_exponent(n)
    if kid.family in ("CauchyL", "CauchyR"):
        return 1.0
    if kid.family == "Fn":
        return float(gamma_n(n))
    if kid.family == "H_ell":
        return float(sigma(n, kid.param))
    if kid.family == "K_alpha":
        return float(k_alpha(n, kid.param))
    if kid.family == "P_ell":
        ell = kid.param
        return (-1) ** (ell - h) / math.factorial(h - ell) * float(gamma_n(n))
    raise ValueError(kid.family)


def _q_exponent(kid: KernelId, n: int) -> int:
    h = sce_exponent(n)
    return {
        "CauchyL": -1,
        "CauchyR": -1,
        "Fn": -(h + 1),
        "H_ell": -(kid.param or 0),
        "K_alpha": -((kid.param or 0) + 1),
        "P_ell": -(h + 1),
    }[kid.family]


def monogenic_kernel(y: Paravector) -> Multivector:
    """G(y) = conj(y) / (Sigma_{n+1} |y|^{n+1})."""
    r = y.norm()
    if r == 0:
        raise SphereViolationError("monogenic kernel is singular at the origin")
    return y.conj().to_multivector() * (1.0 / (sphere_area(y.n) * r ** (y.n + 1)))


def eval_kernel(kid: KernelId, s: Paravector, x: Paravector) -> Multivector:
    """Closed-form kernel value.  The monogenic family returns G(s - x)."""
    n = x.n
    if kid.family == "Monogenic":
        if np.allclose((s - x).to_array(), 0.0):
            raise SphereViolationError("monogenic kernel needs s != x")
        return monogenic_kernel(s - x)
    kid.check_range(n)
    _check_sphere(s, x)
    if kid.form == "I" and kid.family in ("CauchyL", "CauchyR"):
        return _cauchy_form_one(kid.effective_side, s, x)
    factor = (s - x.conj()).to_multivector()
    qpow = q_power(s, x, _q_exponent(kid, n))
    if kid.family == "H_ell":
        return qpow * _prefactor(kid, n)
    if kid.effective_side == "left":
        val = factor * qpow
    else:
        val = qpow * factor
    if kid.family == "P_ell":
        h = sce_exponent(n)
        shift = q_scalar_power(s, x.x0, h - kid.param)
        val = val * shift if kid.effective_side == "left" else shift * val
    return val * _prefactor(kid, n)


def q_scalar_power(s: Paravector, x0: float, m: int) -> Multivector:
    """(s - x_0)^m inside the slice of s."""
    return complex_to_multivector((_slice_complex(s) - x0) ** m, s.imaginary_unit())


def _cauchy_form_one(side: str, s: Paravector, x: Paravector) -> Multivector:
    """-(x^2 - 2 x Re(s) + |s|^2)^{-1} (x - conj s) and its right counterpart.

    The quadratic expression lives in the slice of x, where it is inverted.
    """
    zx = complex(x.x0, x.vec_norm())
    w = zx * zx - 2 * zx * s.x0 + s.norm2()
    inv = complex_to_multivector(1.0 / w, x.imaginary_unit())
    lin = (x - s.conj()).to_multivector()
    return -(inv * lin) if side == "left" else -(lin * inv)


def kernel_forms_agree(s: Paravector, x: Paravector) -> float:
    """Largest gap between form I and form II of the left and right Cauchy kernels."""
    gaps = []
    for fam in ("CauchyL", "CauchyR"):
        one = eval_kernel(KernelId(fam, form="I"), s, x)
        two = eval_kernel(KernelId(fam, form="II"), s, x)
        gaps.append((one - two).norm())
    return max(gaps)


# series ----------------------------------------------------------------------------


def _s_power(s: Paravector, m: int) -> Multivector:
    """s^m for any integer m inside the slice of s."""
    return complex_to_multivector(_slice_complex(s) ** m, s.imaginary_unit())


def kernel_series_terms(kid: KernelId, s: Paravector, x: Paravector, terms: int, variant: str = "default"):
    """Yield (k, term) with the kernel equal to the sum of the terms over k."""
    n = x.n
    h = sce_exponent(n)
    kid.check_range(n)
    ratio = x.norm() / s.norm()
    if ratio > MAX_SERIES_RATIO + 1e-12:
        raise RatioTooLargeError(f"|x|/|s| = {ratio:.3f} exceeds {MAX_SERIES_RATIO}")
    left = kid.effective_side == "left"
    xm = x.to_multivector()
    x0 = x.x0
    r2 = x.norm2()

    def place(poly: Multivector, k: int) -> Multivector:
        sp = _s_power(s, -1 - k)
        return poly * sp if left else sp * poly

    fam = kid.family
    if fam in ("CauchyL", "CauchyR"):
        p = Multivector.scalar(n, 1.0)
        for k in range(terms + 1):
            yield k, place(p, k)
            p = p * xm
    elif fam == "Fn":
        g = float(gamma_n(n))
        for k in range(2 * h, terms + 1):
            yield k, place(eval_appell(k - 2 * h, x) * (g * binom(k, k - 2 * h)), k)
    elif fam == "H_ell" and variant == "default":
        ell = kid.param
        sg = float(sigma(n, ell))
        for k in range(2 * ell - 1, terms + 1):
            acc = Multivector(n)
            for a in range(h - ell + 1):
                for b in range(a + 1):
                    w = kon(k, a, b, ell, h)
                    if w:
                        idx = k - 2 * a + b - 2 * ell + 1
                        acc = acc + eval_harmonic(idx, x) * (w * (-2 * x0) ** b * r2 ** (a - b))
            yield k, place(acc * sg, k)
    elif fam == "H_ell" and variant == "polyharmonic":
        yield from _polyharm_power_terms(kid.param, s, x, terms)
    elif fam == "K_alpha":
        alpha = kid.param
        ka = float(k_alpha(n, alpha))
        for k in range(2 * alpha, terms + 1):
            acc = Multivector(n)
            for ell in range(h - alpha + 1):
                for nu in range(ell + 1):
                    w = kappa(k, h, alpha, ell, nu)
                    if w:
                        idx = k - 2 * alpha - 2 * ell + nu
                        acc = acc + eval_appell(idx, x) * (w * (-2 * x0) ** nu * r2 ** (ell - nu))
            yield k, place(acc * ka, k)
    elif fam == "P_ell":
        ell = kid.param
        pre = float(gamma_n(n)) / math.factorial(h - ell)
        for k in range(h + ell, terms + 1):
            acc = Multivector(n)
            for i in range(h - ell + 1):
                w = binom(h - ell, i) * binom(k - i - ell + h, k - i - ell - h) * (-1) ** (i + h - ell)
                if w:
                    acc = acc + eval_appell(k - i - ell - h, x) * (w * x0**i)
            yield k, place(acc * pre, k)
    else:
        raise ValueError(f"no series for {kid.label()} (variant {variant!r})")


def _polyharm_power_terms(ell: int, s: Paravector, x: Paravector, terms: int):
    """sigma (sum_{k>=0} H_k(x) s^{-2-k})^ell, grouped by total power of s^{-1}.

    H_k(x) and s are not in a common commutative subalgebra, but Q^{-1} is a
    scalar-slice value and its expansion is intrinsic in s, so the terms are
    collected as coefficients of s^{-1-k} in the slice of x and the powers of
    s are applied at the end.
    """
    n = x.n
    sg = float(sigma(n, ell))
    zx = complex(x.x0, x.vec_norm())
    ux = x.imaginary_unit()
    # H_k(x) = sum_j x^{k-j} xbar^j lives in the slice of x; coefficients are real
    # polynomials in x_0 and |x|^2, hence central: store them as complex numbers in C_{I_x}.
    base = np.zeros(terms + 2, dtype=complex)  # coefficient of s^{-1-k}
    for k in range(terms):
        if k + 1 <= terms:
            base[k + 1] = sum(zx ** (k - j) * zx.conjugate() ** j for j in range(k + 1))
    acc = np.zeros(terms + 2, dtype=complex)
    acc[0] = 1.0  # s^0 placeholder: index k means s^{-k}
    # work with exponents of s^{-1}: base[k+1] multiplies s^{-(k+2)}
    shifted = np.zeros(terms + 2, dtype=complex)
    for k in range(terms):
        if k + 2 <= terms + 1:
            shifted[k + 2] = base[k + 1]
    for _ in range(ell):
        acc = np.convolve(acc, shifted)[: terms + 2]
    for p in range(1, terms + 2):
        if acc[p] != 0:
            yield p - 1, complex_to_multivector(acc[p] * sg, ux) * _s_power(s, -p)


def eval_kernel_series(kid: KernelId, s: Paravector, x: Paravector, terms: int, variant: str = "default") -> Multivector:
    total = Multivector(x.n)
    for _, t in kernel_series_terms(kid, s, x, terms, variant):
        total = total + t
    return total


@dataclass
class SeriesComparison:
    kernel: str
    ratio: float
    terms: int
    defect: float
    tail_bound: float
    envelope: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.tail_bound


def compare_series(kid: KernelId, s: Paravector, x: Paravector, terms: int, variant: str = "default") -> SeriesComparison:
    """Partial sum against the closed form, with a geometric tail bound.

    The envelope C is fitted from the last half of the retained terms as
    max ||term_k|| / rho^k; the tail is bounded by C rho^{N+1} / (1 - rho),
    widened by the polynomial growth of the envelope and a rounding floor.
    """
    rho = x.norm() / s.norm()
    closed = eval_kernel(kid, s, x)
    total = Multivector(x.n)
    norms = {}
    for k, t in kernel_series_terms(kid, s, x, terms, variant):
        total = total + t
        norms[k] = norms.get(k, 0.0) + t.norm()
    defect = (total - closed).norm()
    envelope = 0.0
    if rho > 0:
        for k, v in norms.items():
            if k >= terms // 2:
                envelope = max(envelope, v / rho**k)
        growth = max(1.0, (norms.get(terms, 0.0) / rho**terms) / envelope) if envelope else 1.0
        tail = 2.0 * growth * envelope * rho ** (terms + 1) / (1 - rho)
    else:
        tail = 0.0
    floor = 1e-12 * max(1.0, closed.norm(), max(norms.values(), default=0.0))
    return SeriesComparison(kid.label(), rho, terms, defect, tail + floor, envelope)


# jets of kernels -------------------------------------------------------------------


def _q_series(s: Paravector, center: Paravector, order: int) -> np.ndarray:
    """Complex Taylor coefficients of Q_{c,s}(c + t) in the slice of s."""
    n = center.n
    table = index_table(n + 1, order)
    m = table.size(order)
    sc = _slice_complex(s)
    q = np.zeros(m, dtype=complex)
    c = center.to_array()
    q[0] = sc * sc - 2 * c[0] * sc + float(c @ c)
    if order >= 1:
        for mu in range(n + 1):
            e = [0] * (n + 1)
            e[mu] = 1
            q[table.index[tuple(e)]] = (2 * c[0] - 2 * sc) if mu == 0 else 2 * c[mu]
    if order >= 2:
        for mu in range(n + 1):
            e = [0] * (n + 1)
            e[mu] = 2
            q[table.index[tuple(e)]] = 1.0
    return q


def jet_q_power(s: Paravector, center: Paravector, order: int, m: int) -> Jet:
    """Jet of Q_{c,s}(x)^m around the center (m may be negative)."""
    _check_sphere(s, center)
    table = index_table(center.n + 1, order)
    q = _q_series(s, center, order)
    base = series_reciprocal(table, order, q) if m < 0 else q
    z = series_power(table, order, base, abs(m))
    return Jet.from_complex(center, order, z, s.imaginary_unit())


def jet_s_minus_x0_power(s: Paravector, center: Paravector, order: int, m: int) -> Jet:
    table = index_table(center.n + 1, order)
    lin = np.zeros(table.size(order), dtype=complex)
    lin[0] = _slice_complex(s) - center.x0
    if order >= 1:
        e = [0] * (center.n + 1)
        e[0] = 1
        lin[table.index[tuple(e)]] = -1.0
    z = series_power(table, order, lin, m)
    return Jet.from_complex(center, order, z, s.imaginary_unit())


def jet_s_minus_xbar(s: Paravector, center: Paravector, order: int) -> Jet:
    return s.to_multivector() - Jet.identity(center, order).conj()


def jet_of_kernel(kid: KernelId, s: Paravector, center: Paravector, order: int) -> Jet:
    """Jet in x of the closed-form kernel, assembled from slice jets in the written order."""
    n = center.n
    if kid.family == "Monogenic":
        raise ValueError("the monogenic kernel has no slice structure; use eval_kernel")
    kid.check_range(n)
    if kid.form == "I":
        raise ValueError("jets are built from form II, where Q lives in the slice of s")
    qpow = jet_q_power(s, center, order, _q_exponent(kid, n))
    if kid.family == "H_ell":
        return qpow * _prefactor(kid, n)
    lin = jet_s_minus_xbar(s, center, order)
    val = lin * qpow if kid.effective_side == "left" else qpow * lin
    if kid.family == "P_ell":
        shift = jet_s_minus_x0_power(s, center, order, sce_exponent(n) - kid.param)
        val = val * shift if kid.effective_side == "left" else shift * val
    return val * _prefactor(kid, n)


def _slice_kernel_jet(s: Paravector, center: Paravector, order: int, qexp: int, lin: bool, side: str, x0pow: int = 0) -> Jet:
    """(s - xbar)^{lin} (s - x_0)^{x0pow} Q^{qexp} with the paravector factor on `side`."""
    val = jet_q_power(s, center, order, qexp)
    if x0pow:
        val = val * jet_s_minus_x0_power(s, center, order, x0pow)
    if lin:
        f = jet_s_minus_xbar(s, center, order)
        val = f * val if side == "left" else val * f
    return val


# differential identities -------------------------------------------------------------


DIFFERENTIAL_IDENTITIES = (
    "dirac_laplace",
    "dbar_laplace",
    "laplace_power",
    "harmonic_kernel",
    "fueter_sce",
    "cliffordian_kernel",
    "polyanalytic_kernel",
    "dbar_power",
    "q_power_laplace",
    "laplace_leibniz",
    "dirac_cauchy_numerator",
    "regularity_F",
    "regularity_H",
    "regularity_P",
    "regularity_K",
)


@dataclass
class IdentityDefect:
    name: str
    n: int
    params: dict
    defect: float
    scale: float

    @property
    def relative(self) -> float:
        return self.defect / max(self.scale, 1e-300)


def _apply(j: Jet, ops: list[tuple], side: str) -> Jet:
    for op in ops:
        if op[0] == "D":
            j = j.dirac(conjugate=False, side=side)
        elif op[0] == "Dbar":
            j = j.dirac(conjugate=True, side=side)
        elif op[0] == "Lap":
            j = j.laplacian()
    return j


def _ops(*spec: tuple[str, int]) -> list[tuple]:
    out = []
    for name, k in spec:
        out.extend([(name,)] * k)
    return out


def _order(ops: list[tuple]) -> int:
    return sum(2 if o[0] == "Lap" else 1 for o in ops)


def _compare(lhs: Jet, rhs: Jet) -> tuple[float, float]:
    k = min(lhs.order, rhs.order)
    a = lhs.truncate(k).coeffs
    b = rhs.truncate(k).coeffs
    return float(np.max(np.abs(a - b))), float(max(np.max(np.abs(b)), np.max(np.abs(a)), 1e-300))


def dbar_power_closed(s: Paravector, center: Paravector, order: int, beta: int, side: str = "left") -> Jet:
    """Closed form of conj-Dirac^beta applied to the left Cauchy kernel.

    Factorial quotients (h-m-j-1)!/(h-2m-2)! are read as finite products, so the
    formula is a polynomial identity in h that also covers small h.
    """
    n = center.n
    h = sce_exponent(n)
    total = Jet.zeros(center, order)
    if beta % 2 == 1:
        m = (beta - 1) // 2
        lead = 2 ** (2 * m + 1)
        for j in range(m + 1):
            c = lead * 2 ** (2 * j) * math.factorial(m + j) * factorial_ratio(h - m - j - 1, h - 2 * m - 2) * binom(m + j, 2 * j)
            if c:
                total = total + _slice_kernel_jet(s, center, order, -m - j - 1, False, side, 2 * j) * float(c)
        for j in range(m):
            c = (
                lead
                * 2 ** (2 * j + 1)
                * math.factorial(m + j + 1)
                * factorial_ratio(h - m - j - 2, h - 2 * m - 2)
                * binom(m + j + 1, 2 * j + 1)
            )
            if c:
                total = total + _slice_kernel_jet(s, center, order, -m - j - 2, True, side, 2 * j + 1) * float(c)
        c = 4 ** (2 * m + 1) * math.factorial(2 * m + 1)
        total = total + _slice_kernel_jet(s, center, order, -2 * m - 2, True, side, 2 * m + 1) * float(c)
    else:
        m = beta // 2
        lead = 2 ** (2 * m)
        for j in range(m):
            c = lead * 2 ** (2 * j + 1) * math.factorial(m + j) * factorial_ratio(h - m - j - 1, h - 2 * m - 1) * binom(m + j, 2 * j + 1)
            if c:
                total = total + _slice_kernel_jet(s, center, order, -m - j - 1, False, side, 2 * j + 1) * float(c)
        for j in range(m):
            c = lead * 2 ** (2 * j) * math.factorial(m + j) * factorial_ratio(h - m - j - 1, h - 2 * m - 1) * binom(m + j, 2 * j)
            if c:
                total = total + _slice_kernel_jet(s, center, order, -m - j - 1, True, side, 2 * j) * float(c)
        c = 4 ** (2 * m) * math.factorial(2 * m)
        total = total + _slice_kernel_jet(s, center, order, -2 * m - 1, True, side, 2 * m) * float(c)
    return total


def identity_parameters(name: str, n: int) -> list[dict]:
    """All admissible parameter sets of a named identity."""
    h = sce_exponent(n)
    if name in ("dirac_laplace", "dbar_laplace"):
        return [{"m": m} for m in range(0, h + 2)]
    if name == "laplace_power":
        return [{"ell": ell} for ell in range(0, h + 1)]
    if name == "harmonic_kernel":
        return [{"ell": ell} for ell in range(1, h + 1)]
    if name in ("fueter_sce", "q_power_laplace", "regularity_F", "dirac_cauchy_numerator"):
        return [{}]
    if name == "cliffordian_kernel":
        return [{"alpha": a} for a in range(1, h)]
    if name in ("polyanalytic_kernel", "regularity_P"):
        return [{"ell": ell} for ell in range(0, h)]
    if name == "dbar_power":
        return [{"beta": b} for b in range(1, h + 1)]
    if name == "laplace_leibniz":
        return [{"alpha": a} for a in range(1, h + 2)]
    if name == "regularity_H":
        return [{"ell": ell} for ell in range(1, h + 1)]
    if name == "regularity_K":
        return [{"alpha": a} for a in range(1, h)]
    raise KeyError(name)


def verify_differential_identity(
    name: str, s: Paravector, x: Paravector, params: dict | None = None, side: str = "left", extra: int = 1
) -> IdentityDefect:
    """Apply jets of the source kernel at x and compare with the closed form.

    Both sides are compared on every retained Taylor coefficient (value plus
    `extra` orders of derivatives).  Right-sided variants apply the operators
    from the right to the right kernels.
    """
    params = dict(params or {})
    n = x.n
    h = sce_exponent(n)
    _check_sphere(s, x)
    if name not in DIFFERENTIAL_IDENTITIES:
        raise KeyError(f"unknown identity {name!r}")

    def cauchy(order):
        return jet_of_kernel(KernelId("CauchyL" if side == "left" else "CauchyR"), s, x, order)

    def run(source: Callable[[int], Jet], ops: list[tuple], target: Callable[[int], Jet]):
        order = _order(ops) + extra
        src = source(order)
        lhs = _apply(src, ops, side)
        rhs = target(lhs.order)
        d, sc = _compare(lhs, rhs)
        # identities whose right side vanishes are scaled by the source jet
        return d, max(sc, src.max_abs())

    if name == "dirac_laplace":
        m = params["m"]
        d, sc = run(
            lambda K: _slice_kernel_jet(s, x, K, -m, True, side),
            _ops(("D", 1)),
            lambda K: jet_q_power(s, x, K, -m) * float(2 * (m - h - 1)),
        )
    elif name == "dbar_laplace":
        m = params["m"]
        d, sc = run(
            lambda K: jet_q_power(s, x, K, -m),
            _ops(("Dbar", 1)),
            lambda K: _slice_kernel_jet(s, x, K, -m - 1, True, side) * float(2 * m),
        )
    elif name in ("laplace_power", "cliffordian_kernel"):
        ell = params["ell"] if name == "laplace_power" else params["alpha"]
        d, sc = run(
            cauchy,
            _ops(("Lap", ell)),
            lambda K: _slice_kernel_jet(s, x, K, -ell - 1, True, side) * float(laplace_constant(n, ell)),
        )
    elif name == "harmonic_kernel":
        ell = params["ell"]
        d, sc = run(cauchy, _ops(("Lap", ell - 1), ("D", 1)), lambda K: jet_of_kernel(KernelId("H_ell", side, param=ell), s, x, K))
    elif name == "fueter_sce":
        d, sc = run(cauchy, _ops(("Lap", h)), lambda K: jet_of_kernel(KernelId("Fn", side), s, x, K))
    elif name == "polyanalytic_kernel":
        ell = params["ell"]
        d, sc = run(
            cauchy, _ops(("Dbar", h - ell), ("Lap", ell)), lambda K: jet_of_kernel(KernelId("P_ell", side, param=ell), s, x, K)
        )
    elif name == "q_power_laplace":
        d, sc = run(
            cauchy,
            _ops(("Dbar", h)),
            lambda K: _slice_kernel_jet(s, x, K, -h - 1, True, side, h) * ((-1) ** h / math.factorial(h) * gamma_n(n)),
        )
    elif name == "dbar_power":
        beta = params["beta"]
        d, sc = run(cauchy, _ops(("Dbar", beta)), lambda K: dbar_power_closed(s, x, K, beta, side))
    elif name == "laplace_leibniz":
        a = params["alpha"]
        d, sc = run(
            lambda K: _slice_kernel_jet(s, x, K, -a, True, side),
            _ops(("Dbar", 1)),
            lambda K: jet_q_power(s, x, K, -a) * float(2 * (h - a))
            + _slice_kernel_jet(s, x, K, -a - 1, True, side, 1) * float(4 * a),
        )
    elif name == "dirac_cauchy_numerator":
        # Q + (s - xbar) s - xbar (s - xbar) = 2 (s - xbar)(s - x_0), an algebraic identity
        K = extra
        lin = jet_s_minus_xbar(s, x, K)
        xb = Jet.identity(x, K).conj()
        lhs = jet_q_power(s, x, K, 1) + lin * s.to_multivector() - xb * lin
        rhs = lin * jet_s_minus_x0_power(s, x, K, 1) * 2.0
        d, sc = _compare(lhs, rhs)
    elif name.startswith("regularity_"):
        fam = name.split("_", 1)[1]
        if fam == "F":
            kid, ops = KernelId("Fn", side), _ops(("D", 1))
        elif fam == "H":
            ell = params["ell"]
            kid, ops = KernelId("H_ell", side, param=ell), _ops(("Lap", h - ell + 1))
        elif fam == "P":
            ell = params["ell"]
            kid, ops = KernelId("P_ell", side, param=ell), _ops(("D", h - ell + 1))
        else:
            a = params["alpha"]
            kid, ops = KernelId("K_alpha", side, param=a), _ops(("D", 1), ("Lap", h - a))
        order = _order(ops) + extra
        src = jet_of_kernel(kid, s, x, order)
        out = _apply(src, ops, side)
        d = out.max_abs()
        sc = max(src.max_abs(), 1e-300)
    else:  # pragma: no cover - guarded above
        raise KeyError(name)
    return IdentityDefect(name, n, params, d, sc)


# slice regularity in s ------------------------------------------------------------------


def slice_split(kid: KernelId, s: Paravector, x: Paravector) -> tuple[Multivector, Multivector]:
    """(alpha, beta) with K(u + I v) = alpha + beta I (left kernels) or alpha + I beta (right kernels)."""
    unit = s.imaginary_unit()
    u, v = s.x0, s.vec_norm()
    plus = eval_kernel(kid, Paravector(u, v * unit), x)
    minus = eval_kernel(kid, Paravector(u, -v * unit), x)
    iu = Multivector.vector(x.n, 0.0, unit)
    alpha = (plus + minus) * 0.5
    diff = (plus - minus) * 0.5
    # I^{-1} = -I
    beta = -(diff * iu) if kid.effective_side == "left" else -(iu * diff)
    return alpha, beta


def verify_slice_regularity_in_s(kid: KernelId, x: Paravector, grid, unit=None, step: float = 1e-4) -> float:
    """Largest central-difference residual of the Cauchy-Riemann system in s = u + I v."""
    n = x.n
    if unit is None:
        unit = np.zeros(n)
        unit[min(1, n - 1)] = 1.0
    unit = np.asarray(unit, dtype=float)
    worst = 0.0
    for u, v in grid:
        def split(uu, vv):
            return slice_split(kid, Paravector(uu, vv * unit), x)

        a_up, b_up = split(u + step, v)
        a_dn, b_dn = split(u - step, v)
        a_vp, b_vp = split(u, v + step)
        a_vm, b_vm = split(u, v - step)
        au = (a_up - a_dn) / (2 * step)
        bu = (b_up - b_dn) / (2 * step)
        av = (a_vp - a_vm) / (2 * step)
        bv = (b_vp - b_vm) / (2 * step)
        worst = max(worst, (au - bv).norm(), (av + bu).norm())
    return worst
