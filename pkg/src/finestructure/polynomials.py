"""Structural constants, polynomial families and combinatorial identities.

Coefficients are exact rationals (``fractions.Fraction``) and only become floats
when a polynomial is evaluated.  The evaluators accept any operand type that
supports ``*`` and ``conj()``-style conjugation supplied by the caller, so the
same coefficient tables drive paravectors, jets and operators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .algebra import Multivector, Paravector, complex_to_multivector


def sce_exponent(n: int) -> int:
    if n % 2 == 0 or n < 3:
        raise ValueError(f"n must be an odd integer >= 3, got {n}")
    return (n - 1) // 2


def rising(a: Fraction | int, k: int) -> Fraction:
    """Pochhammer symbol (a)_k = a (a+1) ... (a+k-1)."""
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def neg_pochhammer(h: int, ell: int) -> Fraction:
    """(-h)_ell = (-1)^ell h! / (h-ell)!, zero once ell exceeds h."""
    if ell > h:
        return Fraction(0)
    return Fraction((-1) ** ell * math.factorial(h), math.factorial(h - ell))


def binom(a: int, b: int) -> int:
    """Binomial coefficient with the convention binom(a, b) = 0 outside 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def factorial_ratio(a: int, b: int) -> Fraction:
    """a!/b! read as the product (b+1)(b+2)...a, which stays finite for negative b."""
    if a >= b:
        return Fraction(math.prod(range(b + 1, a + 1)))
    return Fraction(1, math.prod(range(a + 1, b + 1)))


# structural constants ---------------------------------------------------------


@lru_cache(maxsize=None)
def gamma_n(n: int) -> int:
    h = sce_exponent(n)
    return math.factorial(h) ** 2 * 2 ** (n - 1) * (-1) ** h


@lru_cache(maxsize=None)
def sigma(n: int, ell: int) -> Fraction:
    h = sce_exponent(n)
    if not 1 <= ell <= h:
        raise ValueError(f"polyharmonic index must satisfy 1 <= ell <= {h}, got {ell}")
    return 2 ** (2 * ell - 1) * math.factorial(ell - 1) * neg_pochhammer(h, ell)


@lru_cache(maxsize=None)
def k_alpha(n: int, alpha: int) -> Fraction:
    h = sce_exponent(n)
    if not 1 <= alpha <= h - 1:
        raise ValueError(f"Cliffordian index must satisfy 1 <= alpha <= {h - 1}, got {alpha}")
    return 4**alpha * math.factorial(alpha) * neg_pochhammer(h, alpha)


def laplace_constant(n: int, ell: int) -> Fraction:
    """4^ell ell! (-h)_ell, the factor in Laplacian powers of the Cauchy kernel (any ell >= 0)."""
    return 4**ell * math.factorial(ell) * neg_pochhammer(sce_exponent(n), ell)


def appell_moment_constant(m: int, n: int) -> float:
    """c_{m,n} = m! (2h)! / (2 pi gamma_n (m+2h)!)."""
    h = sce_exponent(n)
    return float(Fraction(math.factorial(m) * math.factorial(2 * h), gamma_n(n) * math.factorial(m + 2 * h))) / (
        2 * math.pi
    )


def sphere_area(n: int) -> float:
    """Area of the unit sphere in R^{n+1}."""
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


@dataclass(frozen=True)
class Constants:
    n: int
    h: int
    gamma: int
    sigma: dict
    k: dict
    sphere_area: float

    @classmethod
    def for_n(cls, n: int) -> Constants:
        h = sce_exponent(n)
        return cls(
            n=n,
            h=h,
            gamma=gamma_n(n),
            sigma={ell: sigma(n, ell) for ell in range(1, h + 1)},
            k={a: k_alpha(n, a) for a in range(1, h)},
            sphere_area=sphere_area(n),
        )

    def c(self, m: int) -> float:
        return appell_moment_constant(m, self.n)


# coefficient tables ---------------------------------------------------------------


@lru_cache(maxsize=None)
def appell_coeff(ell: int, k: int, n: int) -> Fraction:
    half_up = Fraction(n + 1, 2)
    half_dn = Fraction(n - 1, 2)
    return binom(k, ell) * rising(half_up, k - ell) * rising(half_dn, ell) / rising(n, k)


@lru_cache(maxsize=None)
def harmonic_coeff(ell: int, k: int, n: int) -> Fraction:
    half_dn = Fraction(n - 1, 2)
    return binom(k, ell) * rising(half_dn, k - ell) * rising(half_dn, ell) / rising(n - 1, k)


def appell_table(k: int, n: int) -> list[Fraction]:
    return [appell_coeff(ell, k, n) for ell in range(k + 1)]


def harmonic_table(k: int, n: int) -> list[Fraction]:
    return [harmonic_coeff(ell, k, n) for ell in range(k + 1)]


def kon(k: int, alpha: int, beta: int, ell: int, h: int) -> int:
    """Weights of the polyharmonic kernel expansion in axially harmonic polynomials."""
    return binom(2 * h - 2 * alpha + beta - 2 * ell + k, 2 * h - 1) * binom(h - ell, alpha) * binom(alpha, beta)


def kappa(k: int, h: int, alpha: int, ell: int, nu: int) -> int:
    """Weights of the Cliffordian kernel expansion in Clifford-Appell polynomials.

    Multinomial weight of |x|^{2(ell-nu)} (-2 x_0 s)^nu s^{2(h-alpha-ell)} in
    Q^{h-alpha}, so nu runs over 0..ell.
    """
    return (
        binom(h - alpha, ell)
        * binom(ell, nu)
        * binom(k + 2 * h - 2 * alpha - 2 * ell + nu, k - 2 * alpha - 2 * ell + nu)
    )


def kappa_uncorrected(k: int, h: int, alpha: int, ell: int, nu: int) -> int:
    """Variant with binom(h-alpha-ell, nu) in the middle; kept to document that it
    does not reproduce the closed Cliffordian kernel."""
    return (
        binom(h - alpha, ell)
        * binom(h - alpha - ell, nu)
        * binom(k + 2 * h - 2 * alpha - 2 * ell + nu, k - 2 * alpha - 2 * ell + nu)
    )


def ktilde(h: int, ell: int, k: int, i: int) -> int:
    """Weights of the polyanalytic kernel expansion; carries the sign (-1)^{i+h-ell}."""
    return binom(h - ell, i) * binom(k - i - ell + h, k - i - ell - h) * (-1) ** (i + h - ell)


def kbold(m: int, h: int, t: int, ell: int, k: int) -> int:
    """Weights of the polyharmonic resolvent expansion in Clifford-harmonic operators."""
    return binom(m, 2 * h - 1) * binom(h - ell - k, t) * binom(h - ell, k)


# evaluation -------------------------------------------------------------------------


def bilinear_sum(coeffs: Sequence[Fraction | float], x, xbar, one):
    """sum_l c_l x^{k-l} xbar^l with k = len(coeffs) - 1 for any ring-like operands."""
    k = len(coeffs) - 1
    xp = [one]
    for _ in range(k):
        xp.append(xp[-1] * x)
    out = None
    xb = one
    for ell in range(k + 1):
        c = coeffs[ell]
        if c != 0:
            term = (xp[k - ell] * xb) * float(c)
            out = term if out is None else out + term
        if ell < k:
            xb = xb * xbar
    return out if out is not None else one * 0.0


def _slice_eval(coeffs: Sequence[Fraction | float], x: Paravector) -> Multivector:
    z = complex(x.x0, x.vec_norm())
    k = len(coeffs) - 1
    val = sum(float(c) * z ** (k - ell) * z.conjugate() ** ell for ell, c in enumerate(coeffs))
    return complex_to_multivector(val, x.imaginary_unit())


def eval_appell(k: int, x: Paravector) -> Multivector:
    """Clifford-Appell polynomial P_k^n(x); zero for k < 0."""
    if k < 0:
        return Multivector(x.n)
    return _slice_eval(appell_table(k, x.n), x)


def eval_harmonic(k: int, x: Paravector) -> Multivector:
    """Axially harmonic polynomial H_k^n(x); zero for k < 0."""
    if k < 0:
        return Multivector(x.n)
    return _slice_eval(harmonic_table(k, x.n), x)


def eval_polyharm(k: int, x: Paravector) -> Multivector:
    """Polyharmonic polynomial sum_l x^{k-l} xbar^l; zero for k < 0."""
    if k < 0:
        return Multivector(x.n)
    return _slice_eval([1] * (k + 1), x)


def fueter_variables(x: Paravector) -> list[Multivector]:
    """z_j = x_j - x_0 e_j for j = 1..n."""
    n = x.n
    out = []
    for j in range(1, n + 1):
        c = np.zeros(1 << n)
        c[0] = x.vec[j - 1]
        c[j] = -x.x0
        out.append(Multivector(n, c))
    return out


def eval_fueter(kvec: Sequence[int], x: Paravector) -> Multivector:
    """Fueter polynomial: symmetrized products of z_j, normalized by 1/|k|!."""
    n = x.n
    if len(kvec) != n or any(k < 0 for k in kvec):
        raise ValueError(f"multi-index must have {n} nonnegative entries")
    z = fueter_variables(x)
    letters = [j for j, k in enumerate(kvec) for _ in range(k)]
    total = Multivector(n)
    count = 0
    for perm in itertools.permutations(letters):
        prod = Multivector.scalar(n, 1.0)
        for j in perm:
            prod = prod * z[j]
        total = total + prod
        count += 1
    # permutations() runs over all |k|! orderings, as in the defining sum
    return total / math.factorial(len(letters)) if count else Multivector.scalar(n, 1.0)


def appell_from_fueter(k: int, x: Paravector) -> Multivector:
    """P_k^n(x) rebuilt as sum over |k_vec| = k of Fueter polynomials times
    (nabla^{k_vec} P_k^n)(0) / k_vec!, with the gradients read off a jet."""
    from .jets import Jet

    n = x.n
    origin = Paravector.real(n, 0.0)
    var = Jet.identity(origin, k)
    pj = bilinear_sum(appell_table(k, n), var, var.conj(), Jet.constant(origin, k, 1.0))
    total = Multivector(n)
    for kvec in _compositions(k, n):
        exps = (0,) + tuple(kvec)
        # jet coefficient = nabla^{k_vec} P(0) / k_vec!
        grad_over_fact = pj.coefficient(exps)
        total = total + eval_fueter(kvec, x) * grad_over_fact
    return total


def _compositions(k: int, parts: int):
    for combo in itertools.combinations_with_replacement(range(parts), k):
        e = [0] * parts
        for c in combo:
            e[c] += 1
        yield tuple(e)


# closed forms used by the identities ------------------------------------------------


def dirac_laplace_real_constant(n: int, ell: int, k: int) -> Fraction:
    """Value d_k with (D Delta^{ell-1} x^k) restricted to the real axis = d_k x_0^{k-2ell+1}."""
    h = sce_exponent(n)
    if k < 2 * ell - 1:
        return Fraction(0)
    head = Fraction(
        4**ell * math.factorial(h) * (-1) ** ell * math.factorial(ell - 1),
        2 * math.factorial(2 * ell - 1) * math.factorial(h - ell),
    )
    return head * Fraction(math.factorial(k), math.factorial(k - 2 * ell + 1))


def laplacian_real_constant(n: int, alpha: int, k: int) -> Fraction:
    """Value c_k with (Delta^alpha x^k) restricted to the real axis = c_k x_0^{k-2alpha}."""
    h = sce_exponent(n)
    if k < 2 * alpha:
        return Fraction(0)
    head = Fraction(4**alpha * (-1) ** alpha * math.factorial(alpha), math.factorial(2 * alpha)) * rising(
        h - alpha + 1, alpha
    )
    return head * Fraction(math.factorial(k), math.factorial(k - 2 * alpha))


# identity suite ----------------------------------------------------------------------


@dataclass
class IdentityReport:
    name: str
    n: int
    cases: int
    exact_defect: Fraction | None
    float_defect: float
    worst: tuple

    @property
    def passed(self) -> bool:
        exact_ok = self.exact_defect is None or self.exact_defect == 0
        return exact_ok and self.float_defect <= 1e-12


def _exact_rows(name: str, n: int, kmax: int):
    """Yield (index tuple, lhs, rhs) in exact arithmetic."""
    h = sce_exponent(n)
    if name == "appell_harmonic_leading":
        for m in range(max(1, 2 * h - 1), kmax + 1):
            j = m - 2 * h + 1
            lhs = appell_coeff(j, j, n) * binom(m + 1, m + 1 - 2 * h)
            rhs = binom(m, 2 * h - 1) * harmonic_coeff(j, j, n)
            yield (m,), lhs, rhs
    elif name == "appell_harmonic_general":
        for m in range(max(1, 2 * h), kmax + 1):
            for ell in range(m - 2 * h + 1):
                lhs = appell_coeff(ell, m - 2 * h + 1, n) * binom(m + 1, m + 1 - 2 * h) - appell_coeff(
                    ell, m - 2 * h, n
                ) * binom(m, m - 2 * h)
                rhs = binom(m, 2 * h - 1) * harmonic_coeff(ell, m - 2 * h + 1, n)
                yield (m, ell), lhs, rhs
    elif name == "harmonic_double_sum":
        for ell in range(1, h + 1):
            for k in range(2 * ell - 1, kmax + 1):
                lhs = sum(
                    kon(k, a, b, ell, h) * (-2) ** b for a in range(h - ell + 1) for b in range(a + 1)
                )
                rhs = Fraction(math.factorial(k), math.factorial(2 * ell - 1) * math.factorial(k - 2 * ell + 1))
                yield (ell, k), Fraction(lhs), rhs
    elif name == "cliffordian_double_sum":
        for alpha in range(1, h):
            for k in range(2 * alpha, kmax + 1):
                lhs = sum(
                    kappa(k, h, alpha, ell, nu) * (-2) ** nu
                    for ell in range(h - alpha + 1)
                    for nu in range(ell + 1)
                )
                rhs = Fraction(math.factorial(k), math.factorial(2 * alpha) * math.factorial(k - 2 * alpha))
                yield (alpha, k), Fraction(lhs), rhs
    elif name == "polyanalytic_alternating_sum":
        for ell in range(h):
            for k in range(h + ell, kmax + 1):
                lhs = Fraction(sum(ktilde(h, ell, k, i) for i in range(h - ell + 1)))
                if k >= 2 * h:
                    rhs = (-1) ** (h - ell) * Fraction(
                        math.factorial(h - ell) * math.factorial(k),
                        math.factorial(k - h - ell) * math.factorial(2 * h),
                    ) * binom(2 * h, h - ell)
                else:
                    rhs = Fraction((-1) ** (h - ell) * binom(k, k - h - ell))
                yield (ell, k), lhs, rhs
    elif name == "constant_pairs":
        g = gamma_n(n)
        for i in range(h):
            # k_{h-i-1} k_{i+1} = gamma_n for 0 <= i <= h-2
            if i <= h - 2:
                yield ("k", i), k_alpha(n, h - i - 1) * k_alpha(n, i + 1), Fraction(g)
            yield ("sigma", i), sigma(n, h - i) * sigma(n, i + 1), Fraction(-g)
    else:
        raise KeyError(name)


EXACT_IDENTITIES = ("appell_harmonic_leading", "appell_harmonic_general", "harmonic_double_sum", "cliffordian_double_sum", "polyanalytic_alternating_sum", "constant_pairs")
NUMERIC_IDENTITIES = ("appell_recurrence", "laplace_shift")
IDENTITY_NAMES = EXACT_IDENTITIES + NUMERIC_IDENTITIES


def identity_suite(name: str, n: int, kmax: int = 30, points: int = 5, seed: int = 0) -> IdentityReport:
    """Run one named identity over its index range and report the worst defect."""
    if name not in IDENTITY_NAMES:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(IDENTITY_NAMES)}")
    if name in EXACT_IDENTITIES:
        worst_exact = Fraction(0)
        worst_float = 0.0
        worst = ()
        cases = 0
        for idx, lhs, rhs in _exact_rows(name, n, kmax):
            cases += 1
            d = abs(Fraction(lhs) - Fraction(rhs))
            scale = max(1.0, abs(float(rhs)))
            fd = abs(float(lhs) - float(rhs)) / scale
            if d > worst_exact or (d == worst_exact and fd > worst_float):
                worst = idx
            worst_exact = max(worst_exact, d)
            worst_float = max(worst_float, fd)
        return IdentityReport(name, n, cases, worst_exact, worst_float, worst)
    rng = np.random.default_rng(seed)
    if name == "appell_recurrence":
        return _appell_recurrence_report(n, min(kmax, 30), rng, points)
    return _laplace_shift_report(n, rng, points)


def _random_paravector(rng: np.random.Generator, n: int, radius: float = 1.0) -> Paravector:
    v = rng.normal(size=n + 1)
    v *= radius * rng.uniform(0.3, 1.0) / np.linalg.norm(v)
    return Paravector.from_array(v)


def _gmul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gauss_bilinear(coeffs: Sequence[Fraction], z: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """sum c_l z^{k-l} conj(z)^l over Gaussian rationals."""
    k = len(coeffs) - 1
    zc = (z[0], -z[1])
    zp, zcp = [(Fraction(1), Fraction(0))], [(Fraction(1), Fraction(0))]
    for _ in range(k):
        zp.append(_gmul(zp[-1], z))
        zcp.append(_gmul(zcp[-1], zc))
    re = im = Fraction(0)
    for ell, c in enumerate(coeffs):
        t = _gmul(zp[k - ell], zcp[ell])
        re += c * t[0]
        im += c * t[1]
    return re, im


def _appell_recurrence_report(n: int, kmax: int, rng, points: int) -> IdentityReport:
    """Exact check on the slice of a paravector with rational real part and |vec|.

    Every term of the identity is a polynomial in x and its conjugate, so the
    slice isomorphism reduces it to Gaussian rationals.  The float defect uses
    double-precision evaluation relative to the size of the largest term.
    """
    h = sce_exponent(n)
    worst_exact, worst, worst_idx, cases = Fraction(0), 0.0, (), 0
    for _ in range(points):
        z = (Fraction(int(rng.integers(-9, 10)), 10), Fraction(int(rng.integers(1, 10)), 10))
        x = Paravector(float(z[0]), [float(z[1])] + [0.0] * (n - 1))
        for ell in range(kmax):
            a = _gauss_bilinear(appell_table(ell + 1, n), z)
            b = _gmul(z, _gauss_bilinear(appell_table(ell, n), z))
            c = _gauss_bilinear(harmonic_table(ell + 1, n), z)
            wa, wb, wc = binom(ell + 1 + 2 * h, ell + 1), binom(ell + 2 * h, ell), binom(ell + 2 * h, 2 * h - 1)
            exact = max(abs(wa * a[i] - wb * b[i] - wc * c[i]) for i in range(2))
            worst_exact = max(worst_exact, exact)
            fa = eval_appell(ell + 1, x) * wa
            fb = (x.to_multivector() * eval_appell(ell, x)) * wb
            fc = eval_harmonic(ell + 1, x) * wc
            scale = max(1.0, fa.norm(), fb.norm(), fc.norm())
            d = (fa - fb - fc).norm() / scale
            cases += 1
            if d > worst:
                worst, worst_idx = d, (ell,)
    return IdentityReport("appell_recurrence", n, cases, worst_exact, worst, worst_idx)


def _laplace_shift_report(n: int, rng, points: int) -> IdentityReport:
    """Delta^h(x^{m+1}) - x Delta^h(x^m) = 2h D Delta^{h-1} x^m, checked on jets."""
    from .jets import Jet, apply_laplacian_power

    h = sce_exponent(n)
    worst, worst_idx, cases = 0.0, (), 0
    mmax = 2 * h + 3
    # values at the center only need the coefficients up to the derivative order
    order = 2 * h
    for _ in range(points):
        c = _random_paravector(rng, n, 0.8)
        x = Jet.identity(c, order)
        powers = [Jet.constant(c, order, 1.0)]
        for _ in range(mmax + 1):
            powers.append(powers[-1] * x)
        for m in range(mmax + 1):
            up = apply_laplacian_power(powers[m + 1], h).value()
            shifted = c.to_multivector() * apply_laplacian_power(powers[m], h).value()
            rhs = apply_laplacian_power(powers[m], h - 1).dirac().value() * (2 * h)
            lhs = up - shifted
            # the left side cancels two large terms; measure against the largest one
            scale = max(1.0, up.norm(), shifted.norm(), rhs.norm())
            d = (lhs - rhs).norm() / scale
            cases += 1
            if d > worst:
                worst, worst_idx = d, (m,)
    return IdentityReport("laplace_shift", n, cases, None, worst, worst_idx)


def operator_family(coeffs: Sequence[Fraction], x, xbar, one) -> object:
    """Generic entry point used by the operator calculus for P_k(T), H_k(T)."""
    return bilinear_sum(coeffs, x, xbar, one)


FAMILIES: dict[str, Callable[[int, int], list[Fraction]]] = {
    "appell": appell_table,
    "harmonic": harmonic_table,
    "polyharmonic": lambda k, n: [Fraction(1)] * (k + 1),
}


# restrictions to the real axis and to a slice ------------------------------------------


def _power_jet(center: Paravector, order: int, k: int):
    from .jets import Jet

    return Jet.identity(center, order) ** k


def real_axis_check(name: str, n: int, kmax: int | None = None, points: Sequence[float] = (0.7, -1.3)) -> float:
    """Relative defect of the real-axis constants against jets of x^k.

    "dirac_laplace": D Delta^{ell-1} x^k = d_k x_0^{k-2ell+1} for 1 <= ell <= h.
    "laplace": Delta^alpha x^k = c_k x_0^{k-2alpha} for 1 <= alpha <= h.
    "real_values": P_k and H_k reduce to x_0^k on the real axis.
    """
    h = sce_exponent(n)
    kmax = 2 * h + 4 if kmax is None else kmax
    worst = 0.0
    for x0 in points:
        c = Paravector.real(n, x0)
        if name == "real_values":
            for k in range(kmax + 1):
                for val in (eval_appell(k, c), eval_harmonic(k, c)):
                    ref = x0**k
                    worst = max(worst, abs(val.coeffs[0] - ref) / max(1.0, abs(ref)), float(np.max(np.abs(val.coeffs[1:]))))
            continue
        for p in range(1, h + 1):
            order = 2 * p - 1 if name == "dirac_laplace" else 2 * p
            for k in range(kmax + 1):
                j = _power_jet(c, order, k)
                if name == "dirac_laplace":
                    for _ in range(p - 1):
                        j = j.laplacian()
                    j = j.dirac()
                    ref = float(dirac_laplace_real_constant(n, p, k)) * x0 ** max(k - 2 * p + 1, 0)
                elif name == "laplace":
                    for _ in range(p):
                        j = j.laplacian()
                    ref = float(laplacian_real_constant(n, p, k)) * x0 ** max(k - 2 * p, 0)
                else:
                    raise KeyError(name)
                val = j.value().coeffs
                err = max(abs(val[0] - ref), float(np.max(np.abs(val[1:]))))
                worst = max(worst, err / max(1.0, abs(ref)))
    return worst


def slice_restriction_value(n: int, k: int, m: int, u: float, v: float, unit: Sequence[float]) -> Multivector:
    """Delta^m x^k at u + I v from the even/odd split of x^k.

    alpha and beta are the Taylor series in v of x^k around the real point u; the
    radial operators act termwise, giving
    2^m (h-m+1)_m [(v^{-1} d_v)^m alpha + I (d_v v^{-1})^m beta].
    """
    h = sce_exponent(n)

    def du(p: int) -> float:
        # p-th derivative of u^k
        return float(factorial_ratio(k, k - p)) * u ** (k - p) if p <= k else 0.0

    a_part = 0.0
    b_part = 0.0
    for j in range(m, k // 2 + 1):
        w = 2**m * math.factorial(j) / math.factorial(j - m)
        a_part += (-1) ** j / math.factorial(2 * j) * w * v ** (2 * j - 2 * m) * du(2 * j)
        b_part += (-1) ** j / math.factorial(2 * j + 1) * w * v ** (2 * j - 2 * m + 1) * du(2 * j + 1)
    pre = 2**m * float(rising(h - m + 1, m))
    return complex_to_multivector(pre * complex(a_part, b_part), unit)


def slice_restriction_check(n: int, kmax: int = 8, u: float = 0.6, v: float = 0.05, seed: int = 0) -> float:
    """Relative gap between jets of Delta^m x^k off the real axis and the split formula."""
    h = sce_exponent(n)
    rng = np.random.default_rng(seed)
    unit = rng.normal(size=n)
    unit /= np.linalg.norm(unit)
    x = Paravector(u, v * unit)
    worst = 0.0
    for m in range(1, h + 2):
        for k in range(kmax + 1):
            j = _power_jet(x, 2 * m, k)
            for _ in range(m):
                j = j.laplacian()
            got = j.value()
            ref = slice_restriction_value(n, k, m, u, v, unit)
            worst = max(worst, (got - ref).norm() / max(1.0, ref.norm()))
    return worst


def limit_laplacian_constant(n: int, m: int) -> Fraction:
    """Factor in lim_{v->0} Delta^m f = factor * f^{(2m)}(u)."""
    h = sce_exponent(n)
    return Fraction(4**m * (-1) ** m * math.factorial(m), math.factorial(2 * m)) * rising(h - m + 1, m)
