"""Verification battery: a registry of named checks and the runner behind the CLI.

Every check returns measurements (parameters, defect, tolerance).  The
routines here are also what the acceptance tests call with larger sample
sizes, so the CLI and the test suite exercise the same code.
"""
from __future__ import annotations

import fnmatch
import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import Paravector, algebra, pv_pow, same_sphere
from .kernels import (
    DIFFERENTIAL_IDENTITIES,
    SERIES_FAMILIES,
    KernelId,
    admissible_params,
    compare_series,
    eval_kernel,
    identity_parameters,
    kernel_forms_agree,
    verify_differential_identity,
    verify_slice_regularity_in_s,
)
from .operators import (
    CALCULI,
    DEFAULT_NODES,
    CliffordMatrix,
    CommutingParavectorOp,
    ContourSpec,
    SlicePolynomial,
    appell_moment,
    appell_operator,
    appell_on_points,
    compare_resolvent_series,
    contour_calculus,
    contour_invariance_check,
    fueter_kernel_on_points,
    intrinsic_two_sided_check,
    kernel_degree_bound,
    kernel_independence_check,
    moment_vanishing,
    monogenic_calibration,
    monogenic_surface_calc,
    pointwise_oracle_check,
    power_operator,
    product_rule_check,
    resolvent,
    resolvent_equation_check,
    vanishing_bound,
)
from .polynomials import (
    EXACT_IDENTITIES,
    IDENTITY_NAMES,
    identity_suite,
    real_axis_check,
    sce_exponent,
    slice_restriction_check,
)

SCHEMA_VERSION = 1

CLASS_TOLERANCES = {
    "algebra": 1e-12,
    "kernel": 1e-12,
    "identity": 1e-12,
    "diff": 1e-10,
    "series": None,  # each row carries its own tail bound
    "calc": 1e-9,
    "monogenic": 1e-4,
}


class ConfigError(ValueError):
    """Invalid battery configuration; the CLI maps it to exit code 2."""


@dataclass
class Measurement:
    params: dict
    defect: float
    tolerance: float | None = None


@dataclass(frozen=True)
class Check:
    id: str
    klass: str
    description: str
    run: Callable[[int, "Context"], list[Measurement]]
    # False when the regime is structurally empty for that n
    applies: Callable[[int], bool] = lambda n: True
    empty_reason: str = ""


@dataclass
class Context:
    n: int
    seed: int
    nodes: int
    check_id: str

    def rng(self, *salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.n, zlib.crc32(self.check_id.encode()), *salt])


@dataclass
class CheckResult:
    check_id: str
    n: int
    params: dict
    defect: float | None
    tolerance: float | None
    status: str
    wall_time: float
    description: str

    def row(self) -> dict:
        return {
            "check": self.check_id,
            "n": self.n,
            "params": self.params,
            "defect": self.defect,
            "tolerance": self.tolerance,
            "status": self.status,
            "description": self.description,
        }


@dataclass
class BatteryConfig:
    n: list[int] = field(default_factory=lambda: [3])
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)
    tol_scale: float = 1.0
    nodes: int = DEFAULT_NODES
    checks: list[str] = field(default_factory=lambda: ["*"])
    out: str | None = None
    format: str = "json"
    jobs: int = 1

    FIELDS = ("n", "seed", "tolerances", "tol_scale", "nodes", "checks", "out", "format", "jobs")

    def validate(self) -> None:
        for n in self.n:
            if n not in (3, 5, 7):
                raise ConfigError(f"field 'n': battery runs n in 3, 5, 7, got {n}")
        if self.tol_scale <= 0:
            raise ConfigError("field 'tol_scale': must be positive")
        if self.nodes < 16 or self.nodes % 2:
            raise ConfigError("field 'nodes': must be an even integer >= 16")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"field 'format': expected json or csv, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError("field 'jobs': must be >= 1")
        for klass, tol in self.tolerances.items():
            if klass not in CLASS_TOLERANCES:
                raise ConfigError(f"field 'tolerances': unknown check class {klass!r}")
            if not (isinstance(tol, (int, float)) and tol > 0):
                raise ConfigError(f"field 'tolerances.{klass}': must be a positive number")
        select_checks(self.checks)

    @classmethod
    def from_json_text(cls, text: str) -> BatteryConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(data) - set(cls.FIELDS))
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        cfg = cls()
        for key, value in data.items():
            if key == "n" and isinstance(value, int):
                value = [value]
            if key == "checks" and isinstance(value, str):
                value = [value]
            setattr(cfg, key, value)
        cfg.validate()
        return cfg


# random data ----------------------------------------------------------------------------


def random_paravector(rng: np.random.Generator, n: int, lo: float, hi: float) -> Paravector:
    """Uniform direction in R^{n+1} with norm uniform in [lo, hi]."""
    v = rng.normal(size=n + 1)
    v *= rng.uniform(lo, hi) / np.linalg.norm(v)
    return Paravector(v[0], v[1:])


def random_pair(rng: np.random.Generator, n: int, sep: float = 0.1) -> tuple[Paravector, Paravector]:
    """(s, x) with |x| <= 1, 1.5 <= |s| <= 3 and the spheres [s], [x] kept apart."""
    while True:
        x = random_paravector(rng, n, 0.0, 1.0)
        s = random_paravector(rng, n, 1.5, 3.0)
        if not same_sphere(x, s, sep):
            return s, x


def random_polynomial(rng: np.random.Generator, n: int, degree: int, side: str = "left", intrinsic=False):
    dim = 1 << n
    coeffs = []
    for _ in range(degree + 1):
        c = np.zeros(dim)
        if intrinsic:
            c[0] = rng.uniform(-1, 1)
        else:
            c[:] = rng.uniform(-1, 1, size=dim)
        coeffs.append(c)
    return SlicePolynomial.from_coefficients(n, coeffs, side)


def calc_params(calc: str, n: int) -> list[int | None]:
    h = sce_exponent(n)
    return {
        "S": [None],
        "F": [None],
        "polyharmonic": list(range(1, h + 1)),
        "cliffordian": list(range(1, h)),
        "polyanalytic": list(range(0, h)),
    }[calc]


def random_operator(rng, n: int, d: int, calc: str = "S", diagonal=False, scale=0.5) -> CommutingParavectorOp:
    zero = (n,) if calc == "polyanalytic" else ()
    return CommutingParavectorOp.random(n, d, rng, scale=scale, zero=zero, diagonal=diagonal)


# criterion-level routines ------------------------------------------------------------------


def algebra_anticommutation(n: int, rng, cases: int) -> list[Measurement]:
    alg = algebra(n)
    worst = 0.0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ei, ej = alg.basis(i), alg.basis(j)
            val = alg.product(ei, ej) + alg.product(ej, ei)
            val[0] += 2.0 * (i == j)
            worst = max(worst, float(np.max(np.abs(val))))
    # v w + w v = -2 <v, w> for random 1-vectors
    v = np.zeros((cases, alg.dim))
    w = np.zeros((cases, alg.dim))
    v[:, 1 : n + 1] = rng.normal(size=(cases, n))
    w[:, 1 : n + 1] = rng.normal(size=(cases, n))
    sym = alg.product(v, w) + alg.product(w, v)
    sym[:, 0] += 2 * np.sum(v * w, axis=1)
    scale = np.linalg.norm(v, axis=1) * np.linalg.norm(w, axis=1)
    rand = float(np.max(np.abs(sym).max(axis=1) / scale))
    return [Measurement({"units": "basis"}, worst), Measurement({"cases": cases}, rand)]


def algebra_associativity(n: int, rng, cases: int) -> list[Measurement]:
    alg = algebra(n)
    a, b, c = (rng.normal(size=(cases, alg.dim)) for _ in range(3))
    lhs = alg.product(alg.product(a, b), c)
    rhs = alg.product(a, alg.product(b, c))
    scale = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1) * np.linalg.norm(c, axis=1)
    return [Measurement({"cases": cases}, float(np.max(np.abs(lhs - rhs).max(axis=1) / scale)))]


def algebra_paravector(n: int, rng, cases: int) -> list[Measurement]:
    alg = algebra(n)
    out = []
    x = np.zeros((cases, alg.dim))
    x[:, : n + 1] = rng.normal(size=(cases, n + 1))
    xbar = x * alg.conj_signs
    nsq = np.sum(x[:, : n + 1] ** 2, axis=1)
    prod = alg.product(x, xbar)
    prod[:, 0] -= nsq
    out.append(Measurement({"identity": "x conj(x) = |x|^2"}, float(np.max(np.abs(prod).max(axis=1) / nsq))))
    tr = x + xbar
    tr[:, 0] -= 2 * x[:, 0]
    out.append(Measurement({"identity": "x + conj(x) = 2 x0"}, float(np.max(np.abs(tr)))))
    # conjugation reverses products of general multivectors
    a, b = rng.normal(size=(cases, alg.dim)), rng.normal(size=(cases, alg.dim))
    gap = alg.product(a, b) * alg.conj_signs - alg.product(b * alg.conj_signs, a * alg.conj_signs)
    scale = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    out.append(Measurement({"identity": "conj(ab) = conj(b) conj(a)"}, float(np.max(np.abs(gap).max(axis=1) / scale))))
    # slice powers against repeated products
    worst = 0.0
    for k in range(cases):
        p = Paravector(x[k, 0], x[k, 1 : n + 1])
        acc = np.zeros(alg.dim)
        acc[0] = 1.0
        for m in range(1, 7):
            acc = alg.product(acc, x[k])
            ref = pv_pow(p, m).to_multivector().coeffs
            worst = max(worst, float(np.max(np.abs(acc - ref))) / p.norm() ** m)
    out.append(Measurement({"identity": "x^m slice power", "m_max": 6}, worst))
    return out


def kernel_forms(n: int, rng, cases: int) -> list[Measurement]:
    worst = 0.0
    for _ in range(cases):
        s, x = random_pair(rng, n)
        worst = max(worst, kernel_forms_agree(s, x))
    return [Measurement({"cases": cases}, worst)]


def slice_regularity(n: int, rng) -> list[Measurement]:
    """Cauchy-Riemann residual of every kernel in the variable s, relative to its size."""
    x = random_paravector(rng, n, 0.2, 0.8)
    grid = [(1.7, 0.9), (-1.2, 1.5), (0.3, 2.1)]
    out = []
    for fam in SERIES_FAMILIES:
        for side in ("left", "right"):
            if fam in ("CauchyL", "CauchyR") and side == "right":
                continue
            for p in admissible_params(fam, n):
                kid = KernelId(fam, side, "II", p)
                scale = max(eval_norm(kid, Paravector(u, [v] + [0.0] * (n - 1)), x) for u, v in grid)
                r = verify_slice_regularity_in_s(kid, x, grid)
                out.append(Measurement({"kernel": kid.label()}, r / scale, 1e-6))
    return out


def eval_norm(kid: KernelId, s: Paravector, x: Paravector) -> float:
    return max(1.0, eval_kernel(kid, s, x).norm())


def combinatorial(name: str, n: int, seed: int, kmax: int = 30) -> Measurement:
    rep = identity_suite(name, n, kmax=kmax, seed=seed)
    defect = rep.float_defect
    if rep.exact_defect is not None and rep.exact_defect != 0:
        defect = max(defect, float(rep.exact_defect), 1.0)
    params = {"kmax": kmax, "cases": rep.cases, "worst": list(rep.worst)}
    if name in EXACT_IDENTITIES:
        params["exact_defect"] = str(rep.exact_defect)
    return Measurement(params, defect)


def diff_identity(name: str, n: int, rng, points: int = 2, sides=("left", "right")) -> list[Measurement]:
    out = []
    extra = 1 if n <= 5 else 0
    for params in identity_parameters(name, n):
        for side in sides:
            worst = 0.0
            for _ in range(points):
                s, x = random_pair(rng, n)
                worst = max(worst, verify_differential_identity(name, s, x, params, side, extra).relative)
            out.append(Measurement({**params, "side": side, "points": points}, worst))
    return out


def diff_tolerance(n: int) -> float:
    return 1e-10 if n <= 5 else 1e-8


SERIES_RATIOS = (0.25, 0.5, 0.75)


def kernel_series(family: str, n: int, rng, ratios=SERIES_RATIOS) -> list[Measurement]:
    out = []
    sides = ("left",) if family in ("CauchyL", "CauchyR") else ("left", "right")
    for p in admissible_params(family, n):
        for side in sides:
            kid = KernelId(family, side, "II", p)
            for ratio in ratios:
                s = random_paravector(rng, n, 2.0, 2.0)
                x = random_paravector(rng, n, 2.0 * ratio, 2.0 * ratio)
                terms = 60 if ratio <= 0.5 else 140
                cmp = compare_series(kid, s, x, terms)
                out.append(
                    Measurement({"kernel": kid.label(), "ratio": ratio, "terms": terms}, cmp.defect, cmp.tail_bound)
                )
    return out


SERIES_KINDS = ("S_L", "S_R", "F_L", "F_R", "H", "K_L", "K_R", "P_L", "P_R")


def resolvent_series_rows(kind: str, n: int, rng, ratios=SERIES_RATIOS, d: int = 2) -> list[Measurement]:
    base = kind.split("_")[0]
    fam = {"S": "CauchyL", "F": "Fn", "H": "H_ell", "K": "K_alpha", "P": "P_ell"}[base]
    variants = ("default", "collected") if base == "H" else ("default",)
    out = []
    for p in admissible_params(fam, n):
        for ratio in ratios:
            T = random_operator(rng, n, d)
            s = random_paravector(rng, n, 1.0, 1.0)
            s = s.scale(T.operator_norm() / ratio)
            terms = 40 if ratio <= 0.5 else 120
            for variant in variants:
                chk = compare_resolvent_series(kind, s, T, terms, p, variant)
                out.append(
                    Measurement(
                        {"kind": chk.label, "ratio": ratio, "terms": terms, "d": d}, chk.defect, chk.tail_bound
                    )
                )
    return out


def s_power_rows(n: int, rng, nodes: int, mmax: int = 8, dims=(1, 2, 3, 4)) -> list[Measurement]:
    out = []
    for d in dims:
        T = random_operator(rng, n, d)
        contour = ContourSpec.around(T, nodes)
        worst = 0.0
        for m in range(mmax + 1):
            for side in ("left", "right"):
                got = contour_calculus("S", SlicePolynomial.monomial(n, m, side), T, contour)
                worst = max(worst, (got - power_operator(T, m)).max_abs())
        out.append(Measurement({"d": d, "m_max": mmax}, worst, 1e-8))
    return out


def appell_moment_rows(n: int, rng, nodes: int, mmax: int = 6, dims=(1, 2, 3, 4)) -> list[Measurement]:
    out = []
    for d in dims:
        T = random_operator(rng, n, d)
        contour = ContourSpec.around(T, nodes)
        worst = 0.0
        for m in range(mmax + 1):
            worst = max(worst, (appell_moment(T, m, contour) - appell_operator(T, m)).max_abs())
        out.append(Measurement({"d": d, "m_max": mmax}, worst, 1e-8))
    return out


MOMENT_KINDS = ("F_L", "F_R", "H", "K_L", "K_R", "P_L", "P_R")


def moment_rows(n: int, rng, nodes: int, d: int = 3) -> list[Measurement]:
    out = []
    for kind in MOMENT_KINDS:
        fam = {"F": "Fn", "H": "H_ell", "K": "K_alpha", "P": "P_ell"}[kind.split("_")[0]]
        for p in admissible_params(fam, n):
            calc = "polyanalytic" if kind.startswith("P") else "F"
            T = random_operator(rng, n, d, calc)
            contour = ContourSpec.around(T, nodes)
            top = vanishing_bound(kind, n, p)
            worst = 0.0
            for a in range(top + 1):
                worst = max(worst, moment_vanishing(kind, T, contour, a, p).norm)
            out.append(Measurement({"kind": kind, "param": p, "exponents": f"0..{top}"}, worst))
    return out


def kernel_independence_rows(n: int, rng, nodes: int, d: int = 2) -> list[Measurement]:
    out = []
    for calc in ("F", "polyharmonic", "cliffordian", "polyanalytic"):
        for p in calc_params(calc, n):
            T = random_operator(rng, n, d, calc)
            contour = ContourSpec.around(T, nodes)
            f = random_polynomial(rng, n, 4)
            junk = random_polynomial(rng, n, kernel_degree_bound(calc, n, p))
            defect = kernel_independence_check(calc, f, junk, T, contour, p)
            out.append(Measurement({"calc": calc, "param": p, "junk_degree": junk.degree}, defect))
    return out


RESOLVENT_EQUATIONS = ("left_S", "right_S", "two_sided_S", "F_eq")


def resolvent_equation_rows(n: int, rng, pairs: int = 50, d: int = 2) -> list[Measurement]:
    worst = {w: 0.0 for w in RESOLVENT_EQUATIONS}
    for _ in range(pairs):
        T = random_operator(rng, n, d)
        s, _ = random_pair(rng, n)
        p, _ = random_pair(rng, n)
        while same_sphere(p, s, 0.1):
            p, _ = random_pair(rng, n)
        for which in RESOLVENT_EQUATIONS:
            worst[which] = max(worst[which], resolvent_equation_check(which, s, p, T))
    return [Measurement({"equation": w, "pairs": pairs}, v) for w, v in worst.items()]


def product_rule_rows(n: int, rng, nodes: int, dmax: int = 6, d: int = 2) -> list[Measurement]:
    out = []
    if n == 3:
        T = CommutingParavectorOp([np.zeros((d, d))] * (n + 1))
        s = SlicePolynomial.monomial(n, 1)
        res = product_rule_check(s, s, T, ContourSpec(0.0, 1.0, None, nodes))
        expected = CliffordMatrix.identity(n, d) * -4.0
        out.append(Measurement({"case": "f = g = s, T = 0"}, (res.lhs - expected).max_abs(), 1e-9))
        out.append(Measurement({"case": "f = g = s, T = 0, rule"}, res.defect, 1e-9))
    T = random_operator(rng, n, d)
    contour = ContourSpec.around(T, nodes)
    worst = 0.0
    for a in range(dmax + 1):
        for b in range(dmax + 1 - a):
            f = SlicePolynomial.monomial(n, a)
            g = random_polynomial(rng, n, b) if b else SlicePolynomial.monomial(n, 0)
            res = product_rule_check(f, g, T, contour)
            worst = max(worst, res.defect / max(1.0, res.lhs.max_abs()))
    out.append(Measurement({"case": "monomials", "total_degree_max": dmax}, worst, 1e-7))
    return out


def invariance_rows(n: int, rng, nodes: int, d: int = 2) -> list[Measurement]:
    out = []
    for calc in CALCULI:
        for p in calc_params(calc, n):
            T = random_operator(rng, n, d, calc)
            contour = ContourSpec.around(T, nodes)
            f = random_polynomial(rng, n, 5)
            delta = contour_invariance_check(calc, f, T, contour, p)
            out.append(Measurement({"calc": calc, "param": p, "what": "radius and slice"}, delta))
            fi = random_polynomial(rng, n, 5, intrinsic=True)
            out.append(Measurement({"calc": calc, "param": p, "what": "left = right"},
                                   intrinsic_two_sided_check(calc, fi, T, contour, p)))
    return out


def pointwise_rows(n: int, rng, nodes: int, dims=(1, 4)) -> list[Measurement]:
    out = []
    for calc in CALCULI:
        for p in calc_params(calc, n):
            for d in dims:
                T = random_operator(rng, n, d, calc, diagonal=True)
                contour = ContourSpec.around(T, nodes)
                for side in ("left", "right"):
                    f = random_polynomial(rng, n, 6, side)
                    out.append(
                        Measurement({"calc": calc, "param": p, "d": d, "side": side},
                                    pointwise_oracle_check(calc, f, T, contour, p))
                    )
    return out


# monogenic calculus at n = 3 ---------------------------------------------------------------


def monogenic_operator(diag=(1.0, 2.0)) -> CommutingParavectorOp:
    d = len(diag)
    zero = np.zeros((d, d))
    return CommutingParavectorOp([zero, np.diag(diag), zero, zero])


def monogenic_appell_rows(mmax: int = 2, radius: float = 3.0) -> list[Measurement]:
    T = monogenic_operator((1.0, 2.0))
    out = [Measurement({"what": "calibration at T = 0"}, abs(monogenic_calibration() - 1.0))]
    for m in range(mmax + 1):
        got = monogenic_surface_calc(lambda pts, m=m: appell_on_points(m, pts), T, radius)
        ref = appell_operator(T, m)
        out.append(Measurement({"m": m, "radius": radius}, (got - ref).max_abs() / max(ref.max_abs(), 1e-300)))
    return out


def monogenic_fueter_rows(s_values=(3.0, 4.0), radius: float = 1.8) -> list[Measurement]:
    T = monogenic_operator((0.5, 1.0))
    out = []
    for sv in s_values:
        s = Paravector(sv, [0.0, 0.0, 0.0])
        got = monogenic_surface_calc(lambda pts, s=s: fueter_kernel_on_points(s, pts), T, radius)
        ref = resolvent("F_L", s, T)
        out.append(Measurement({"s": sv, "radius": radius}, (got - ref).max_abs() / ref.max_abs()))
    return out


# registry ------------------------------------------------------------------------------------


def _has_k_family(n: int) -> bool:
    return sce_exponent(n) >= 2


K_EMPTY = "cliffordian family needs 1 <= alpha <= h - 1, empty for n = 3"


def _build_registry() -> dict[str, Check]:
    reg: dict[str, Check] = {}

    def add(cid, klass, description, run, applies=lambda n: True, empty_reason=""):
        reg[cid] = Check(cid, klass, description, run, applies, empty_reason)

    add("algebra.anticommutation", "algebra", "generators anticommute with e_i e_i = -1",
        lambda n, c: algebra_anticommutation(n, c.rng(), 200))
    add("algebra.associativity", "algebra", "geometric product is associative",
        lambda n, c: algebra_associativity(n, c.rng(), 200))
    add("algebra.paravector", "algebra", "paravector conjugate, norm and slice powers",
        lambda n, c: algebra_paravector(n, c.rng(), 200))
    add("kernel.forms", "kernel", "two closed forms of the left and right Cauchy kernels agree",
        lambda n, c: kernel_forms(n, c.rng(), 50))
    add("kernel.slice_regularity", "kernel", "kernels satisfy the Cauchy-Riemann system in s",
        lambda n, c: slice_regularity(n, c.rng()))

    identity_text = {
        "appell_harmonic_leading": "Appell and harmonic coefficients, leading relation",
        "appell_harmonic_general": "Appell and harmonic coefficients, general relation",
        "harmonic_double_sum": "double sum behind the harmonic kernel series",
        "cliffordian_double_sum": "double sum behind the Cliffordian kernel series",
        "polyanalytic_alternating_sum": "alternating sum behind the polyanalytic kernel series",
        "constant_pairs": "products of kernel constants equal +-gamma_n",
        "appell_recurrence": "P_{k+1} against x P_k and H_{k+1}",
        "laplace_shift": "Laplace power of x^{m+1} against x times that of x^m",
    }
    for name in IDENTITY_NAMES:
        add(f"identity.{name}", "identity", identity_text[name],
            lambda n, c, name=name: [combinatorial(name, n, c.seed)])
    for name in ("dirac_laplace", "laplace", "real_values"):
        text = {
            "dirac_laplace": "Dirac operator times Laplace powers of x^k on the real axis",
            "laplace": "Laplace powers of x^k on the real axis",
            "real_values": "Appell and harmonic families on the real axis",
        }[name]
        add(f"identity.real_axis.{name}", "identity", text,
            lambda n, c, name=name: [Measurement({"kmax": 2 * sce_exponent(n) + 2},
                                                 real_axis_check(name, n, 2 * sce_exponent(n) + 2, (0.7,)))])
    add("identity.slice_restriction", "identity", "Laplace powers of slice monomials via the (u, v) formula",
        lambda n, c: [Measurement({"kmax": 6}, slice_restriction_check(n, 6, seed=c.seed), 1e-9)])

    diff_text = {
        "dirac_laplace": "Dirac operator on Laplace powers of the Cauchy kernel",
        "dbar_laplace": "conjugate Dirac operator on Laplace powers of the Cauchy kernel",
        "laplace_power": "Laplace powers of the Cauchy kernel",
        "harmonic_kernel": "Dirac operator times Laplace power gives the harmonic kernel",
        "fueter_sce": "Fueter-Sce map sends the Cauchy kernel to the F kernel",
        "cliffordian_kernel": "Laplace powers give the Cliffordian kernel",
        "polyanalytic_kernel": "conjugate Dirac powers of the F kernel give the polyanalytic kernel",
        "dbar_power": "closed form of conjugate Dirac powers of the Cauchy kernel",
        "q_power_laplace": "auxiliary Laplace identity for powers of Q",
        "laplace_leibniz": "Leibniz expansion for Laplace powers",
        "dirac_cauchy_numerator": "Dirac operator on (s - conj x) Q^{-1}",
        "regularity_F": "F kernel is annihilated by the Dirac operator",
        "regularity_H": "harmonic kernel is polyharmonic of the stated degree",
        "regularity_P": "polyanalytic kernel is polyanalytic of the stated order",
        "regularity_K": "Cliffordian kernel is holomorphic Cliffordian",
    }
    for name in DIFFERENTIAL_IDENTITIES:
        k_based = name in ("cliffordian_kernel", "regularity_K")
        add(f"diff.{name}", "diff", diff_text[name],
            lambda n, c, name=name: [
                Measurement(m.params, m.defect, diff_tolerance(n)) for m in diff_identity(name, n, c.rng(), 1)
            ],
            _has_k_family if k_based else (lambda n: True), K_EMPTY if k_based else "")

    for fam in SERIES_FAMILIES:
        k_based = fam == "K_alpha"
        add(f"series.kernel.{fam}", "series", f"power series of the {fam} kernel within its tail bound",
            lambda n, c, fam=fam: kernel_series(fam, n, c.rng()),
            _has_k_family if k_based else (lambda n: True), K_EMPTY if k_based else "")
    for kind in SERIES_KINDS:
        k_based = kind.startswith("K")
        add(f"series.resolvent.{kind}", "series", f"operator series of the {kind} resolvent within its tail bound",
            lambda n, c, kind=kind: resolvent_series_rows(kind, n, c.rng(), d=2),
            _has_k_family if k_based else (lambda n: True), K_EMPTY if k_based else "")

    add("calc.s_powers", "calc", "S-calculus of s^m equals T^m",
        lambda n, c: s_power_rows(n, c.rng(), c.nodes, 8, (1, 3)))
    add("calc.appell_moment", "calc", "F-resolvent moment reproduces the Appell operators",
        lambda n, c: appell_moment_rows(n, c.rng(), c.nodes, 6, (1, 3)))
    add("calc.moments", "calc", "resolvent moments vanish over their exponent ranges",
        lambda n, c: moment_rows(n, c.rng(), c.nodes, 2))
    add("calc.kernel_independence", "calc", "calculi ignore polynomials in the operator kernel",
        lambda n, c: kernel_independence_rows(n, c.rng(), c.nodes))
    add("calc.resolvent_equations", "calc", "S and F resolvent equations",
        lambda n, c: resolvent_equation_rows(n, c.rng(), 10))
    add("calc.product_rule", "calc", "Laplace power of a product through the fine-structure calculi",
        lambda n, c: product_rule_rows(n, c.rng(), c.nodes, 4))
    add("calc.invariance", "calc", "calculi do not depend on radius, slice or side",
        lambda n, c: invariance_rows(n, c.rng(), c.nodes))
    add("calc.pointwise", "calc", "calculi match jet evaluation at joint eigenvalues",
        lambda n, c: pointwise_rows(n, c.rng(), c.nodes, (2,)))

    only3 = "the monogenic calculus is provided for n = 3 only"
    add("monogenic.appell", "monogenic", "surface calculus reproduces Appell operators",
        lambda n, c: monogenic_appell_rows(), lambda n: n == 3, only3)
    add("monogenic.fueter", "monogenic", "surface calculus reproduces the F resolvent",
        lambda n, c: monogenic_fueter_rows(), lambda n: n == 3, only3)
    return dict(sorted(reg.items()))


REGISTRY: dict[str, Check] = _build_registry()


def select_checks(patterns: Sequence[str]) -> list[Check]:
    """Checks matching any glob; a pattern that matches nothing is a config error."""
    chosen = set()
    for pat in patterns:
        hits = [cid for cid in REGISTRY if fnmatch.fnmatchcase(cid, pat)]
        if not hits:
            raise ConfigError(f"unknown check name or pattern {pat!r}")
        chosen.update(hits)
    return [REGISTRY[cid] for cid in sorted(chosen)]


def _run_one(check: Check, n: int, cfg: BatteryConfig) -> list[CheckResult]:
    if not check.applies(n):
        return [CheckResult(check.id, n, {"reason": check.empty_reason}, None, None, "skip", 0.0, check.description)]
    ctx = Context(n, cfg.seed, cfg.nodes, check.id)
    start = time.perf_counter()
    rows = check.run(n, ctx)
    elapsed = time.perf_counter() - start
    out = []
    for m in rows:
        tol = cfg.tolerances.get(check.klass)
        if tol is None:
            tol = m.tolerance if m.tolerance is not None else CLASS_TOLERANCES[check.klass]
        tol = float(tol) * cfg.tol_scale
        defect = float(m.defect)
        status = "pass" if math.isfinite(defect) and defect <= tol else "fail"
        out.append(CheckResult(check.id, n, m.params, defect, tol, status, elapsed / len(rows), check.description))
    return out


def run_battery(cfg: BatteryConfig) -> tuple[list[CheckResult], int]:
    """Run the selected checks for every n; exit status is 1 iff any row fails."""
    cfg.validate()
    checks = select_checks(cfg.checks)
    jobs = [(c, n) for n in sorted(cfg.n) for c in checks]
    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            batches = list(pool.map(lambda job: _run_one(job[0], job[1], cfg), jobs))
    else:
        batches = [_run_one(c, n, cfg) for c, n in jobs]
    results = [r for b in batches for r in b]
    results.sort(key=lambda r: (r.check_id, r.n))
    status = 1 if any(r.status == "fail" for r in results) else 0
    return results, status


def config_echo(cfg: BatteryConfig) -> dict:
    return {
        "n": sorted(cfg.n),
        "seed": cfg.seed,
        "tolerances": dict(sorted(cfg.tolerances.items())),
        "tol_scale": cfg.tol_scale,
        "nodes": cfg.nodes,
        "checks": list(cfg.checks),
    }


def report_json(cfg: BatteryConfig, results: list[CheckResult], timing: dict) -> str:
    counts = {k: sum(r.status == k for r in results) for k in ("pass", "fail", "skip")}
    doc = {
        "schema": SCHEMA_VERSION,
        "config": config_echo(cfg),
        "summary": counts,
        "results": [r.row() for r in results],
        "timing": timing,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


CSV_COLUMNS = ("check", "n", "params", "defect", "tolerance", "status", "wall_time", "description")


def report_csv(results: list[CheckResult]) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        w.writerow([
            r.check_id, r.n, json.dumps(r.params, sort_keys=True),
            "" if r.defect is None else repr(r.defect),
            "" if r.tolerance is None else repr(r.tolerance),
            r.status, f"{r.wall_time:.4f}", r.description,
        ])
    return buf.getvalue()
