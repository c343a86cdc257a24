"""The twelve acceptance criteria, each at its stated tolerance and time budget.

Each test prints one PASS/FAIL line; the lines are repeated in the terminal
summary by conftest.py so they survive output capture.
"""
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from finestructure import battery as B
from finestructure.kernels import DIFFERENTIAL_IDENTITIES, SERIES_FAMILIES
from finestructure.polynomials import IDENTITY_NAMES


class Criterion:
    """Collect measurements, then judge tolerance and wall-time budget together."""

    def __init__(self, number: int, title: str, budget: float):
        self.number = number
        self.title = title
        self.budget = budget
        self.rows: list[tuple[str, B.Measurement, float]] = []
        self.start = time.perf_counter()

    def add(self, label: str, rows, tol: float | None = None):
        for m in rows:
            t = tol if tol is not None else m.tolerance
            assert t is not None, f"no tolerance for {label}"
            self.rows.append((label, m, t))

    def finish(self):
        elapsed = time.perf_counter() - self.start
        bad = [(label, m.params, m.defect, t) for label, m, t in self.rows if not m.defect <= t]
        worst = max((m.defect / t for _, m, t in self.rows), default=0.0)
        ok = not bad and elapsed <= self.budget and self.rows
        line = (
            f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} | rows={len(self.rows)} "
            f"worst defect/tol={worst:.2e} | {elapsed:.1f}s of {self.budget:.0f}s"
        )
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert self.rows, "no measurements"
        assert not bad, bad[:5]
        assert elapsed <= self.budget, f"took {elapsed:.1f}s, budget {self.budget}s"


def rng(*salt):
    return np.random.default_rng([20261016, *salt])


def test_criterion_01_algebra_soundness():
    c = Criterion(1, "algebra soundness, 1000 cases per n in {3,5,7}", 5.0)
    for n in (3, 5, 7):
        c.add(f"anticommutation n={n}", B.algebra_anticommutation(n, rng(1, n), 1000), 1e-12)
        c.add(f"associativity n={n}", B.algebra_associativity(n, rng(2, n), 1000), 1e-12)
        c.add(f"paravector n={n}", B.algebra_paravector(n, rng(3, n), 1000), 1e-12)
    c.finish()


def test_criterion_02_kernel_forms():
    c = Criterion(2, "left/right Cauchy kernel forms, 200 pairs per n in {3,5}", 5.0)
    for n in (3, 5):
        c.add(f"forms n={n}", B.kernel_forms(n, rng(4, n), 200), 1e-12)
    c.finish()


def test_criterion_03_differential_identities():
    c = Criterion(3, "differential identities by jets, all parameters, n in {3,5,7}", 600.0)
    for n in (3, 5, 7):
        for k, name in enumerate(DIFFERENTIAL_IDENTITIES):
            points = 2 if n <= 5 else 1
            c.add(f"{name} n={n}", B.diff_identity(name, n, rng(5, n, k), points), B.diff_tolerance(n))
    c.finish()


def test_criterion_04_series_against_closed_forms():
    c = Criterion(4, "kernel and resolvent series within tail bounds at ratios 0.25/0.5/0.75", 120.0)
    for n in (3, 5):
        for k, fam in enumerate(SERIES_FAMILIES):
            c.add(f"kernel {fam} n={n}", B.kernel_series(fam, n, rng(6, n, k)))
        for k, kind in enumerate(B.SERIES_KINDS):
            if kind.startswith("K") and n == 3:
                continue  # no admissible alpha
            c.add(f"resolvent {kind} n={n}", B.resolvent_series_rows(kind, n, rng(7, n, k)))
    c.finish()


def test_criterion_05_combinatorial_suite():
    c = Criterion(5, "exact and floating combinatorial identities, k <= 30", 30.0)
    for n in (3, 5, 7):
        for name in IDENTITY_NAMES:
            m = B.combinatorial(name, n, seed=n, kmax=30)
            if "exact_defect" in m.params:
                assert m.params["exact_defect"] == "0", (name, n, m.params)
            c.add(f"{name} n={n}", [m], 1e-12)
    c.finish()


def test_criterion_06_calculus_polynomial_fidelity():
    c = Criterion(6, "S-calculus of s^m (m<=8) and Appell moments (m<=6), d<=4", 120.0)
    for n in (3, 5):
        c.add(f"powers n={n}", B.s_power_rows(n, rng(8, n), 256, 8, (1, 2, 3, 4)), 1e-8)
        c.add(f"appell n={n}", B.appell_moment_rows(n, rng(9, n), 256, 6, (1, 2, 3, 4)), 1e-8)
    c.finish()


def test_criterion_07_moment_vanishing_and_kernel_independence():
    c = Criterion(7, "resolvent moments vanish over full ranges, kernel independence", 120.0)
    for n in (3, 5):
        c.add(f"moments n={n}", B.moment_rows(n, rng(10, n), 256, 3), 1e-9)
        c.add(f"independence n={n}", B.kernel_independence_rows(n, rng(11, n), 256), 1e-9)
    c.finish()


def test_criterion_08_resolvent_equations():
    c = Criterion(8, "S and F resolvent equations, 50 pairs per n in {3,5}", 60.0)
    for n in (3, 5):
        c.add(f"equations n={n}", B.resolvent_equation_rows(n, rng(12, n), 50, 2), 1e-9)
    c.finish()


def test_criterion_09_product_rule():
    c = Criterion(9, "product rule: T = 0 case and monomials for n in {3,5}", 180.0)
    for n in (3, 5):
        c.add(f"product n={n}", B.product_rule_rows(n, rng(13, n), 256, 6))
    assert any(m.params.get("case") == "f = g = s, T = 0" for _, m, _ in c.rows)
    c.finish()


def test_criterion_10_contour_invariance_and_two_sidedness():
    c = Criterion(10, "radius, slice and left/right invariance for all five calculi", 120.0)
    for n in (3, 5):
        c.add(f"invariance n={n}", B.invariance_rows(n, rng(14, n), 256), 1e-9)
    c.finish()


def test_criterion_11_pointwise_diagonal_oracle():
    c = Criterion(11, "calculi vs jets at joint eigenvalues, d <= 4", 60.0)
    for n in (3, 5):
        c.add(f"pointwise n={n}", B.pointwise_rows(n, rng(15, n), 256, (1, 4)), 1e-9)
    c.finish()


def test_criterion_12_monogenic_equivalence():
    c = Criterion(12, "surface calculus reproduces P_m (m<=2) and F_3 at two s", 300.0)
    c.add("appell", B.monogenic_appell_rows(2), 1e-4)
    c.add("fueter resolvent", B.monogenic_fueter_rows((3.0, 4.0)), 1e-4)
    c.finish()
