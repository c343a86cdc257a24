"""Truncated Taylor series in the n+1 real coordinates of x with R_n coefficients.

A jet of order K at center c stores c_alpha = (d^alpha f)(c) / alpha! for every
multi-index |alpha| <= K.  The variables are central, so products keep the
left/right order of the coefficients.  Derivatives, Dirac operators and
Laplacian powers act exactly on these coefficients, which makes the jet an
oracle for the differential identities satisfied by the kernels.

Multi-indices are laid out by total degree, so the table of order K-1 is a
prefix of the table of order K.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .algebra import Algebra, Multivector, Paravector, algebra

# product tables hold C(K + 2n + 2, 2n + 2) index pairs; these caps keep them in memory
MAX_ORDER = {3: 16, 5: 12, 7: 10, 9: 10}
SLICE_TOL = 1e-10
SINGULAR_TOL = 1e-12


class InsufficientOrderError(ValueError):
    pass


class SingularJetError(ValueError):
    pass


class SliceError(ValueError):
    """Jet coefficients do not lie in one commutative slice subalgebra."""


class IndexTable:
    """Multi-indices over `nvars` variables with total degree <= order."""

    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        exps = []
        self.layer_start = []
        for d in range(order + 1):
            self.layer_start.append(len(exps))
            layer = []
            for combo in itertools.combinations_with_replacement(range(nvars), d):
                e = [0] * nvars
                for v in combo:
                    e[v] += 1
                layer.append(tuple(e))
            layer.sort(reverse=True)
            exps.extend(layer)
        self.layer_start.append(len(exps))
        self.exps = np.array(exps, dtype=np.int64).reshape(-1, nvars)
        self.degree = self.exps.sum(axis=1)
        self.index = {e: i for i, e in enumerate(exps)}
        # up[mu][i]: position of alpha_i + e_mu (only for |alpha_i| < order)
        m_low = self.size(order - 1) if order > 0 else 0
        self.up = np.zeros((nvars, m_low), dtype=np.int64)
        for i in range(m_low):
            e = list(exps[i])
            for mu in range(nvars):
                e[mu] += 1
                self.up[mu, i] = self.index[tuple(e)]
                e[mu] -= 1
        self._pairs = None
        self.factorial = np.array(
            [math.prod(math.factorial(int(k)) for k in e) for e in self.exps], dtype=float
        )

    def size(self, order: int) -> int:
        return self.layer_start[order + 1]

    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All (a, b, c) with alpha_a + alpha_b = alpha_c."""
        if self._pairs is None:
            ia, ib, ic = [], [], []
            for c, gamma in enumerate(self.exps):
                for alpha in itertools.product(*(range(g + 1) for g in gamma)):
                    beta = tuple(int(g - a) for g, a in zip(gamma, alpha))
                    ia.append(self.index[alpha])
                    ib.append(self.index[beta])
                    ic.append(c)
            self._pairs = (
                np.array(ia, dtype=np.int64),
                np.array(ib, dtype=np.int64),
                np.array(ic, dtype=np.int64),
            )
        return self._pairs


@lru_cache(maxsize=None)
def index_table(nvars: int, order: int) -> IndexTable:
    return IndexTable(nvars, order)


def _table(n: int, order: int) -> IndexTable:
    if order > MAX_ORDER[n]:
        raise InsufficientOrderError(f"jets for n={n} are capped at order {MAX_ORDER[n]}")
    return index_table(n + 1, order)


def _conv_matrix(table: IndexTable, order: int, b: np.ndarray, b_side: str) -> sp.csr_matrix:
    """Sparse matrix M with (M @ a)[c] = sum_{alpha_a + alpha_b = alpha_c} a_a * b_b."""
    m = table.size(order)
    ia, ib, ic = table.pairs()
    keep = ic < m
    ia, ib, ic = ia[keep], ib[keep], ic[keep]
    if b_side == "right":
        vals = b[ib]
        mask = vals != 0
        return sp.csr_matrix((vals[mask], (ic[mask], ia[mask])), shape=(m, m))
    vals = b[ia]
    mask = vals != 0
    return sp.csr_matrix((vals[mask], (ic[mask], ib[mask])), shape=(m, m))


def series_product(table: IndexTable, order: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product of scalar (real or complex) coefficient arrays."""
    return _conv_matrix(table, order, b, "right") @ a


def series_reciprocal(table: IndexTable, order: int, q: np.ndarray) -> np.ndarray:
    """1/q for a commutative series with invertible constant term."""
    q0 = q[0]
    if abs(q0) <= SINGULAR_TOL:
        raise SingularJetError("constant term of the jet is not invertible")
    tail = q.copy()
    tail[0] = 0
    conv = _conv_matrix(table, order, tail, "right")
    w = np.zeros_like(q)
    w[0] = 1.0 / q0
    for d in range(1, order + 1):
        lo, hi = table.layer_start[d], table.layer_start[d + 1]
        w[lo:hi] = -(conv @ w)[lo:hi] / q0
    return w


def series_power(table: IndexTable, order: int, q: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros_like(q)
    out[0] = 1.0
    base = q
    while m:
        if m & 1:
            out = series_product(table, order, out, base)
        m >>= 1
        if m:
            base = series_product(table, order, base, base)
    return out


class Jet:
    """Order-K jet of an R_n-valued function of x = c + t around the center c."""

    __slots__ = ("center", "order", "coeffs", "alg", "table")

    def __init__(self, center: Paravector, order: int, coeffs: np.ndarray):
        self.center = center
        self.order = order
        self.alg: Algebra = algebra(center.n)
        self.table = _table(center.n, order)
        m = self.table.size(order)
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (m, self.alg.dim):
            raise ValueError(f"expected coefficient array {(m, self.alg.dim)}, got {coeffs.shape}")
        self.coeffs = coeffs

    @property
    def n(self) -> int:
        return self.center.n

    # construction
    @classmethod
    def zeros(cls, center: Paravector, order: int) -> Jet:
        alg = algebra(center.n)
        return cls(center, order, np.zeros((_table(center.n, order).size(order), alg.dim)))

    @classmethod
    def constant(cls, center: Paravector, order: int, value: Multivector | float) -> Jet:
        j = cls.zeros(center, order)
        if isinstance(value, Multivector):
            j.coeffs[0] = value.coeffs
        else:
            j.coeffs[0, 0] = float(value)
        return j

    @classmethod
    def coordinate(cls, center: Paravector, order: int, mu: int) -> Jet:
        """The real coordinate x_mu (mu = 0..n)."""
        j = cls.constant(center, order, float(center.to_array()[mu]))
        if order >= 1:
            e = [0] * (center.n + 1)
            e[mu] = 1
            j.coeffs[j.table.index[tuple(e)], 0] = 1.0
        return j

    @classmethod
    def identity(cls, center: Paravector, order: int) -> Jet:
        """The paravector variable x = x_0 + sum x_i e_i."""
        j = cls.constant(center, order, center.to_multivector())
        if order >= 1:
            for mu in range(center.n + 1):
                e = [0] * (center.n + 1)
                e[mu] = 1
                j.coeffs[j.table.index[tuple(e)], mu] = 1.0
        return j

    @classmethod
    def from_complex(cls, center: Paravector, order: int, z: np.ndarray, unit: Sequence[float]) -> Jet:
        """Embed a complex coefficient array through i -> I."""
        j = cls.zeros(center, order)
        j.coeffs[:, 0] = z.real
        j.coeffs[:, 1 : center.n + 1] = np.outer(z.imag, np.asarray(unit, dtype=float))
        return j

    def _like(self, coeffs: np.ndarray, order: int | None = None) -> Jet:
        return Jet(self.center, self.order if order is None else order, coeffs)

    def _check(self, other: Jet) -> None:
        if other.n != self.n or other.order != self.order:
            raise ValueError("jets must share n and order")
        if not np.allclose(other.center.to_array(), self.center.to_array(), atol=0, rtol=0):
            raise ValueError("jets must share the expansion point")

    # arithmetic
    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return self._like(self.coeffs + other.coeffs)
        if isinstance(other, (Multivector, Paravector)) or np.isscalar(other):
            return self + Jet.constant(self.center, self.order, _as_mv(other, self.n))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return self._like(self.coeffs - other.coeffs)
        if isinstance(other, (Multivector, Paravector)) or np.isscalar(other):
            return self - Jet.constant(self.center, self.order, _as_mv(other, self.n))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return self._like(self.coeffs * float(other))
        if isinstance(other, (Multivector, Paravector)):
            mv = _as_mv(other, self.n)
            return self._like(self.alg.product(self.coeffs, mv.coeffs))
        if isinstance(other, Jet):
            self._check(other)
            return jet_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self._like(self.coeffs * float(other))
        if isinstance(other, (Multivector, Paravector)):
            mv = _as_mv(other, self.n)
            return self._like(self.alg.product(mv.coeffs, self.coeffs))
        return NotImplemented

    def conj(self) -> Jet:
        """Clifford conjugation applied coefficientwise."""
        return self._like(self.coeffs * self.alg.conj_signs)

    def __pow__(self, m: int) -> Jet:
        out = Jet.constant(self.center, self.order, 1.0)
        for _ in range(m):
            out = out * self
        return out

    # inspection
    def value(self) -> Multivector:
        return Multivector(self.alg, self.coeffs[0])

    def coefficient(self, exps: Sequence[int]) -> Multivector:
        return Multivector(self.alg, self.coeffs[self.table.index[tuple(exps)]])

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise InsufficientOrderError("cannot raise the order of a jet")
        return self._like(self.coeffs[: self.table.size(order)].copy(), order)

    def eval_offset(self, t: Sequence[float]) -> Multivector:
        """Taylor polynomial evaluated at center + t."""
        t = np.asarray(t, dtype=float)
        m = self.table.size(self.order)
        mono = np.prod(t[None, :] ** self.table.exps[:m], axis=1)
        return Multivector(self.alg, mono @ self.coeffs)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def slice_unit(self, tol: float = SLICE_TOL) -> np.ndarray | None:
        """Common unit I with all coefficients in span{1, I}; None if all are real."""
        scale = max(1.0, self.max_abs())
        if np.any(np.abs(self.coeffs[:, self.alg.grades > 1]) > tol * scale):
            raise SliceError("jet has components above grade 1")
        vecs = self.coeffs[:, 1 : self.n + 1]
        k = int(np.argmax(np.linalg.norm(vecs, axis=1)))
        r = np.linalg.norm(vecs[k])
        if r <= tol * scale:
            return None
        unit = vecs[k] / r
        resid = vecs - np.outer(vecs @ unit, unit)
        if np.max(np.abs(resid)) > tol * scale:
            raise SliceError("jet coefficients span more than one slice")
        return unit

    def to_complex(self, unit: np.ndarray | None) -> np.ndarray:
        if unit is None:
            return self.coeffs[:, 0].astype(complex)
        return self.coeffs[:, 0] + 1j * (self.coeffs[:, 1 : self.n + 1] @ unit)

    # differential operators
    def partial(self, mu: int) -> Jet:
        if self.order < 1:
            raise InsufficientOrderError("order-0 jet has no derivatives")
        m = self.table.size(self.order - 1)
        up = self.table.up[mu, :m]
        factor = (self.table.exps[up, mu]).astype(float)
        return self._like(self.coeffs[up] * factor[:, None], self.order - 1)

    def dirac(self, conjugate: bool = False, side: str = "left") -> Jet:
        """D f = d0 f + sum e_i d_i f (side='left') or f D = d0 f + sum d_i f e_i."""
        out = self.partial(0).coeffs.copy()
        sgn = -1.0 if conjugate else 1.0
        for i in range(1, self.n + 1):
            d = self.partial(i).coeffs
            e = self.alg.basis(i)
            if side == "left":
                out += sgn * self.alg.product(e, d)
            elif side == "right":
                out += sgn * self.alg.product(d, e)
            else:
                raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        return self._like(out, self.order - 1)

    def laplacian(self) -> Jet:
        if self.order < 2:
            raise InsufficientOrderError("Laplacian needs order >= 2")
        out = np.zeros((self.table.size(self.order - 2), self.alg.dim))
        for mu in range(self.n + 1):
            out += self.partial(mu).partial(mu).coeffs
        return self._like(out, self.order - 2)


def _as_mv(x, n: int) -> Multivector:
    if isinstance(x, Multivector):
        return x
    if isinstance(x, Paravector):
        return x.to_multivector()
    return Multivector.scalar(n, float(x))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Ordered product a*b of two jets with the same center and order."""
    alg = a.alg
    table = a.table
    order = a.order
    support_a = np.flatnonzero(np.any(a.coeffs != 0, axis=0))
    support_b = np.flatnonzero(np.any(b.coeffs != 0, axis=0))
    out = np.zeros_like(a.coeffs)
    if len(support_b) <= len(support_a):
        for blade in support_b:
            conv = _conv_matrix(table, order, b.coeffs[:, blade], "right")
            out += conv @ alg.times_blade(a.coeffs, blade)
    else:
        for blade in support_a:
            conv = _conv_matrix(table, order, a.coeffs[:, blade], "left")
            out += conv @ alg.blade_times(blade, b.coeffs)
    return Jet(a.center, order, out)


def jet_poly(build, center: Paravector, order: int) -> Jet:
    """Jet of a paravector polynomial given as a callable on the variable jet x."""
    return build(Jet.identity(center, order))


def jet_recip(q: Jet) -> Jet:
    """Multiplicative inverse of a jet whose coefficients share one slice C_I."""
    unit = q.slice_unit()
    z = q.to_complex(unit)
    if abs(z[0]) <= SINGULAR_TOL * max(1.0, q.max_abs()):
        raise SingularJetError("jet constant term vanishes: center lies on the excluded sphere")
    w = series_reciprocal(q.table, q.order, z)
    if unit is None:
        return Jet(q.center, q.order, _real_embed(q, w.real))
    return Jet.from_complex(q.center, q.order, w, unit)


def _real_embed(q: Jet, real: np.ndarray) -> np.ndarray:
    out = np.zeros_like(q.coeffs)
    out[:, 0] = real
    return out


def apply_dirac(j: Jet, conjugate: bool = False, side: str = "left") -> Jet:
    return j.dirac(conjugate=conjugate, side=side)


def apply_laplacian_power(j: Jet, m: int) -> Jet:
    if j.order < 2 * m:
        raise InsufficientOrderError(f"Laplacian power {m} needs order >= {2 * m}")
    for _ in range(m):
        j = j.laplacian()
    return j
