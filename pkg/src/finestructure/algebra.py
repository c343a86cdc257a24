"""Dense arithmetic in the real Clifford algebra R_n with e_i e_j + e_j e_i = -2 delta_ij.

Coefficients are stored over the blade basis e_A, A a subset of {1..n}, in the
canonical order (cardinality first, then lexicographic).  The product is driven
by two precomputed tables: for blades a and c, ``partner[a, c]`` is the blade b
with e_a e_b = +-e_c and ``sign[a, c]`` is that sign.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

SUPPORTED_N = (3, 5, 7, 9)
SPHERE_TOL = 1e-9


class AlgebraMismatchError(ValueError):
    """Operands live in Clifford algebras of different dimension."""


def _popcount(x: np.ndarray) -> np.ndarray:
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


def _blade_signs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # transpositions needed to sort e_a e_b, plus one -1 per repeated unit
    swaps = _popcount(a & b)
    shifted = a >> 1
    while np.any(shifted):
        swaps = swaps + _popcount(shifted & b)
        shifted = shifted >> 1
    return np.where(swaps % 2 == 1, -1.0, 1.0)


class Algebra:
    """Blade layout and multiplication tables for R_n."""

    def __init__(self, n: int):
        if n not in SUPPORTED_N:
            raise ValueError(f"n must be one of {SUPPORTED_N}, got {n}")
        self.n = n
        self.h = (n - 1) // 2
        self.dim = 1 << n
        blades = []
        for grade in range(n + 1):
            for combo in itertools.combinations(range(1, n + 1), grade):
                blades.append(combo)
        self.blades: tuple[tuple[int, ...], ...] = tuple(blades)
        masks = [sum(1 << (i - 1) for i in b) for b in blades]
        self.masks = np.array(masks, dtype=np.int64)
        self.index_of_mask = np.empty(self.dim, dtype=np.int64)
        self.index_of_mask[self.masks] = np.arange(self.dim)
        self.grades = np.array([len(b) for b in blades], dtype=np.int64)

        ma = self.masks[:, None]
        mb = ma ^ self.masks[None, :]
        self.partner = self.index_of_mask[mb]
        self.sign = _blade_signs(ma, mb)
        # (a e_b)[c] = rsign[b, c] * a[rperm[b, c]]
        rperm = self.index_of_mask[self.masks[None, :] ^ self.masks[:, None]]
        self.rperm = rperm
        self.rsign = self.sign[rperm, np.arange(self.dim)[None, :]]
        # vectors e_1..e_n sit right after the scalar
        self.vector_slots = np.arange(1, n + 1)
        # Clifford conjugation: (-1)^{k(k+1)/2} on grade k
        self.conj_signs = np.array(
            [(-1) ** ((g * (g + 1) // 2) % 2) for g in self.grades], dtype=np.float64
        )
        self.reverse_signs = np.array(
            [(-1) ** ((g * (g - 1) // 2) % 2) for g in self.grades], dtype=np.float64
        )

    def __repr__(self) -> str:
        return f"Algebra(n={self.n})"

    def blade_name(self, i: int) -> str:
        b = self.blades[i]
        return "1" if not b else "e" + "".join(str(k) for k in b)

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Geometric product of coefficient arrays, broadcasting leading axes."""
        a = np.asarray(a)
        b = np.asarray(b)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        dtype = np.result_type(a, b, np.float64)
        out = np.zeros(shape + (self.dim,), dtype=dtype)
        support = np.flatnonzero(np.any(a.reshape(-1, self.dim) != 0, axis=0))
        for ia in support:
            out += a[..., ia, None] * (self.sign[ia] * b[..., self.partner[ia]])
        return out

    def times_blade(self, a: np.ndarray, b: int) -> np.ndarray:
        """a e_b for coefficient arrays a (leading axes allowed)."""
        return a[..., self.rperm[b]] * self.rsign[b]

    def blade_times(self, b: int, a: np.ndarray) -> np.ndarray:
        """e_b a for coefficient arrays a (leading axes allowed)."""
        return a[..., self.partner[b]] * self.sign[b]

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """Real matrix L with L @ b == product(a, b)."""
        mat = np.zeros((self.dim, self.dim))
        for ia in np.flatnonzero(a):
            mat[np.arange(self.dim), self.partner[ia]] += a[ia] * self.sign[ia]
        return mat

    def right_matrix(self, b: np.ndarray) -> np.ndarray:
        """Real matrix R with R @ a == product(a, b)."""
        mat = np.zeros((self.dim, self.dim))
        for ia in range(self.dim):
            mat[:, ia] = self.sign[ia] * b[self.partner[ia]]
        return mat

    def basis(self, *units: int) -> np.ndarray:
        """Coefficient array of e_{i1} e_{i2} ... (units may repeat or be unsorted)."""
        out = np.zeros(self.dim)
        out[0] = 1.0
        for u in units:
            if not 1 <= u <= self.n:
                raise ValueError(f"unit e{u} outside R_{self.n}")
            e = np.zeros(self.dim)
            e[u] = 1.0
            out = self.product(out, e)
        return out


@lru_cache(maxsize=None)
def algebra(n: int) -> Algebra:
    return Algebra(n)


@dataclass(frozen=True)
class AlgebraSignature:
    n: int

    def __post_init__(self):
        if self.n not in SUPPORTED_N:
            raise ValueError(f"n must be one of {SUPPORTED_N}, got {self.n}")

    @property
    def h(self) -> int:
        return (self.n - 1) // 2

    @property
    def algebra(self) -> Algebra:
        return algebra(self.n)


class Multivector:
    """Element of R_n.  Treated as immutable."""

    __slots__ = ("alg", "coeffs")
    __array_priority__ = 100

    def __init__(self, alg: Algebra | int, coeffs: Iterable[float] | np.ndarray | None = None):
        if isinstance(alg, int):
            alg = algebra(alg)
        self.alg = alg
        if coeffs is None:
            arr = np.zeros(alg.dim)
        else:
            arr = np.array(coeffs, dtype=np.float64)
            if arr.shape != (alg.dim,):
                raise ValueError(f"expected {alg.dim} coefficients, got shape {arr.shape}")
        arr.setflags(write=False)
        self.coeffs = arr

    # constructors
    @classmethod
    def scalar(cls, n: int, value: float) -> Multivector:
        alg = algebra(n)
        c = np.zeros(alg.dim)
        c[0] = value
        return cls(alg, c)

    @classmethod
    def unit(cls, n: int, *units: int) -> Multivector:
        alg = algebra(n)
        return cls(alg, alg.basis(*units))

    @classmethod
    def vector(cls, n: int, x0: float, vec: Sequence[float]) -> Multivector:
        alg = algebra(n)
        c = np.zeros(alg.dim)
        c[0] = x0
        c[1 : n + 1] = vec
        return cls(alg, c)

    @property
    def n(self) -> int:
        return self.alg.n

    def _check(self, other: Multivector) -> None:
        if other.alg.n != self.alg.n:
            raise AlgebraMismatchError(f"R_{self.alg.n} vs R_{other.alg.n}")

    def _coerce(self, other) -> Multivector:
        if isinstance(other, Multivector):
            self._check(other)
            return other
        if isinstance(other, Paravector):
            mv = other.to_multivector()
            self._check(mv)
            return mv
        if np.isscalar(other):
            return Multivector.scalar(self.n, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.alg, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.alg, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.alg, other.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.alg, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.alg, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mv_mul(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.alg, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mv_mul(other, self)

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.alg, self.coeffs / float(other))
        return NotImplemented

    def __pow__(self, m: int) -> Multivector:
        if m < 0:
            raise ValueError("negative powers need an explicit inverse")
        out = Multivector.scalar(self.n, 1.0)
        for _ in range(m):
            out = mv_mul(out, self)
        return out

    def conj(self) -> Multivector:
        return Multivector(self.alg, self.coeffs * self.alg.conj_signs)

    def reverse(self) -> Multivector:
        return Multivector(self.alg, self.coeffs * self.alg.reverse_signs)

    def grade(self, k: int) -> Multivector:
        return Multivector(self.alg, np.where(self.alg.grades == k, self.coeffs, 0.0))

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_paravector(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[self.alg.grades > 1]) <= tol))

    def to_paravector(self, tol: float = 1e-12) -> Paravector:
        if not self.is_paravector(tol * max(1.0, self.norm())):
            raise ValueError("multivector has components above grade 1")
        return Paravector(self.coeffs[0], self.coeffs[1 : self.n + 1])

    def allclose(self, other: Multivector, atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.coeffs - self._coerce(other).coeffs)) <= atol)

    def to_list(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __repr__(self) -> str:
        terms = [
            f"{c:+.6g}*{self.alg.blade_name(i)}"
            for i, c in enumerate(self.coeffs)
            if c != 0.0
        ]
        return f"Multivector(n={self.n}: {' '.join(terms) or '0'})"


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    if a.alg.n != b.alg.n:
        raise AlgebraMismatchError(f"R_{a.alg.n} vs R_{b.alg.n}")
    return Multivector(a.alg, a.alg.product(a.coeffs, b.coeffs))


@dataclass(frozen=True)
class Paravector:
    """x = x0 + x_1 e_1 + ... + x_n e_n, a point of R^{n+1}."""

    x0: float
    vec: tuple[float, ...]

    def __init__(self, x0: float, vec: Sequence[float]):
        object.__setattr__(self, "x0", float(x0))
        object.__setattr__(self, "vec", tuple(float(v) for v in vec))
        if len(self.vec) not in SUPPORTED_N:
            raise ValueError(f"paravector needs n in {SUPPORTED_N} vector entries")

    @classmethod
    def real(cls, n: int, x0: float) -> Paravector:
        return cls(x0, [0.0] * n)

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> Paravector:
        return cls(arr[0], arr[1:])

    @property
    def n(self) -> int:
        return len(self.vec)

    def to_array(self) -> np.ndarray:
        return np.array((self.x0,) + self.vec)

    def to_multivector(self) -> Multivector:
        return Multivector.vector(self.n, self.x0, self.vec)

    def conj(self) -> Paravector:
        return Paravector(self.x0, [-v for v in self.vec])

    def vec_norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.vec))

    def norm(self) -> float:
        return math.sqrt(self.x0 * self.x0 + sum(v * v for v in self.vec))

    def norm2(self) -> float:
        return self.x0 * self.x0 + sum(v * v for v in self.vec)

    def imaginary_unit(self, fallback: Sequence[float] | None = None) -> np.ndarray:
        """Unit vector I_x of the slice through x (fallback, default e_1, when x is real)."""
        r = self.vec_norm()
        if r > 0:
            return np.array(self.vec) / r
        if fallback is not None:
            return np.asarray(fallback, dtype=float)
        e = np.zeros(self.n)
        e[0] = 1.0
        return e

    def __add__(self, other):
        if isinstance(other, Paravector):
            return Paravector(self.x0 + other.x0, np.add(self.vec, other.vec))
        if np.isscalar(other):
            return Paravector(self.x0 + float(other), self.vec)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Paravector):
            return Paravector(self.x0 - other.x0, np.subtract(self.vec, other.vec))
        if np.isscalar(other):
            return Paravector(self.x0 - float(other), self.vec)
        return NotImplemented

    def __rsub__(self, other):
        if np.isscalar(other):
            return Paravector(float(other) - self.x0, [-v for v in self.vec])
        return NotImplemented

    def __neg__(self):
        return Paravector(-self.x0, [-v for v in self.vec])

    def scale(self, c: float) -> Paravector:
        return Paravector(c * self.x0, [c * v for v in self.vec])

    def __mul__(self, other):
        if np.isscalar(other):
            return self.scale(float(other))
        if isinstance(other, Paravector):
            return mv_mul(self.to_multivector(), other.to_multivector())
        if isinstance(other, Multivector):
            return mv_mul(self.to_multivector(), other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.scale(float(other))
        if isinstance(other, Multivector):
            return mv_mul(other, self.to_multivector())
        return NotImplemented


def pv_conj(x: Paravector) -> Paravector:
    return x.conj()


def pv_pow(x: Paravector, m: int) -> Paravector:
    """x^m, computed inside the slice of x where powers behave like complex powers."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    r = x.vec_norm()
    z = complex(x.x0, r) ** m
    unit = x.imaginary_unit()
    return Paravector(z.real, z.imag * unit)


def same_sphere(x: Paravector, s: Paravector, tol: float = SPHERE_TOL) -> bool:
    return abs(x.x0 - s.x0) <= tol and abs(x.vec_norm() - s.vec_norm()) <= tol


@dataclass(frozen=True)
class SlicePoint:
    """u + I v with v >= 0 and I a unit 1-vector."""

    u: float
    v: float
    I: tuple[float, ...]

    def __init__(self, u: float, v: float, I: Sequence[float]):
        unit = np.asarray(I, dtype=float)
        norm = np.linalg.norm(unit)
        if not np.isclose(norm, 1.0, atol=1e-12):
            raise ValueError(f"slice unit must have norm 1, got {norm}")
        if v < 0:
            v, unit = -v, -unit
        object.__setattr__(self, "u", float(u))
        object.__setattr__(self, "v", float(v))
        object.__setattr__(self, "I", tuple(float(c) for c in unit))

    @classmethod
    def from_complex(cls, z: complex, I: Sequence[float]) -> SlicePoint:
        return cls(z.real, z.imag, I)

    @classmethod
    def from_paravector(cls, x: Paravector, fallback: Sequence[float] | None = None) -> SlicePoint:
        return cls(x.x0, x.vec_norm(), x.imaginary_unit(fallback))

    @property
    def n(self) -> int:
        return len(self.I)

    def to_paravector(self) -> Paravector:
        return Paravector(self.u, [self.v * c for c in self.I])

    def to_complex(self) -> complex:
        return complex(self.u, self.v)


def complex_to_multivector(z: complex, unit: Sequence[float]) -> Multivector:
    """Image of a + ib under the slice isomorphism i -> I."""
    unit = np.asarray(unit, dtype=float)
    return Multivector.vector(len(unit), z.real, z.imag * unit)
