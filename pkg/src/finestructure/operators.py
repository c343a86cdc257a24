"""Paravector operators with commuting matrix components and their functional calculi.

Clifford matrices are stored as real arrays of shape (..., d, d, 2^n); entry (i, j)
is a multivector.  Every resolvent is a slice-valued matrix power of
Q_{c,s}(T) = s^2 - 2 s T_0 + sum T_mu^2, which is a complex d x d matrix once s is
written as u + I v, times paravector-operator factors in the written order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Algebra, Multivector, Paravector, algebra, complex_to_multivector, same_sphere
from .jets import Jet
from .polynomials import (
    appell_moment_constant,
    appell_table,
    bilinear_sum,
    binom,
    gamma_n,
    harmonic_table,
    k_alpha,
    kappa,
    kbold,
    kon,
    sce_exponent,
    sigma,
    sphere_area,
)

DEFAULT_NODES = 256
ENCLOSURE_FRACTION = 0.9
MAX_SERIES_RATIO = 0.75


class HypothesisError(ValueError):
    """An operator does not meet the hypotheses of the requested calculus."""


class EnclosureError(ValueError):
    pass


class SpectralProximityError(ValueError):
    pass


class SideMismatchError(ValueError):
    pass


class DegreeError(ValueError):
    pass


# Clifford matrices --------------------------------------------------------------------


def cm_mul(alg: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of Clifford matrices with broadcasting leading axes."""
    return alg.product(a[..., :, :, None, :], b[..., None, :, :, :]).sum(axis=-3)


def embed_complex(alg: Algebra, z: np.ndarray, unit: np.ndarray) -> np.ndarray:
    """Map complex arrays into C_I inside R_n through i -> I."""
    z = np.asarray(z)
    out = np.zeros(z.shape + (alg.dim,))
    out[..., 0] = z.real
    out[..., alg.vector_slots] = z.imag[..., None] * np.asarray(unit, dtype=float)
    return out


class CliffordMatrix:
    """d x d matrix with multivector entries acting on V (x) R_n."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: Algebra | int, coeffs: np.ndarray):
        self.alg = algebra(alg) if isinstance(alg, int) else alg
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1] or coeffs.shape[2] != self.alg.dim:
            raise ValueError(f"expected shape (d, d, {self.alg.dim}), got {coeffs.shape}")
        self.coeffs = coeffs

    @property
    def n(self) -> int:
        return self.alg.n

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def zeros(cls, n: int, d: int) -> CliffordMatrix:
        return cls(n, np.zeros((d, d, 2**n)))

    @classmethod
    def identity(cls, n: int, d: int) -> CliffordMatrix:
        return cls.from_real(n, np.eye(d))

    @classmethod
    def from_real(cls, n: int, mat: np.ndarray) -> CliffordMatrix:
        mat = np.asarray(mat, dtype=float)
        out = np.zeros(mat.shape + (2**n,))
        out[..., 0] = mat
        return cls(n, out)

    @classmethod
    def from_complex(cls, n: int, z: np.ndarray, unit: Sequence[float]) -> CliffordMatrix:
        alg = algebra(n)
        return cls(alg, embed_complex(alg, z, np.asarray(unit, dtype=float)))

    def component(self, blade: int) -> np.ndarray:
        return self.coeffs[..., blade].copy()

    def _wrap(self, coeffs: np.ndarray) -> CliffordMatrix:
        return CliffordMatrix(self.alg, coeffs)

    def __add__(self, other):
        if isinstance(other, CliffordMatrix):
            return self._wrap(self.coeffs + other.coeffs)
        if np.isscalar(other):
            return self + CliffordMatrix.identity(self.n, self.d) * float(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, CliffordMatrix):
            return self._wrap(self.coeffs - other.coeffs)
        if np.isscalar(other):
            return self + (-float(other))
        return NotImplemented

    def __neg__(self):
        return self._wrap(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return self._wrap(self.coeffs * float(other))
        if isinstance(other, Paravector):
            other = other.to_multivector()
        if isinstance(other, Multivector):
            return self._wrap(self.alg.product(self.coeffs, other.coeffs))
        if isinstance(other, CliffordMatrix):
            return self @ other
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self._wrap(self.coeffs * float(other))
        if isinstance(other, Paravector):
            other = other.to_multivector()
        if isinstance(other, Multivector):
            return self._wrap(self.alg.product(other.coeffs, self.coeffs))
        return NotImplemented

    def __matmul__(self, other: CliffordMatrix) -> CliffordMatrix:
        if other.n != self.n or other.d != self.d:
            raise ValueError("Clifford matrices must share n and d")
        return self._wrap(cm_mul(self.alg, self.coeffs, other.coeffs))

    def __pow__(self, m: int) -> CliffordMatrix:
        out = CliffordMatrix.identity(self.n, self.d)
        for _ in range(m):
            out = out @ self
        return out

    def conj(self) -> CliffordMatrix:
        return self._wrap(self.coeffs * self.alg.conj_signs)

    def real_representation(self) -> np.ndarray:
        """Real (d 2^n) x (d 2^n) matrix of the action on V (x) R_n by left multiplication."""
        d, dim = self.d, self.alg.dim
        out = np.zeros((d * dim, d * dim))
        for blade in np.flatnonzero(np.any(self.coeffs.reshape(-1, dim) != 0, axis=0)):
            e = np.zeros(dim)
            e[blade] = 1.0
            out += np.kron(self.coeffs[:, :, blade], self.alg.left_matrix(e))
        return out

    @classmethod
    def from_real_representation(cls, n: int, big: np.ndarray) -> CliffordMatrix:
        dim = 2**n
        d = big.shape[0] // dim
        cols = big[:, ::dim]  # column (j, blade 0)
        return cls(n, cols.reshape(d, dim, d).transpose(0, 2, 1))

    def inverse(self) -> CliffordMatrix:
        return CliffordMatrix.from_real_representation(self.n, np.linalg.inv(self.real_representation()))

    def operator_norm(self) -> float:
        return float(np.linalg.norm(self.real_representation(), 2))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def allclose(self, other: CliffordMatrix, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0))

    def to_list(self) -> list:
        return self.coeffs.tolist()

    def __repr__(self) -> str:
        return f"CliffordMatrix(n={self.n}, d={self.d}, max={self.max_abs():.3g})"


# operators ---------------------------------------------------------------------------


class CommutingParavectorOp:
    """T = T_0 + sum T_i e_i with real d x d components that commute pairwise."""

    def __init__(self, components: Sequence[np.ndarray], tol: float = 1e-10):
        comps = [np.atleast_2d(np.asarray(c, dtype=float)) for c in components]
        n = len(comps) - 1
        if n not in (3, 5, 7, 9):
            raise ValueError(f"need n + 1 components with n odd in 3..9, got {len(comps)}")
        d = comps[0].shape[0]
        for i, c in enumerate(comps):
            if c.shape != (d, d):
                raise ValueError(f"component T_{i} has shape {c.shape}, expected {(d, d)}")
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                a, b = comps[i], comps[j]
                gap = np.linalg.norm(a @ b - b @ a)
                if gap > tol * max(1.0, np.linalg.norm(a) * np.linalg.norm(b)):
                    raise HypothesisError(f"components do not commute: T_{i} T_{j} != T_{j} T_{i}")
        self.components = comps
        self.n = n
        self.d = d
        self.alg = algebra(n)

    @classmethod
    def from_diagonals(cls, diagonals: Sequence[Sequence[float]]) -> CommutingParavectorOp:
        return cls([np.diag(np.asarray(v, dtype=float)) for v in diagonals])

    @classmethod
    def from_paravector(cls, x: Paravector) -> CommutingParavectorOp:
        return cls([np.array([[v]]) for v in x.to_array()])

    @classmethod
    def random(
        cls,
        n: int,
        d: int,
        rng: np.random.Generator,
        scale: float = 1.0,
        zero: Sequence[int] = (),
        diagonal: bool = False,
    ) -> CommutingParavectorOp:
        """Commuting symmetric components sharing a random orthogonal eigenbasis."""
        basis = np.eye(d) if diagonal else np.linalg.qr(rng.normal(size=(d, d)))[0]
        comps = []
        for mu in range(n + 1):
            lam = np.zeros(d) if mu in zero else rng.uniform(-scale, scale, size=d)
            comps.append(basis @ np.diag(lam) @ basis.T)
        return cls(comps)

    @classmethod
    def from_json(cls, data: dict) -> CommutingParavectorOp:
        n, d = int(data["n"]), int(data["d"])
        comps = data["components"]
        if len(comps) != n + 1:
            raise ValueError(f"'components' must hold n + 1 = {n + 1} matrices, found {len(comps)}")
        mats = []
        for i, c in enumerate(comps):
            arr = np.asarray(c, dtype=float)
            if arr.size != d * d:
                raise ValueError(f"component {i} must hold d*d = {d * d} numbers")
            mats.append(arr.reshape(d, d))
        return cls(mats)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "components": [c.reshape(-1).tolist() for c in self.components]}

    @property
    def T0(self) -> np.ndarray:
        return self.components[0]

    def as_clifford(self) -> CliffordMatrix:
        out = np.zeros((self.d, self.d, self.alg.dim))
        out[..., 0] = self.T0
        for i in range(1, self.n + 1):
            out[..., i] = self.components[i]
        return CliffordMatrix(self.alg, out)

    def conj_clifford(self) -> CliffordMatrix:
        return self.as_clifford().conj()

    def norm_square(self) -> np.ndarray:
        """T Tbar = sum T_mu^2."""
        return sum(c @ c for c in self.components)

    def q_matrix(self, z: np.ndarray | complex) -> np.ndarray:
        """Q_{c,s}(T) for complex s = z (batched over z)."""
        z = np.asarray(z, dtype=complex)
        eye = np.eye(self.d)
        return z[..., None, None] ** 2 * eye - 2 * z[..., None, None] * self.T0 + self.norm_square()

    def is_diagonal(self, tol: float = 0.0) -> bool:
        return all(np.all(np.abs(c - np.diag(np.diag(c))) <= tol) for c in self.components)

    def has_real_spectrum(self, i: int, tol: float = 1e-9) -> bool:
        c = self.components[i]
        if np.allclose(c, c.T, atol=tol):
            return True
        ev = np.linalg.eigvals(c)
        return bool(np.all(np.abs(ev.imag) <= tol * max(1.0, np.max(np.abs(ev)))))

    def joint_eigenvalues(self) -> np.ndarray:
        """Rows x^{(k)} = (t_0, ..., t_n) of the joint eigen-paravectors (diagonalizable input)."""
        rng = np.random.default_rng(12345)
        weights = rng.normal(size=self.n + 1)
        comb = sum(w * c for w, c in zip(weights, self.components))
        _, vecs = np.linalg.eig(comb)
        inv = np.linalg.inv(vecs)
        return np.array([np.real(np.diag(inv @ c @ vecs)) for c in self.components]).T

    def operator_norm(self) -> float:
        return self.as_clifford().operator_norm()


def s_spectrum(T: CommutingParavectorOp, tol: float = 1e-9) -> list[tuple[float, float]]:
    """Spheres [t_0 + rho S] where Q_{c,s}(T) is singular, via the companion linearization."""
    d = T.d
    comp = np.zeros((2 * d, 2 * d))
    comp[:d, d:] = np.eye(d)
    comp[d:, :d] = -T.norm_square()
    comp[d:, d:] = 2 * T.T0
    try:
        ev = np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SpectralProximityError(f"companion eigensolve failed: {exc}") from exc
    spheres: list[tuple[float, float]] = []
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    for z in sorted(ev, key=lambda v: (round(v.real, 9), abs(v.imag))):
        cand = (float(z.real), float(abs(z.imag)))
        if not any(abs(cand[0] - a) <= tol * scale and abs(cand[1] - b) <= tol * scale for a, b in spheres):
            spheres.append(cand)
    return spheres


def spectral_distance(T: CommutingParavectorOp, z: complex) -> float:
    """Distance in the slice plane from s = z to the nearest spectral sphere."""
    return min(abs(z - complex(a, b)) if z.imag >= 0 else abs(z - complex(a, -b)) for a, b in s_spectrum(T))


# slice points and contours --------------------------------------------------------------


def slice_data(s: Paravector, unit: Sequence[float] | None = None) -> tuple[complex, np.ndarray]:
    """(u + i v, I) with s = u + I v; real s uses the given unit (default e_1)."""
    return complex(s.x0, s.vec_norm()), s.imaginary_unit(unit)


@dataclass(frozen=True)
class ContourSpec:
    """Circle s(theta) = c + r e^{I theta} in C_I traversed with N trapezoid nodes."""

    center: float = 0.0
    radius: float = 1.0
    unit: tuple[float, ...] | None = None
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 4 or self.nodes % 2:
            raise ValueError("contour nodes must be an even integer >= 4")

    def unit_vector(self, n: int) -> np.ndarray:
        if self.unit is None:
            e = np.zeros(n)
            e[0] = 1.0
            return e
        u = np.asarray(self.unit, dtype=float)
        if u.shape != (n,):
            raise ValueError(f"slice unit must have {n} entries")
        norm = np.linalg.norm(u)
        if norm == 0:
            raise ValueError("slice unit must be nonzero")
        return u / norm

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Complex nodes s_k and weights r e^{i theta_k} / N (ds_I / 2 pi on the circle)."""
        theta = 2 * np.pi * np.arange(self.nodes) / self.nodes
        e = np.exp(1j * theta)
        return self.center + self.radius * e, self.radius * e / self.nodes

    def with_(self, **kw) -> ContourSpec:
        data = {"center": self.center, "radius": self.radius, "unit": self.unit, "nodes": self.nodes}
        data.update(kw)
        return ContourSpec(**data)

    @classmethod
    def around(cls, T: CommutingParavectorOp, nodes: int = DEFAULT_NODES, unit=None, margin: float = 1.5) -> ContourSpec:
        spheres = s_spectrum(T)
        c = float(np.mean([a for a, _ in spheres]))
        reach = max(math.hypot(a - c, b) for a, b in spheres)
        return cls(c, max(margin * reach / ENCLOSURE_FRACTION, reach + 0.5), unit, nodes)

    @classmethod
    def from_json(cls, data: dict) -> ContourSpec:
        unit = data.get("slice_unit")
        return cls(
            float(data.get("center", 0.0)),
            float(data["radius"]),
            tuple(unit) if unit is not None else None,
            int(data.get("nodes", DEFAULT_NODES)),
        )


def check_enclosure(T: CommutingParavectorOp, contour: ContourSpec) -> None:
    worst = max(math.hypot(a - contour.center, b) for a, b in s_spectrum(T))
    if worst > ENCLOSURE_FRACTION * contour.radius:
        raise EnclosureError(
            f"S-spectrum reaches {worst:.4g} from the center; need <= {ENCLOSURE_FRACTION} * radius = "
            f"{ENCLOSURE_FRACTION * contour.radius:.4g}"
        )


@dataclass(frozen=True)
class SlicePolynomial:
    """f(s) = sum s^m a_m (left) or sum a_m s^m (right)."""

    n: int
    coeffs: tuple[Multivector, ...]
    side: str = "left"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")

    @classmethod
    def from_coefficients(cls, n: int, coeffs: Sequence, side: str = "left") -> SlicePolynomial:
        out = []
        for c in coeffs:
            if isinstance(c, Multivector):
                out.append(c)
            elif np.isscalar(c):
                out.append(Multivector.scalar(n, float(c)))
            else:
                out.append(Multivector(n, np.asarray(c, dtype=float)))
        return cls(n, tuple(out), side)

    @classmethod
    def monomial(cls, n: int, m: int, side: str = "left", coeff: float | Multivector = 1.0) -> SlicePolynomial:
        coeffs = [0.0] * m + [coeff]
        return cls.from_coefficients(n, coeffs, side)

    @property
    def degree(self) -> int:
        for m in range(len(self.coeffs) - 1, -1, -1):
            if np.any(self.coeffs[m].coeffs != 0):
                return m
        return -1

    @property
    def intrinsic(self) -> bool:
        return all(np.all(c.coeffs[1:] == 0) for c in self.coeffs)

    def with_side(self, side: str) -> SlicePolynomial:
        return SlicePolynomial(self.n, self.coeffs, side)

    def __add__(self, other: SlicePolynomial) -> SlicePolynomial:
        if other.side != self.side:
            raise SideMismatchError("cannot add left and right slice polynomials")
        m = max(len(self.coeffs), len(other.coeffs))
        zero = Multivector(self.n)
        out = [
            (self.coeffs[i] if i < len(self.coeffs) else zero) + (other.coeffs[i] if i < len(other.coeffs) else zero)
            for i in range(m)
        ]
        return SlicePolynomial(self.n, tuple(out), self.side)

    def times(self, other: SlicePolynomial) -> SlicePolynomial:
        """Pointwise product f g for intrinsic f, which is again a slice polynomial."""
        if not self.intrinsic:
            raise HypothesisError("the first factor of a slice product must be intrinsic")
        out = [Multivector(self.n) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + b * float(a.coeffs[0])
        return SlicePolynomial(self.n, tuple(out), other.side)

    def values(self, z: np.ndarray, unit: np.ndarray) -> np.ndarray:
        """Coefficient arrays of f(s_k) for complex nodes z in the slice of unit."""
        alg = algebra(self.n)
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (alg.dim,))
        zp = np.ones_like(z)
        for a in self.coeffs:
            sp = embed_complex(alg, zp, unit)
            out += alg.product(sp, a.coeffs) if self.side == "left" else alg.product(a.coeffs, sp)
            zp = zp * z
        return out

    def __call__(self, x: Paravector) -> Multivector:
        z, unit = slice_data(x)
        return Multivector(self.n, self.values(np.array([z]), unit)[0])

    def jet(self, center: Paravector, order: int) -> Jet:
        xj = Jet.identity(center, order)
        out = Jet.zeros(center, order)
        p = Jet.constant(center, order, 1.0)
        for a in self.coeffs:
            out = out + (p * a if self.side == "left" else a * p)
            p = p * xj
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "side": self.side, "coefficients": [c.coeffs.tolist() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> SlicePolynomial:
        n = int(data["n"])
        return cls.from_coefficients(n, data["coefficients"], data.get("side", "left"))


# resolvents ---------------------------------------------------------------------------

RESOLVENT_KINDS = ("S_L", "S_R", "F_L", "F_R", "H", "K_L", "K_R", "P_L", "P_R", "Qinv")


def _kind_side(kind: str) -> str:
    return "right" if kind.endswith("_R") else "left"


def _check_param(kind: str, n: int, param: int | None) -> None:
    h = sce_exponent(n)
    base = kind.split("_")[0]
    if base == "H" and not (param is not None and 1 <= param <= h):
        raise ValueError(f"H resolvent needs 1 <= ell <= {h}, got {param}")
    if base == "K" and not (param is not None and 1 <= param <= h - 1):
        raise ValueError(f"K resolvent needs 1 <= alpha <= {h - 1}, got {param}")
    if base == "P" and not (param is not None and 0 <= param <= h - 1):
        raise ValueError(f"P resolvent needs 0 <= ell <= {h - 1}, got {param}")


def _matrix_powers(inv: np.ndarray, m: int) -> np.ndarray:
    return np.linalg.matrix_power(inv, m) if m else np.broadcast_to(np.eye(inv.shape[-1]), inv.shape).astype(complex)


def resolvent_batch(
    kind: str, z: np.ndarray, unit: np.ndarray, T: CommutingParavectorOp, param: int | None = None
) -> np.ndarray:
    """Resolvent coefficient arrays (N, d, d, 2^n) at complex slice points z."""
    if kind not in RESOLVENT_KINDS:
        raise ValueError(f"unknown resolvent kind {kind!r}")
    n, d, alg = T.n, T.d, T.alg
    h = sce_exponent(n)
    _check_param(kind, n, param)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    qinv = np.linalg.inv(T.q_matrix(z))
    base = kind.split("_")[0]
    if base == "S":
        qexp, pre = 1, 1.0
    elif base == "F":
        qexp, pre = h + 1, float(gamma_n(n))
    elif base == "H":
        qexp, pre = param, float(sigma(n, param))
    elif base == "K":
        qexp, pre = param + 1, float(k_alpha(n, param))
    elif base == "P":
        qexp, pre = h + 1, (-1) ** (h - param) / math.factorial(h - param) * float(gamma_n(n))
    else:  # Qinv
        qexp, pre = 1, 1.0
    slice_part = _matrix_powers(qinv, qexp)
    if base == "P":
        shift = z[:, None, None] * np.eye(d) - T.T0
        slice_part = slice_part @ _matrix_powers(shift, h - param)
    emb = embed_complex(alg, slice_part, unit) * pre
    if base in ("H", "Qinv"):
        return emb
    lin = embed_complex(alg, z[:, None, None] * np.eye(d), unit) - T.conj_clifford().coeffs
    if _kind_side(kind) == "left":
        return cm_mul(alg, lin, emb)
    return cm_mul(alg, emb, lin)


def resolvent(
    kind: str, s: Paravector, T: CommutingParavectorOp, param: int | None = None, unit=None
) -> CliffordMatrix:
    z, I = slice_data(s, unit)
    dist = spectral_distance(T, z)
    if dist <= 1e-6 * max(1.0, abs(z)):
        raise SpectralProximityError(f"s is within {dist:.2e} of the S-spectrum")
    return CliffordMatrix(T.alg, resolvent_batch(kind, np.array([z]), I, T, param)[0])


def pseudo_resolvent_left(s: Paravector, T: CommutingParavectorOp, unit=None) -> CliffordMatrix:
    """-(T^2 - 2 s_0 T + |s|^2)^{-1} (T - conj(s)), inverted as a Clifford matrix."""
    Tc = T.as_clifford()
    q = Tc @ Tc - Tc * (2 * s.x0) + s.norm2()
    return -(q.inverse() @ (Tc - CliffordMatrix.identity(T.n, T.d) * s.conj()))


def appell_operator(T: CommutingParavectorOp, k: int) -> CliffordMatrix:
    """Clifford-Appell operator P_k(T); zero for k < 0."""
    if k < 0:
        return CliffordMatrix.zeros(T.n, T.d)
    return bilinear_sum(appell_table(k, T.n), T.as_clifford(), T.conj_clifford(), CliffordMatrix.identity(T.n, T.d))


def harmonic_operator(T: CommutingParavectorOp, k: int) -> CliffordMatrix:
    """Clifford-harmonic operator H_k(T); zero for k < 0."""
    if k < 0:
        return CliffordMatrix.zeros(T.n, T.d)
    return bilinear_sum(harmonic_table(k, T.n), T.as_clifford(), T.conj_clifford(), CliffordMatrix.identity(T.n, T.d))


class _OperatorPolys:
    """Appell and harmonic operators built from shared powers of T and Tbar.

    Products run on the real block representation, where they are plain matmuls.
    """

    def __init__(self, T: CommutingParavectorOp):
        self.T = T
        eye = np.eye(T.d * T.alg.dim)
        self.pw = [eye]
        self.pwb = [eye]
        self.base = T.as_clifford().real_representation()
        self.base_bar = T.conj_clifford().real_representation()
        self.cache: dict[tuple[str, int], CliffordMatrix] = {}

    def _power(self, k: int, bar: bool) -> np.ndarray:
        seq = self.pwb if bar else self.pw
        base = self.base_bar if bar else self.base
        while len(seq) <= k:
            seq.append(seq[-1] @ base)
        return seq[k]

    def get(self, family: str, k: int) -> CliffordMatrix:
        if k < 0:
            return CliffordMatrix.zeros(self.T.n, self.T.d)
        key = (family, k)
        if key not in self.cache:
            table = appell_table(k, self.T.n) if family == "appell" else harmonic_table(k, self.T.n)
            acc = np.zeros_like(self.base)
            for ell, c in enumerate(table):
                if c:
                    acc += float(c) * (self._power(k - ell, False) @ self._power(ell, True))
            self.cache[key] = CliffordMatrix.from_real_representation(self.T.n, acc)
        return self.cache[key]


def _polys(T: CommutingParavectorOp) -> _OperatorPolys:
    cached = getattr(T, "_polys", None)
    if cached is None:
        cached = _OperatorPolys(T)
        T._polys = cached
    return cached


def resolvent_series_terms(
    kind: str, s: Paravector, T: CommutingParavectorOp, terms: int, param: int | None = None, variant: str = "default"
):
    """Yield (k, term) of the operator power series of a resolvent in s^{-1}."""
    n, d, alg = T.n, T.d, T.alg
    h = sce_exponent(n)
    _check_param(kind, n, param)
    z, I = slice_data(s)
    rho = T.operator_norm() / abs(z)
    if rho > MAX_SERIES_RATIO + 1e-12:
        raise ValueError(f"||T|| / |s| = {rho:.3f} exceeds {MAX_SERIES_RATIO}")
    left = _kind_side(kind) == "left"
    polys = _polys(T)
    T0 = T.T0
    nsq = T.norm_square()

    def real_pow(mat: np.ndarray, p: int) -> np.ndarray:
        return np.linalg.matrix_power(mat, p)

    def place(op: CliffordMatrix, k: int) -> CliffordMatrix:
        sp = complex_to_multivector(z ** (-1 - k), I)
        return op * sp if left else sp * op

    def with_real(op: CliffordMatrix, mat: np.ndarray) -> CliffordMatrix:
        # real matrices commute with the (commuting) components, so the side is immaterial
        return CliffordMatrix(alg, np.einsum("ij,jkc->ikc", mat, op.coeffs))

    base = kind.split("_")[0]
    if base == "S":
        p = CliffordMatrix.identity(n, d)
        Tc = T.as_clifford()
        for k in range(terms + 1):
            yield k, place(p, k)
            p = p @ Tc if left else Tc @ p
    elif base == "F":
        g = float(gamma_n(n))
        for k in range(2 * h, terms + 1):
            yield k, place(polys.get("appell", k - 2 * h) * (g * binom(k, k - 2 * h)), k)
    elif base == "H" and variant in ("collected", "collected_negk"):
        ell = param
        sgn = 1 if variant == "collected" else -1
        sg = float(sigma(n, ell))
        # collect by power of s: exponent -1 + h - ell + sgn k - t - m
        buckets: dict[int, CliffordMatrix] = {}
        for m in range(2 * h - 1, terms + 1 + 2 * h):
            hop = polys.get("harmonic", m - 2 * h + 1)
            for kk in range(h - ell + 1):
                for t in range(h - ell - kk + 1):
                    w = kbold(m, h, t, ell, kk)
                    if not w:
                        continue
                    e = -1 + h - ell + sgn * kk - t - m
                    idx = -1 - e
                    if idx > terms or idx < 0:
                        continue
                    mat = real_pow(nsq, t) @ real_pow(-2 * T0, h - ell - kk - t)
                    term = with_real(hop, mat) * (sg * w)
                    buckets[idx] = buckets[idx] + term if idx in buckets else term
        for k in sorted(buckets):
            yield k, place(buckets[k], k)
    elif base == "H":
        ell = param
        sg = float(sigma(n, ell))
        for k in range(2 * ell - 1, terms + 1):
            acc = CliffordMatrix.zeros(n, d)
            for a in range(h - ell + 1):
                for b in range(a + 1):
                    w = kon(k, a, b, ell, h)
                    if w:
                        mat = real_pow(-2 * T0, b) @ real_pow(nsq, a - b)
                        acc = acc + with_real(polys.get("harmonic", k - 2 * a + b - 2 * ell + 1), mat) * float(w)
            yield k, place(acc * sg, k)
    elif base == "K":
        alpha = param
        ka = float(k_alpha(n, alpha))
        for k in range(2 * alpha, terms + 1):
            acc = CliffordMatrix.zeros(n, d)
            for ell in range(h - alpha + 1):
                for nu in range(ell + 1):
                    w = kappa(k, h, alpha, ell, nu)
                    if w:
                        mat = real_pow(-2 * T0, nu) @ real_pow(nsq, ell - nu)
                        acc = acc + with_real(polys.get("appell", k - 2 * alpha - 2 * ell + nu), mat) * float(w)
            yield k, place(acc * ka, k)
    elif base == "P":
        ell = param
        pre = float(gamma_n(n)) / math.factorial(h - ell)
        for k in range(h + ell, terms + 1):
            acc = CliffordMatrix.zeros(n, d)
            for i in range(h - ell + 1):
                w = binom(h - ell, i) * binom(k - i - ell + h, k - i - ell - h) * (-1) ** (i + h - ell)
                if w:
                    acc = acc + with_real(polys.get("appell", k - i - ell - h), real_pow(T0, i)) * float(w)
            yield k, place(acc * pre, k)
    else:
        raise ValueError(f"no operator series for {kind!r}")


def resolvent_series(
    kind: str, s: Paravector, T: CommutingParavectorOp, terms: int, param: int | None = None, variant: str = "default"
) -> CliffordMatrix:
    total = CliffordMatrix.zeros(T.n, T.d)
    for _, t in resolvent_series_terms(kind, s, T, terms, param, variant):
        total = total + t
    return total


@dataclass
class SeriesCheck:
    label: str
    ratio: float
    terms: int
    defect: float
    tail_bound: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.tail_bound


def geometric_tail_bound(norms: dict[int, float], rho: float, terms: int, scale: float) -> float:
    """C rho^{N+1} / (1 - rho) with C fitted on the last half of the retained terms.

    The fitted constant is doubled and widened by the growth of ||term_k|| / rho^k
    across the fitting window (polynomial prefactors), plus a rounding floor.
    """
    floor = 1e-12 * max(1.0, scale, max(norms.values(), default=0.0))
    if rho <= 0:
        return floor
    window = [v / rho**k for k, v in norms.items() if k >= terms // 2 and v > 0]
    if not window:
        return floor
    envelope = max(window)
    growth = max(1.0, window[-1] / min(window))
    return 2.0 * growth * envelope * rho ** (terms + 1) / (1 - rho) + floor


def compare_resolvent_series(
    kind: str, s: Paravector, T: CommutingParavectorOp, terms: int, param: int | None = None, variant: str = "default"
) -> SeriesCheck:
    closed = resolvent(kind, s, T, param)
    total = CliffordMatrix.zeros(T.n, T.d)
    norms: dict[int, float] = {}
    for k, t in resolvent_series_terms(kind, s, T, terms, param, variant):
        total = total + t
        norms[k] = norms.get(k, 0.0) + t.max_abs()
    rho = T.operator_norm() / s.norm()
    defect = (total - closed).max_abs()
    label = f"{kind}" + ("" if param is None else f"[{param}]") + ("" if variant == "default" else f"/{variant}")
    return SeriesCheck(label, rho, terms, defect, geometric_tail_bound(norms, rho, terms, closed.max_abs()))


# functional calculi -------------------------------------------------------------------

CALCULI = ("S", "F", "polyharmonic", "cliffordian", "polyanalytic")


def calculus_kind(calc: str, side: str) -> str:
    suffix = "_L" if side == "left" else "_R"
    return {
        "S": "S" + suffix,
        "F": "F" + suffix,
        "polyharmonic": "H",
        "cliffordian": "K" + suffix,
        "polyanalytic": "P" + suffix,
    }[calc]


def calculus_operators(calc: str, n: int, param: int | None) -> list[tuple[str, int]]:
    """The differential operator realized by a calculus, innermost first."""
    h = sce_exponent(n)
    if calc == "S":
        return []
    if calc == "F":
        return [("Lap", h)]
    if calc == "polyharmonic":
        return [("Lap", param - 1), ("D", 1)]
    if calc == "cliffordian":
        return [("Lap", param)]
    if calc == "polyanalytic":
        return [("Dbar", h - param), ("Lap", param)]
    raise ValueError(f"unknown calculus {calc!r}")


def check_hypotheses(calc: str, T: CommutingParavectorOp) -> None:
    n = T.n
    if calc in ("F", "polyharmonic", "cliffordian"):
        for i in range(1, n + 1):
            if not T.has_real_spectrum(i):
                raise HypothesisError(f"component T_{i} does not have real spectrum")
    elif calc == "polyanalytic":
        if np.any(T.components[n] != 0):
            raise HypothesisError(f"polyanalytic calculus needs T_{n} = 0")
        for i in range(0, n):
            if not T.has_real_spectrum(i):
                raise HypothesisError(f"component T_{i} does not have real spectrum")
    elif calc != "S":
        raise ValueError(f"unknown calculus {calc!r}")


def contour_integral(
    kind: str, f: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param: int | None = None
) -> CliffordMatrix:
    """(1/2 pi) int R(s, T) ds_I f(s) (left) or f(s) ds_I R(s, T) (right) by the trapezoid rule."""
    if f.n != T.n:
        raise ValueError("polynomial and operator live in different algebras")
    alg = T.alg
    unit = contour.unit_vector(T.n)
    z, w = contour.points()
    res = resolvent_batch(kind, z, unit, T, param)
    fw = f.values(z, unit)
    weight = embed_complex(alg, w, unit)
    if kind not in ("H", "Qinv") and _kind_side(kind) != f.side:
        raise SideMismatchError(f"{kind} resolvent needs a {_kind_side(kind)} slice function")
    if f.side == "left":
        g = alg.product(weight, fw)
        out = alg.product(res, g[:, None, None, :]).sum(axis=0)
    else:
        g = alg.product(fw, weight)
        out = alg.product(g[:, None, None, :], res).sum(axis=0)
    return CliffordMatrix(alg, out)


def contour_calculus(
    calc: str, f: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param: int | None = None
) -> CliffordMatrix:
    check_hypotheses(calc, T)
    check_enclosure(T, contour)
    return contour_integral(calculus_kind(calc, f.side), f, T, contour, param)


def power_operator(T: CommutingParavectorOp, m: int) -> CliffordMatrix:
    return T.as_clifford() ** m


def appell_moment(T: CommutingParavectorOp, m: int, contour: ContourSpec) -> CliffordMatrix:
    """c_{m,n} int F_L(s, T) ds_I s^{m + 2h}."""
    h = sce_exponent(T.n)
    check_hypotheses("F", T)
    check_enclosure(T, contour)
    f = SlicePolynomial.monomial(T.n, m + 2 * h)
    return contour_integral("F_L", f, T, contour) * (2 * math.pi * appell_moment_constant(m, T.n))


def vanishing_bound(kind: str, n: int, param: int | None) -> int:
    """Largest exponent for which the resolvent moment int R ds_I s^a vanishes."""
    h = sce_exponent(n)
    base = kind.split("_")[0]
    if base == "F":
        return 2 * h - 1
    if base == "H":
        return 2 * (param - 1)
    if base == "K":
        return 2 * param - 1
    if base == "P":
        return h + param - 1
    if base == "S":
        return -1
    raise ValueError(kind)


@dataclass
class MomentResult:
    kind: str
    exponent: int
    in_range: bool
    norm: float


def moment_vanishing(
    kind: str, T: CommutingParavectorOp, contour: ContourSpec, exponent: int, param: int | None = None
) -> MomentResult:
    """Norm of the moment; inside the vanishing range it must be zero, outside it is only reported."""
    check_enclosure(T, contour)
    side = _kind_side(kind)
    f = SlicePolynomial.monomial(T.n, exponent, side)
    val = contour_integral(kind, f, T, contour, param)
    return MomentResult(kind, exponent, exponent <= vanishing_bound(kind, T.n, param), val.max_abs())


def kernel_degree_bound(calc: str, n: int, param: int | None) -> int:
    h = sce_exponent(n)
    return {
        "F": n - 2,
        "polyharmonic": 2 * (param or 0) - 2,
        "cliffordian": 2 * (param or 0) - 1,
        "polyanalytic": h + (param or 0) - 1,
    }[calc]


def kernel_independence_check(
    calc: str, f: SlicePolynomial, junk: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param=None
) -> float:
    bound = kernel_degree_bound(calc, T.n, param)
    if junk.degree > bound:
        raise DegreeError(f"junk degree {junk.degree} exceeds the kernel bound {bound} for {calc}")
    a = contour_calculus(calc, f, T, contour, param)
    b = contour_calculus(calc, f + junk, T, contour, param)
    return (a - b).max_abs()


def intrinsic_two_sided_check(
    calc: str, f: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param=None
) -> float:
    if not f.intrinsic:
        raise HypothesisError("left and right calculi agree only for intrinsic functions")
    left = contour_calculus(calc, f.with_side("left"), T, contour, param)
    right = contour_calculus(calc, f.with_side("right"), T, contour, param)
    return (left - right).max_abs()


def contour_invariance_check(
    calc: str, f: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param=None, other_unit=None
) -> float:
    """Largest change under radius r -> 1.3 r and under a second slice unit."""
    base = contour_calculus(calc, f, T, contour, param)
    wider = contour_calculus(calc, f, T, contour.with_(radius=1.3 * contour.radius), param)
    if other_unit is None:
        other_unit = np.zeros(T.n)
        other_unit[-1] = 1.0
        other_unit[0] = 0.5
    turned = contour_calculus(calc, f, T, contour.with_(unit=tuple(np.asarray(other_unit, dtype=float))), param)
    return max((base - wider).max_abs(), (base - turned).max_abs())


def _apply_ops(j: Jet, ops: list[tuple[str, int]], side: str) -> Jet:
    for name, k in ops:
        for _ in range(k):
            if name == "Lap":
                j = j.laplacian()
            else:
                j = j.dirac(conjugate=(name == "Dbar"), side=side)
    return j


def pointwise_oracle_check(
    calc: str, f: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec, param=None
) -> float:
    """Calculus output versus the fine-structure function evaluated by jets at the joint eigenvalues."""
    if not T.is_diagonal():
        raise ValueError("pointwise oracle needs diagonal components")
    out = contour_calculus(calc, f, T, contour, param)
    ops = calculus_operators(calc, T.n, param)
    order = sum(2 * k if name == "Lap" else k for name, k in ops)
    expected = np.zeros_like(out.coeffs)
    for i in range(T.d):
        x = Paravector(T.components[0][i, i], [T.components[mu][i, i] for mu in range(1, T.n + 1)])
        expected[i, i] = _apply_ops(f.jet(x, order), ops, f.side).value().coeffs
    return float(np.max(np.abs(out.coeffs - expected)))


# resolvent equations and product rule ----------------------------------------------------


def _slice_inverse(p: Paravector, s: Paravector) -> Multivector:
    """(p^2 - 2 s_0 p + |s|^2)^{-1} computed in the slice of p."""
    zp, up = slice_data(p)
    return complex_to_multivector(1.0 / (zp * zp - 2 * s.x0 * zp + s.norm2()), up)


def resolvent_equation_check(which: str, s: Paravector, p: Paravector | None, T: CommutingParavectorOp) -> float:
    n, d = T.n, T.d
    eye = CliffordMatrix.identity(n, d)
    Tc = T.as_clifford()
    if which == "left_S":
        SL = resolvent("S_L", s, T)
        return ((SL * s) - Tc @ SL - eye).max_abs()
    if which == "right_S":
        SR = resolvent("S_R", s, T)
        return ((s * SR) - SR @ Tc - eye).max_abs()
    if p is None:
        raise ValueError(f"{which} needs a second point p")
    if same_sphere(p, s):
        raise SpectralProximityError("p must not lie on the sphere [s]")
    inv = _slice_inverse(p, s)
    if which == "two_sided_S":
        SR = resolvent("S_R", s, T)
        SL = resolvent("S_L", p, T)
        diff = SR - SL
        rhs = ((diff * p) - (s.conj() * diff)) * inv
        return (SR @ SL - rhs).max_abs()
    if which == "F_eq":
        h = sce_exponent(n)
        g = float(gamma_n(n))
        FR, FL = resolvent("F_R", s, T), resolvent("F_L", p, T)
        SR, SL = resolvent("S_R", s, T), resolvent("S_L", p, T)
        zs, us = slice_data(s)
        zp, up = slice_data(p)
        qs = np.linalg.inv(T.q_matrix(zs))
        qp = np.linalg.inv(T.q_matrix(zp))

        def qpow(q, u, m):
            return CliffordMatrix.from_complex(n, np.linalg.matrix_power(q, m), u)

        lhs = FR @ SL + SR @ FL
        acc = CliffordMatrix.zeros(n, d)
        for i in range(0, h - 1):
            acc = acc + qpow(qs, us, h - i - 1) @ SR @ SL @ qpow(qp, up, i + 1)
        for i in range(0, h):
            acc = acc + qpow(qs, us, h - i) @ qpow(qp, up, i + 1)
        lhs = lhs + acc * g
        diff = FR - FL
        rhs = ((diff * p) - (s.conj() * diff)) * inv
        return (lhs - rhs).max_abs()
    raise ValueError(f"unknown resolvent equation {which!r}")


@dataclass
class ProductRuleResult:
    lhs: CliffordMatrix
    rhs: CliffordMatrix

    @property
    def defect(self) -> float:
        return (self.lhs - self.rhs).max_abs()


def product_rule_check(
    f: SlicePolynomial, g: SlicePolynomial, T: CommutingParavectorOp, contour: ContourSpec
) -> ProductRuleResult:
    """Laplace power of f g against the sum over F-, S-, polyharmonic and Cliffordian calculi."""
    if not f.intrinsic:
        raise HypothesisError("the product rule needs an intrinsic first factor")
    if g.side != "left":
        raise SideMismatchError("the product rule is stated for left slice functions g")
    h = sce_exponent(T.n)
    f = f.with_side("left")
    lhs = contour_calculus("F", f.times(g), T, contour)
    rhs = contour_calculus("F", f, T, contour) @ contour_calculus("S", g, T, contour)
    rhs = rhs + contour_calculus("S", f, T, contour) @ contour_calculus("F", g, T, contour)
    for i in range(0, h - 1):
        rhs = rhs + contour_calculus("cliffordian", f, T, contour, h - i - 1) @ contour_calculus(
            "cliffordian", g, T, contour, i + 1
        )
    for i in range(0, h):
        rhs = rhs - contour_calculus("polyharmonic", f, T, contour, h - i) @ contour_calculus(
            "polyharmonic", g, T, contour, i + 1
        )
    return ProductRuleResult(lhs, rhs)


# monogenic calculus ---------------------------------------------------------------------


MONOGENIC_GRID = (32, 32, 64)


def _vector_form(T: CommutingParavectorOp) -> None:
    if np.any(T.T0 != 0):
        raise HypothesisError("the monogenic resolvent needs T_0 = 0")
    for i in range(1, T.n + 1):
        if not np.allclose(T.components[i], T.components[i].T):
            raise HypothesisError(f"component T_{i} must be symmetric (real spectrum)")


def monogenic_spectrum(T: CommutingParavectorOp) -> np.ndarray:
    """Points (0, t_1, ..., t_n) of the monogenic spectrum."""
    return T.joint_eigenvalues()


def monogenic_resolvent_batch(points: np.ndarray, T: CommutingParavectorOp) -> np.ndarray:
    """G(y, T) coefficient arrays (N, d, d, 2^n) at rows y of points."""
    _vector_form(T)
    n, d, alg = T.n, T.d, T.alg
    y = np.atleast_2d(points)
    eye = np.eye(d)
    m = (y[:, 0] ** 2)[:, None, None] * eye
    for i in range(1, n + 1):
        diff = y[:, i][:, None, None] * eye - T.components[i]
        m = m + diff @ diff
    lam, vec = np.linalg.eigh(m)
    if np.min(lam) <= 1e-12:
        raise SpectralProximityError("point lies on the monogenic spectrum")
    power = (n + 1) / 2
    inv = vec @ (lam[:, :, None] ** (-power) * np.swapaxes(vec, -1, -2))
    lin = np.zeros((y.shape[0], d, d, alg.dim))
    lin[..., 0] = y[:, 0][:, None, None] * eye
    for i in range(1, n + 1):
        lin[..., i] = -y[:, i][:, None, None] * eye + T.components[i]
    out = np.einsum("nijc,njk->nikc", lin, inv)
    return out / sphere_area(n)


def monogenic_resolvent(y: Paravector, T: CommutingParavectorOp) -> CliffordMatrix:
    if T.n != 3:
        raise ValueError("the monogenic calculus is provided for n = 3")
    return CliffordMatrix(T.alg, monogenic_resolvent_batch(y.to_array()[None, :], T)[0])


def sphere_quadrature(radius: float, grid: tuple[int, int, int] = MONOGENIC_GRID):
    """Nodes, outward normals and weights of a product rule on the sphere of radius R in R^4."""
    npsi, nth, nphi = grid
    gp, wp = np.polynomial.legendre.leggauss(npsi)
    gt, wt = np.polynomial.legendre.leggauss(nth)
    psi, wpsi = (gp + 1) * np.pi / 2, wp * np.pi / 2
    th, wth = (gt + 1) * np.pi / 2, wt * np.pi / 2
    phi = 2 * np.pi * np.arange(nphi) / nphi
    wphi = np.full(nphi, 2 * np.pi / nphi)
    P, Th, Ph = np.meshgrid(psi, th, phi, indexing="ij")
    W = (wpsi[:, None, None] * wth[None, :, None] * wphi[None, None, :]) * np.sin(P) ** 2 * np.sin(Th)
    normal = np.stack(
        [np.cos(P), np.sin(P) * np.cos(Th), np.sin(P) * np.sin(Th) * np.cos(Ph), np.sin(P) * np.sin(Th) * np.sin(Ph)],
        axis=-1,
    ).reshape(-1, 4)
    return radius * normal, normal, (W * radius**3).reshape(-1)


def appell_on_points(m: int, points: np.ndarray) -> np.ndarray:
    """P_m^3 at rows of points, as coefficient arrays."""
    n = points.shape[1] - 1
    alg = algebra(n)
    vec = points[:, 1:]
    r = np.linalg.norm(vec, axis=1)
    z = points[:, 0] + 1j * r
    val = sum(float(c) * z ** (m - ell) * np.conj(z) ** ell for ell, c in enumerate(appell_table(m, n)))
    unit = np.where(r[:, None] > 0, vec / np.where(r > 0, r, 1.0)[:, None], 0.0)
    out = np.zeros((points.shape[0], alg.dim))
    out[:, 0] = np.real(val)
    out[:, 1 : n + 1] = np.imag(val)[:, None] * unit
    return out


def fueter_kernel_on_points(s: Paravector, points: np.ndarray) -> np.ndarray:
    """F_n^L(s, omega) at rows omega of points, as coefficient arrays."""
    n = points.shape[1] - 1
    alg = algebra(n)
    h = sce_exponent(n)
    zs, us = slice_data(s)
    q = zs * zs - 2 * points[:, 0] * zs + np.sum(points**2, axis=1)
    qpow = embed_complex(alg, q ** (-(h + 1)), us)
    lin = np.zeros((points.shape[0], alg.dim))
    lin[:, 0] = s.x0 - points[:, 0]
    lin[:, 1 : n + 1] = np.asarray(s.vec)[None, :] + points[:, 1:]
    return float(gamma_n(n)) * alg.product(lin, qpow)


def monogenic_surface_calc(
    g: Callable[[np.ndarray], np.ndarray],
    T: CommutingParavectorOp,
    radius: float,
    grid: tuple[int, int, int] = MONOGENIC_GRID,
) -> CliffordMatrix:
    """int_{|x| = R} G(x, T) nu(x) g(x) dS(x).

    With G normalized by the area of the unit sphere this reproduces g(T) for
    g = 1 directly; the calibration is checked by monogenic_calibration.
    """
    if T.n != 3:
        raise ValueError("the monogenic calculus is provided for n = 3")
    _vector_form(T)
    reach = float(np.max(np.linalg.norm(monogenic_spectrum(T), axis=1)))
    if reach > ENCLOSURE_FRACTION * radius:
        raise EnclosureError(f"monogenic spectrum reaches {reach:.4g}; radius {radius} is too small")
    alg = T.alg
    pts, normal, w = sphere_quadrature(radius, grid)
    nu = np.zeros((pts.shape[0], alg.dim))
    nu[:, : T.n + 1] = normal
    right = alg.product(nu, g(pts)) * w[:, None]
    out = np.zeros((T.d, T.d, alg.dim))
    chunk = 4096
    for start in range(0, pts.shape[0], chunk):
        sl = slice(start, start + chunk)
        G = monogenic_resolvent_batch(pts[sl], T)
        out += alg.product(G, right[sl][:, None, None, :]).sum(axis=0)
    return CliffordMatrix(alg, out)


def monogenic_calibration(radius: float = 1.0, grid: tuple[int, int, int] = MONOGENIC_GRID) -> float:
    """Scalar part of the surface calculus of g = 1 at T = 0; equals 1 for the chosen normalization."""
    T = CommutingParavectorOp([np.zeros((1, 1))] * 4)
    ones = lambda pts: np.eye(1, 16, 0).repeat(pts.shape[0], axis=0)  # noqa: E731
    return float(monogenic_surface_calc(ones, T, radius, grid).coeffs[0, 0, 0])
