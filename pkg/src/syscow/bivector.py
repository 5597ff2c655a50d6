"""Bivectors (2-vectors and constant 2-forms) and their mass/comass norms.

A bivector on R^n is stored as its antisymmetric coefficient matrix ``A`` with
``A[i, j]`` the coefficient of ``e_i ^ e_j``. A simple bivector ``u ^ v``
corresponds to ``outer(u, v) - outer(v, u)``.

Every antisymmetric matrix is a sum ``sum_k lam_k (u_k ^ v_k)`` over mutually
orthogonal 2-planes; mass is ``sum(lam)`` and comass is ``max(lam)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Mapping

import numpy as np

from .errors import DimensionError, ValidationError

Variance = Literal["vector", "form"]

# Canonical weights at or below this (relative to the largest entry) are zero.
ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Bivector:
    """Element of Lambda^2 R^n (``variance="vector"``) or its dual (``"form"``)."""

    coeffs: np.ndarray
    variance: Variance = "vector"

    def __post_init__(self) -> None:
        a = np.array(self.coeffs, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"coefficients must be a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise DimensionError(f"bivectors need dimension >= 2, got {a.shape[0]}")
        if not np.array_equal(a, -a.T):
            raise ValidationError("coefficient matrix is not antisymmetric")
        if self.variance not in ("vector", "form"):
            raise ValidationError(f"unknown variance {self.variance!r}")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[tuple[int, int], float],
                   variance: Variance = "vector") -> "Bivector":
        """Build from ``{(i, j): c}`` meaning ``c e_i ^ e_j`` (0-based indices)."""
        a = np.zeros((n, n))
        for (i, j), c in terms.items():
            if i == j:
                raise ValidationError(f"e_{i} ^ e_{i} is zero; repeated index")
            a[i, j] += c
            a[j, i] -= c
        return cls(a, variance)

    @classmethod
    def wedge(cls, u, v, variance: Variance = "vector") -> "Bivector":
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return cls(np.outer(u, v) - np.outer(v, u), variance)

    @classmethod
    def from_vector(cls, n: int, vec, variance: Variance = "vector") -> "Bivector":
        """Inverse of :meth:`to_vector`."""
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (n * (n - 1) // 2,):
            raise DimensionError(f"expected {n * (n - 1) // 2} coordinates for n={n}")
        a = np.zeros((n, n))
        iu = np.triu_indices(n, 1)
        a[iu] = vec
        return cls(a - a.T, variance)

    def to_vector(self) -> np.ndarray:
        """Coordinates on the basis ``e_i ^ e_j`` (i < j) in lexicographic order."""
        return self.coeffs[np.triu_indices(self.dim, 1)].copy()

    def transform(self, m) -> "Bivector":
        """Push forward by the linear map ``m``: ``u ^ v -> (m u) ^ (m v)``."""
        m = np.asarray(m, dtype=float)
        out = m @ self.coeffs @ m.T
        return Bivector(0.5 * (out - out.T), self.variance)

    def __add__(self, other: "Bivector") -> "Bivector":
        _check_same(self, other)
        return Bivector(self.coeffs + other.coeffs, self.variance)

    def __sub__(self, other: "Bivector") -> "Bivector":
        _check_same(self, other)
        return Bivector(self.coeffs - other.coeffs, self.variance)

    def __mul__(self, c: float) -> "Bivector":
        return Bivector(float(c) * self.coeffs, self.variance)

    __rmul__ = __mul__

    def __neg__(self) -> "Bivector":
        return Bivector(-self.coeffs, self.variance)

    def __repr__(self) -> str:
        terms = [f"{self.coeffs[i, j]:g} e{i + 1}^e{j + 1}"
                 for i, j in combinations(range(self.dim), 2) if self.coeffs[i, j] != 0]
        return f"Bivector[{self.variance}, n={self.dim}]({' + '.join(terms) or '0'})"


def _check_same(a: Bivector, b: Bivector) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.variance != b.variance:
        raise ValidationError("cannot combine a 2-vector with a 2-form")


@dataclass(frozen=True)
class CanonicalDecomposition:
    """``xi = sum_k lambdas[k] * (u_k ^ v_k)`` with orthonormal, mutually orthogonal frames."""

    lambdas: tuple[float, ...]
    planes: tuple[tuple[np.ndarray, np.ndarray], ...] = field(repr=False)
    dim: int = 0

    def reconstruct(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        for lam, (u, v) in zip(self.lambdas, self.planes):
            a += lam * (np.outer(u, v) - np.outer(v, u))
        return a


def _positive_spectrum(a: np.ndarray):
    """Eigen-decomposition of the Hermitian matrix ``i*A``.

    Its eigenvalues are ``+-lam_k`` (and zeros). An eigenvector ``w = x + i y``
    for ``+lam`` gives the plane ``(x, y)`` up to scale: ``A x = lam y`` and
    ``A y = -lam x``. A Hermitian solver returns an orthonormal eigenbasis even
    for repeated ``lam``, which keeps the planes orthogonal inside a
    multiplicity block.
    """
    w, vecs = np.linalg.eigh(1j * a)
    return w, vecs


def canonical_form(xi: Bivector) -> CanonicalDecomposition:
    """Split ``xi`` into orthogonal simple pieces, weights in decreasing order."""
    a = xi.coeffs
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        return CanonicalDecomposition((), (), xi.dim)
    w, vecs = _positive_spectrum(a)
    lambdas: list[float] = []
    planes: list[tuple[np.ndarray, np.ndarray]] = []
    for k in np.argsort(-w):
        lam = float(w[k])
        if lam <= ZERO_TOL * scale:
            break
        z = vecs[:, k] * np.sqrt(2.0)
        u, v = z.real.copy(), z.imag.copy()
        # orthonormalize against float drift
        u /= np.linalg.norm(u)
        v -= (v @ u) * u
        v /= np.linalg.norm(v)
        if u @ a @ v < 0:
            u, v = v, u
        lambdas.append(lam)
        planes.append((u, v))
    return CanonicalDecomposition(tuple(lambdas), tuple(planes), xi.dim)


def singular_weights(xi: Bivector) -> np.ndarray:
    """The canonical weights only (cheaper than :func:`canonical_form`)."""
    w = np.linalg.eigvalsh(1j * xi.coeffs)
    return np.sort(w[w > ZERO_TOL * max(float(np.max(np.abs(xi.coeffs))), 0.0)])[::-1]


def mass(xi: Bivector) -> float:
    """Mass norm: sum of the canonical weights."""
    return float(np.sum(singular_weights(xi)))


def comass(phi: Bivector) -> float:
    """Comass norm: largest canonical weight (sup of ``|phi(X, Y)|`` over unit simple ``X ^ Y``)."""
    w = singular_weights(phi)
    return float(w[0]) if w.size else 0.0


def pairing(xi: Bivector, phi: Bivector) -> float:
    """``<xi, phi> = sum_{i<j} xi[i,j] * phi[i,j]``."""
    if xi.dim != phi.dim:
        raise DimensionError(f"dimension mismatch: {xi.dim} vs {phi.dim}")
    if xi.variance == phi.variance:
        raise ValidationError("pairing needs one 2-vector and one 2-form")
    return 0.5 * float(np.sum(xi.coeffs * phi.coeffs))


def batch_weights(mats: np.ndarray) -> np.ndarray:
    """Positive eigenvalues of ``i*A`` for a stack of antisymmetric matrices.

    Returns an ``(m, n)`` array where the upper half of each row holds the
    weights (the lower half mirrors them with negative sign and is clipped to 0).
    """
    w = np.linalg.eigvalsh(1j * mats)
    return np.clip(w, 0.0, None)


def batch_mass(mats: np.ndarray) -> np.ndarray:
    w = batch_weights(mats)
    return np.sum(w, axis=-1)


def batch_comass(mats: np.ndarray) -> np.ndarray:
    return batch_weights(mats)[..., -1]


def kahler_form(m: int) -> Bivector:
    """Standard symplectic form ``sum_i e_{2i-1} ^ e_{2i}`` on R^{2m}."""
    return Bivector.from_terms(2 * m, {(2 * i, 2 * i + 1): 1.0 for i in range(m)}, "form")
