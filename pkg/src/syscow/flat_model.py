"""Stable 2-systoles of flat tori, round sphere products and their products.

On a flat torus R^n / Z^n with constant metric ``gram`` the stable norm of an
integral 2-class is the mass of its parallel 2-vector representative, pushed
to orthonormal coordinates by a Cholesky factor ``B`` (``gram = B^t B``).
A round sphere of radius r contributes a class of norm ``4 pi r^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from . import _exact
from .bivector import Bivector, mass
from .errors import ValidationError
from .normed_lattice import DEFAULT_MAX_CANDIDATES, Lattice, bivector_norm, successive_minima


@dataclass(frozen=True, eq=False)
class FlatTorusMetric:
    """Constant metric on the universal cover of T^n, as a Gram matrix."""

    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        try:
            g = tuple(tuple(_exact.to_fraction(v) for v in row) for row in self.gram)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad gram matrix: {exc}") from exc
        n = len(g)
        if n < 2 or any(len(r) != n for r in g):
            raise ValidationError("gram matrix must be square with n >= 2")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValidationError("gram matrix is not symmetric")
        try:
            np.linalg.cholesky(np.array([[float(v) for v in row] for row in g]))
        except np.linalg.LinAlgError as exc:
            raise ValidationError("gram matrix is not positive definite") from exc
        object.__setattr__(self, "gram", g)

    @classmethod
    def diagonal(cls, lengths: Sequence) -> "FlatTorusMetric":
        """Rectangular torus with the given side lengths (squared onto the diagonal)."""
        ls = [_exact.to_fraction(v) for v in lengths]
        return cls(tuple(tuple(ls[i] ** 2 if i == j else 0 for j in range(len(ls)))
                         for i in range(len(ls))))

    @classmethod
    def identity(cls, n: int) -> "FlatTorusMetric":
        return cls.diagonal([1] * n)

    @property
    def n(self) -> int:
        return len(self.gram)

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.gram])

    def factor(self) -> np.ndarray:
        """Upper-triangular ``B`` with ``gram = B^t B``."""
        return np.linalg.cholesky(self.as_float()).T

    def scaled(self, c) -> "FlatTorusMetric":
        c = _exact.to_fraction(c)
        return FlatTorusMetric(tuple(tuple(c * v for v in row) for row in self.gram))

    def pulled_back(self, unimodular: Sequence[Sequence[int]]) -> "FlatTorusMetric":
        """``U^t g U``: the same torus presented in another lattice basis."""
        u = _exact.as_matrix(unimodular)
        return FlatTorusMetric(tuple(map(tuple, _exact.matmul(_exact.transpose(u),
                                                               _exact.matmul(self.gram, u)))))

    def to_json(self) -> dict[str, Any]:
        return {"gram": [[_exact.fraction_str(v) for v in row] for row in self.gram]}


@dataclass(frozen=True, eq=False)
class ProductModel:
    """(S^2)^m x T^n with round spheres of the given radii and a flat torus."""

    sphere_radii: tuple[float, ...] = ()
    torus: FlatTorusMetric | None = None

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.sphere_radii)
        if any(not r > 0 for r in radii):
            raise ValidationError("sphere radii must be positive")
        if not radii and self.torus is None:
            raise ValidationError("model has no factors")
        object.__setattr__(self, "sphere_radii", radii)

    @property
    def m(self) -> int:
        return len(self.sphere_radii)

    def sphere_norms(self) -> list[float]:
        return [4 * math.pi * r * r for r in self.sphere_radii]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"spheres": list(self.sphere_radii)}
        if self.torus is not None:
            out["torus"] = self.torus.to_json()
        return out


@dataclass(frozen=True, eq=False)
class H2Class:
    """Integral 2-class: sphere coefficients plus an integer 2-vector on the torus."""

    sphere_part: tuple[int, ...] = ()
    torus_part: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=object))

    def __post_init__(self) -> None:
        sp = tuple(int(v) for v in self.sphere_part)
        tp = np.array(self.torus_part, dtype=object)
        if tp.size == 0:
            tp = np.zeros((0, 0), dtype=object)
        if tp.ndim != 2 or tp.shape[0] != tp.shape[1]:
            raise ValidationError("torus part must be a square matrix")
        if any(int(v) != v for v in tp.flat):
            raise ValidationError("torus part must be integral")
        tp = np.vectorize(int, otypes=[object])(tp) if tp.size else tp
        if not all(tp[i, j] == -tp[j, i] for i in range(tp.shape[0]) for j in range(tp.shape[0])):
            raise ValidationError("torus part must be antisymmetric")
        object.__setattr__(self, "sphere_part", sp)
        object.__setattr__(self, "torus_part", tp)

    @classmethod
    def torus_plane(cls, n: int, i: int, j: int, m: int = 0, c: int = 1) -> "H2Class":
        a = np.zeros((n, n), dtype=object)
        a[i, j], a[j, i] = c, -c
        return cls((0,) * m, a)

    @classmethod
    def sphere(cls, m: int, j: int, c: int = 1, n: int = 0) -> "H2Class":
        sp = [0] * m
        sp[j] = c
        return cls(tuple(sp), np.zeros((n, n), dtype=object))

    def torus_coords(self) -> list[int]:
        n = self.torus_part.shape[0]
        return [int(self.torus_part[i, j]) for i, j in combinations(range(n), 2)]

    def is_zero(self) -> bool:
        return not any(self.sphere_part) and not any(v != 0 for v in self.torus_part.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, H2Class):
            return NotImplemented
        return (self.sphere_part == other.sphere_part
                and self.torus_part.shape == other.torus_part.shape
                and bool(np.all(self.torus_part == other.torus_part)))

    def __hash__(self) -> int:
        return hash((self.sphere_part, tuple(self.torus_part.flat)))

    def to_json(self) -> dict[str, Any]:
        return {"sphere_part": list(self.sphere_part),
                "torus_part": [[int(v) for v in row] for row in self.torus_part]}


def torus_class_norm(g: FlatTorusMetric, coords: Sequence[int]) -> float:
    """Stable norm of the torus class with coordinates on ``e_i ^ e_j`` (i<j)."""
    xi = Bivector.from_vector(g.n, [float(v) for v in coords])
    return mass(xi.transform(g.factor()))


def class_norm(model: ProductModel, cls: H2Class) -> float:
    """Stable norm in a product metric: pure parts add (calibrated by the parallel forms)."""
    if len(cls.sphere_part) != model.m:
        raise ValidationError("class and model have different numbers of spheres")
    total = sum(abs(a) * s for a, s in zip(cls.sphere_part, model.sphere_norms()))
    if model.torus is not None and cls.torus_part.size:
        total += torus_class_norm(model.torus, cls.torus_coords())
    return total


@dataclass(frozen=True)
class SystoleResult:
    value: float
    witness: H2Class
    kind: str = ""

    def to_json(self) -> dict[str, Any]:
        return {"value": self.value, "kind": self.kind, "witness": self.witness.to_json()}


def torus_stable_2_systole(g: FlatTorusMetric,
                           max_candidates: int = DEFAULT_MAX_CANDIDATES) -> SystoleResult:
    """First minimum of ``Lambda^2 Z^n`` under the stable (mass) norm of ``g``."""
    n = g.n
    res = successive_minima(Lattice.standard(n * (n - 1) // 2), bivector_norm(n, "mass", g.gram),
                            1, max_candidates)
    a = np.zeros((n, n), dtype=object)
    for (i, j), c in zip(combinations(range(n), 2), res.witnesses[0]):
        a[i, j], a[j, i] = c, -c
    return SystoleResult(res.values[0], H2Class((), a), "torus")


def _with_spheres(cls: H2Class, m: int) -> H2Class:
    return H2Class((0,) * m, cls.torus_part)


def product_model_stsys(model: ProductModel,
                        max_candidates: int = DEFAULT_MAX_CANDIDATES) -> SystoleResult:
    """Stable 2-systole of a product model: the smallest pure class.

    Mixed classes have norm equal to the sum of their pure parts, so they
    never undercut the minimum over pure classes.
    """
    best: SystoleResult | None = None
    tn = model.torus.n if model.torus is not None else 0
    for j, s in enumerate(model.sphere_norms()):
        if best is None or s < best.value:
            best = SystoleResult(s, H2Class.sphere(model.m, j, 1, tn), "sphere")
    if model.torus is not None:
        t = torus_stable_2_systole(model.torus, max_candidates)
        if best is None or t.value < best.value:
            best = SystoleResult(t.value, _with_spheres(t.witness, model.m), "torus")
    assert best is not None
    return best


def spherical_restricted_systole(model: ProductModel) -> SystoleResult:
    """Stable norm minimized over nonzero classes in the span of the sphere classes."""
    if model.m == 0:
        raise ValidationError("model has no sphere factors; the spherical span is empty")
    tn = model.torus.n if model.torus is not None else 0
    norms = model.sphere_norms()
    j = int(np.argmin(norms))
    return SystoleResult(norms[j], H2Class.sphere(model.m, j, 1, tn), "sphere")


def covering_pushforward(cls: H2Class, l: int) -> H2Class:
    """Push forward along the cover unwrapping every torus circle ``l`` times."""
    if l < 1:
        raise ValidationError(f"cover degree per circle must be >= 1, got {l}")
    return H2Class(cls.sphere_part, cls.torus_part * (l * l))


def covering_model(model: ProductModel, l: int) -> ProductModel:
    """The pulled-back metric on the cover: every torus circle becomes ``l`` times longer."""
    if l < 1:
        raise ValidationError(f"cover degree per circle must be >= 1, got {l}")
    torus = model.torus.scaled(l * l) if model.torus is not None else None
    return ProductModel(model.sphere_radii, torus)


def model_from_json(cfg: dict[str, Any]) -> ProductModel:
    torus = cfg.get("torus")
    return ProductModel(tuple(cfg.get("spheres", ())),
                        FlatTorusMetric(tuple(map(tuple, torus["gram"]))) if torus else None)
