"""Lattices in finite-dimensional normed spaces.

Successive minima under an arbitrary norm are found by Euclidean
Fincke-Pohst enumeration inside a certified radius. Every norm carries
constants ``lo, hi`` and a linear frame ``M`` (identity by default) with
``lo*|Mx|_2 <= N(x) <= hi*|Mx|_2``, so all lattice vectors with ``N(x) <= r``
lie in the ball of radius ``r/lo`` for the metric ``|Mx|_2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import _exact, kernels
from .bivector import batch_comass, batch_mass
from .errors import DimensionError, ResourceError, UnsupportedNormError, ValidationError

DEFAULT_MAX_CANDIDATES = 10**8
# Values closer than this (relative) count as ties and fall back to the lexicographic rule.
TIE_RTOL = 1e-10


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice spanned by the columns of an exact rational matrix."""

    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(_exact.to_fraction(v) for v in row) for row in self.basis)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DimensionError("lattice basis must be a non-empty square matrix")
        if _exact.det(rows) == 0:
            raise ValidationError("lattice basis is singular")
        object.__setattr__(self, "basis", rows)

    @classmethod
    def from_columns(cls, vectors: Sequence[Sequence]) -> "Lattice":
        return cls(tuple(zip(*vectors)))

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def columns(self) -> list[list[Fraction]]:
        return _exact.transpose(self.basis)

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.basis])

    def point(self, coords: Sequence[int]) -> list[Fraction]:
        """Exact lattice vector with the given integer coordinates."""
        return _exact.matvec(self.basis, coords)

    def scaled(self, c) -> "Lattice":
        c = _exact.to_fraction(c)
        return Lattice(tuple(tuple(c * v for v in row) for row in self.basis))

    def change_basis(self, unimodular: Sequence[Sequence[int]]) -> "Lattice":
        if abs(_exact.int_det(unimodular)) != 1:
            raise ValidationError("change of basis is not unimodular")
        return Lattice(tuple(map(tuple, _exact.matmul(self.basis, _exact.as_matrix(unimodular)))))

    def to_config(self) -> list[list[str]]:
        return [[_exact.fraction_str(v) for v in row] for row in self.basis]


@dataclass(frozen=True, eq=False)
class NormOracle:
    """A norm on R^d with a certified Euclidean sandwich and optional dual.

    ``batch`` maps an ``(m, d)`` array of row vectors to their ``m`` norms;
    ``dual_batch`` does the same for the dual norm. The sandwich reads
    ``lo |M x| <= norm(x) <= hi |M x|`` where ``M`` is ``shape`` (identity if
    None); enumeration runs in the Euclidean metric of ``M``.
    """

    dim: int
    batch: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    lo: float
    hi: float
    dual_batch: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    kind: str = "custom"
    params: dict[str, Any] = field(default_factory=dict, repr=False)
    dual_kind: str | None = None
    dual_params: dict[str, Any] | None = field(default=None, repr=False)
    shape: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"expected a vector of length {self.dim}")
        return float(self.batch(x[None, :])[0])

    def many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float).reshape(-1, self.dim)
        return np.asarray(self.batch(xs), dtype=float)

    @property
    def has_dual(self) -> bool:
        return self.dual_batch is not None

    def dual(self) -> "NormOracle":
        """The dual norm as an oracle; its sandwich is ``1/hi, 1/lo``."""
        if self.dual_batch is None:
            raise UnsupportedNormError(f"no certified dual for norm kind {self.kind!r}")
        shape = None if self.shape is None else np.linalg.inv(self.shape).T
        return NormOracle(self.dim, self.dual_batch, 1.0 / self.hi, 1.0 / self.lo,
                          self.batch, self.dual_kind or f"dual-{self.kind}",
                          self.dual_params or {}, self.kind, self.params, shape)

    def embed(self, b: np.ndarray) -> np.ndarray:
        """Columns of ``b`` mapped into the Euclidean frame of the sandwich."""
        return b if self.shape is None else self.shape @ b

    def to_config(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.params}


def euclidean(d: int) -> NormOracle:
    f = lambda xs: np.linalg.norm(xs, axis=1)  # noqa: E731
    return NormOracle(d, f, 1.0, 1.0, f, "euclidean", {}, "euclidean", {})


def _lp_batch(p: float, w: np.ndarray):
    if math.isinf(p):
        return lambda xs: np.max(np.abs(xs * w), axis=1)
    return lambda xs: np.sum(np.abs(xs * w) ** p, axis=1) ** (1.0 / p)


def weighted_lp(d: int, p: float, weights: Sequence[float] | None = None) -> NormOracle:
    """``(sum |w_i x_i|^p)^(1/p)``; the dual is the weighted Lq norm with weights ``1/w``."""
    p = float(p)
    if p < 1:
        raise ValidationError("Lp norms need p >= 1")
    w = np.ones(d) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (d,) or np.any(w <= 0):
        raise ValidationError("weights must be d positive numbers")
    q = math.inf if p == 1 else (1.0 if math.isinf(p) else p / (p - 1))
    # |z|_p against |z|_2 in R^d: factors 1 and d^(1/p - 1/2)
    e = d ** ((0.0 if math.isinf(p) else 1.0 / p) - 0.5)
    lo, hi = min(1.0, e), max(1.0, e)
    kind = {1.0: "l1", math.inf: "linf"}.get(p, "lp")
    dkind = {1.0: "l1", math.inf: "linf"}.get(q, "lp")
    params = {} if weights is None and kind != "lp" else {"p": p, "weights": w.tolist()}
    dparams = {} if weights is None and dkind != "lp" else {"p": q, "weights": (1.0 / w).tolist()}
    return NormOracle(d, _lp_batch(p, w), lo, hi, _lp_batch(q, 1.0 / w), kind, params,
                      dkind, dparams, np.diag(w))


def linf(d: int) -> NormOracle:
    return weighted_lp(d, math.inf)


def l1(d: int) -> NormOracle:
    return weighted_lp(d, 1.0)


def polytope(vertices) -> NormOracle:
    """Norm whose unit ball is the convex hull of ``+-vertices``.

    The primal is the gauge read off the hull's facets; the dual is exact as the
    maximum of ``|<v, y>|`` over the vertices.
    """
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    d = v.shape[1]
    radii = np.linalg.norm(v, axis=1)
    if np.max(radii) == 0:
        raise ValidationError("polytope has no nonzero vertex")
    dual = lambda ys: np.max(np.abs(ys @ v.T), axis=1)  # noqa: E731
    params = {"vertices": v.tolist()}
    if d == 1:
        r = float(np.max(np.abs(v)))
        return NormOracle(1, lambda xs: np.abs(xs[:, 0]) / r, 1.0 / r, 1.0 / r, dual,
                          "polytope", params, "polytope-dual", params)
    try:
        hull = ConvexHull(np.vstack([v, -v]))
    except QhullError as exc:
        raise ValidationError(f"polytope is not full-dimensional: {exc}") from exc
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    if np.min(offsets) <= 1e-12:
        raise ValidationError("origin is not interior to the polytope")
    facets = normals / offsets[:, None]
    primal = lambda xs: np.max(xs @ facets.T, axis=1)  # noqa: E731
    return NormOracle(d, primal, 1.0 / float(np.max(radii)), 1.0 / float(np.min(offsets)),
                      dual, "polytope", params, "polytope-dual", params)


def random_polytope(d: int, rng: np.random.Generator, m: int | None = None) -> NormOracle:
    """Symmetric polytope norm with ``m`` random vertex pairs on the unit sphere."""
    if m is None:
        m = int(rng.integers(d + 1, 3 * d + 3))
    for _ in range(100):
        pts = rng.standard_normal((m, d))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        try:
            return polytope(pts)
        except ValidationError:
            continue
    raise ValidationError("could not sample a full-dimensional polytope")  # pragma: no cover


def bivector_coordinate_map(n: int, transform) -> np.ndarray:
    """Matrix of ``A -> T A T^t`` on the coordinates ``(e_i ^ e_j)_{i<j}``."""
    t = np.asarray(transform, dtype=float)
    pairs = list(combinations(range(n), 2))
    out = np.empty((len(pairs), len(pairs)))
    for col, (k, l) in enumerate(pairs):
        # image of e_k ^ e_l is t_k ^ t_l
        img = np.outer(t[:, k], t[:, l]) - np.outer(t[:, l], t[:, k])
        out[:, col] = [img[i, j] for i, j in pairs]
    return out


def _antisym_stack(n: int, ys: np.ndarray) -> np.ndarray:
    m = ys.shape[0]
    a = np.zeros((m, n, n))
    iu = np.triu_indices(n, 1)
    a[:, iu[0], iu[1]] = ys
    return a - np.transpose(a, (0, 2, 1))


def bivector_norm(n: int, kind: str = "mass", gram=None) -> NormOracle:
    """Mass or comass norm on ``Lambda^2 R^n`` coordinates, optionally under a metric.

    With ``gram = B^t B`` the vector ``x`` is measured as ``kind(Lambda^2 B x)``.
    The dual of mass under ``B`` is comass under ``B^{-t}`` and conversely.
    """
    if kind not in ("mass", "comass"):
        raise ValidationError(f"unknown bivector norm {kind!r}")
    if n < 2:
        raise DimensionError("bivector norms need n >= 2")
    if gram is None:
        b = np.eye(n)
    else:
        g = np.asarray([[float(_exact.to_fraction(v)) for v in row] for row in gram])
        if g.shape != (n, n):
            raise DimensionError(f"gram matrix must be {n}x{n}")
        try:
            b = np.linalg.cholesky(g).T
        except np.linalg.LinAlgError as exc:
            raise ValidationError("gram matrix is not positive definite") from exc
    fwd = bivector_coordinate_map(n, b)
    back = bivector_coordinate_map(n, np.linalg.inv(b).T)
    # in the frame Lambda^2 B the coordinate norm is sqrt(sum lambda^2)
    r = math.sqrt(n // 2)
    ops = {"mass": batch_mass, "comass": batch_comass}
    other = "comass" if kind == "mass" else "mass"

    def primal(xs):
        return ops[kind](_antisym_stack(n, xs @ fwd.T))

    def dual(ys):
        return ops[other](_antisym_stack(n, ys @ back.T))

    lo, hi = (1.0, r) if kind == "mass" else (1.0 / r, 1.0)
    params: dict[str, Any] = {"n": n}
    if gram is not None:
        params["gram"] = [[_exact.fraction_str(_exact.to_fraction(v)) for v in row] for row in gram]
    return NormOracle(n * (n - 1) // 2, primal, lo, hi, dual, kind, params,
                      other, {"n": n, "transform": "inverse-transpose"}, fwd)


@dataclass(frozen=True)
class MinimaResult:
    """``values[j]`` is the (j+1)-th successive minimum, realized by ``witnesses[j]``.

    Witnesses are integer coordinate vectors with respect to the input basis.
    """

    values: tuple[float, ...]
    witnesses: tuple[tuple[int, ...], ...]
    radius: float = 0.0
    candidates: int = 0


def _size_reduce(b: np.ndarray) -> np.ndarray:
    """Pairwise size reduction; returns an integer unimodular ``U`` (basis ``b @ U``)."""
    d = b.shape[1]
    u = np.eye(d, dtype=object)
    c = b.copy()
    for _ in range(1000):
        changed = False
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                nj = c[:, j] @ c[:, j]
                mu = round((c[:, i] @ c[:, j]) / nj)
                if mu != 0 and abs((c[:, i] @ c[:, j]) / nj) > 0.5 + 1e-9:
                    c[:, i] -= mu * c[:, j]
                    u[:, i] -= mu * u[:, j]
                    changed = True
        if not changed:
            break
    return u


def enumerate_short(b: np.ndarray, radius: float, max_candidates: int = DEFAULT_MAX_CANDIDATES):
    """Integer coordinates (w.r.t. columns of ``b``) of all nonzero lattice vectors
    with Euclidean length <= ``radius``, one representative per ``+-`` pair
    (first nonzero coordinate positive)."""
    u = _size_reduce(b)
    c = b @ u.astype(float)
    gram = c.T @ c
    try:
        r = np.linalg.cholesky(gram).T
    except np.linalg.LinAlgError as exc:  # pragma: no cover - basis checked exactly upstream
        raise ValidationError("basis is numerically singular") from exc
    # refuse early when the expected count (ball volume over covolume) is far past the cap
    d = b.shape[1]
    log_count = (d * math.log(max(radius, 1e-300)) + (d / 2) * math.log(math.pi)
                 - math.lgamma(d / 2 + 1) - math.log(abs(np.linalg.det(b))))
    if log_count > math.log(2 * max_candidates):
        raise ResourceError(
            f"enumeration at Euclidean radius {radius:.6g} expects about {math.exp(log_count):.3g}"
            f" candidates, over the cap of {max_candidates}")
    radius2 = radius * radius * (1 + 1e-9) + 1e-12
    pts, overflow = kernels.enumerate_ball(r, radius2, max_candidates)
    if overflow:
        raise ResourceError(
            f"enumeration exceeded {max_candidates} candidates at Euclidean radius {radius:.6g}")
    if pts.size == 0:
        return np.zeros((0, b.shape[1]), dtype=object)
    coords = pts.astype(object) @ u.T
    first = np.array([next(v for v in row if v != 0) for row in coords])
    return coords[first > 0]


def successive_minima(lattice: Lattice, norm: NormOracle, k: int | None = None,
                      max_candidates: int = DEFAULT_MAX_CANDIDATES) -> MinimaResult:
    """The first ``k`` successive minima of ``lattice`` under ``norm`` with witnesses."""
    d = lattice.dim
    k = d if k is None else k
    if norm.dim != d:
        raise DimensionError(f"norm dimension {norm.dim} != lattice dimension {d}")
    if not 1 <= k <= d:
        raise ValidationError(f"k must be in 1..{d}, got {k}")
    b = lattice.as_float()
    frame = norm.embed(b)
    u = _size_reduce(frame)
    reduced = b @ u.astype(float)
    col_norms = np.sort(norm.many(reduced.T))
    # the k shortest reduced basis vectors are independent, so lambda_k <= col_norms[k-1]
    radius = float(col_norms[k - 1]) / norm.lo
    coords = enumerate_short(frame, radius, max_candidates)
    values = norm.many(coords.astype(float) @ b.T)
    order = np.argsort(values, kind="stable")
    values, coords = values[order], coords[order]

    chosen: list[tuple[int, ...]] = []
    chosen_vals: list[float] = []
    i = 0
    m = len(values)
    while i < m and len(chosen) < k:
        j = i + 1
        while j < m and values[j] - values[i] <= TIE_RTOL * max(1.0, abs(values[i])):
            j += 1
        cluster = sorted(range(i, j), key=lambda t: tuple(coords[t]))
        for t in cluster:
            cand = tuple(int(v) for v in coords[t])
            if _exact.rank([*chosen, cand]) == len(chosen) + 1:
                chosen.append(cand)
                chosen_vals.append(float(values[t]))
                if len(chosen) == k:
                    break
        i = j
    if len(chosen) < k:  # pragma: no cover - impossible with a certified radius
        raise ResourceError("radius too small to find k independent vectors")
    return MinimaResult(tuple(chosen_vals), tuple(chosen), radius, m)


def dual_lattice(lattice: Lattice) -> Lattice:
    """Lattice spanned by the columns of the inverse transpose of the basis."""
    return Lattice(tuple(map(tuple, _exact.transpose(_exact.inverse(lattice.basis)))))


def dual_norm(norm: NormOracle, y) -> float:
    """``sup{<x, y> : norm(x) <= 1}`` for norms with a certified dual."""
    return norm.dual()(y)


def gamma_product(lattice: Lattice, norm: NormOracle,
                  max_candidates: int = DEFAULT_MAX_CANDIDATES) -> float:
    """``lambda_1(L) * lambda_b(L*)`` with ``b = dim``, dual lattice under the dual norm."""
    dual = norm.dual()
    first = successive_minima(lattice, norm, 1, max_candidates).values[0]
    last = successive_minima(dual_lattice(lattice), dual, lattice.dim, max_candidates).values[-1]
    return first * last


@dataclass(frozen=True)
class GammaSearchResult:
    value: float
    lattice: Lattice
    norm: NormOracle
    trial: int

    def to_json(self) -> dict[str, Any]:
        return {"value": self.value, "trial": self.trial,
                "basis": self.lattice.to_config(), "norm": self.norm.to_config()}


def random_lattice(d: int, rng: np.random.Generator, entry_bound: int = 6) -> Lattice:
    """Integer basis with entries uniform in ``[-entry_bound, entry_bound]``, nonsingular."""
    while True:
        m = rng.integers(-entry_bound, entry_bound + 1, size=(d, d))
        if _exact.int_det(m.tolist()) != 0:
            return Lattice(tuple(map(tuple, m.tolist())))


def gamma_lower_bound_search(b: int, trials: int, seed: int,
                             max_candidates: int = DEFAULT_MAX_CANDIDATES) -> GammaSearchResult:
    """Largest transference product over random lattices and random polytope norms.

    Deterministic for a given ``seed``. Any value found is a lower bound for
    the supremum over all ``b``-dimensional lattices and norms.
    """
    if b < 1:
        raise ValidationError("dimension must be >= 1")
    if trials < 1:
        raise ValidationError("need at least one trial")
    rng = np.random.default_rng(seed)
    best: GammaSearchResult | None = None
    for t in range(trials):
        lat = random_lattice(b, rng)
        nrm = random_polytope(b, rng)
        val = gamma_product(lat, nrm, max_candidates)
        if best is None or val > best.value:
            best = GammaSearchResult(val, lat, nrm, t)
    assert best is not None
    return best


def norm_from_config(cfg: dict[str, Any], dim: int) -> NormOracle:
    kind = cfg.get("kind")
    if kind == "euclidean":
        return euclidean(dim)
    if kind == "linf":
        return linf(dim)
    if kind == "l1":
        return l1(dim)
    if kind == "lp":
        return weighted_lp(dim, float(cfg["p"]), cfg.get("weights"))
    if kind == "polytope":
        nrm = polytope(cfg["vertices"])
        if nrm.dim != dim:
            raise DimensionError(f"polytope dimension {nrm.dim} != lattice dimension {dim}")
        return nrm
    if kind in ("mass", "comass"):
        n = int(cfg["n"])
        if n * (n - 1) // 2 != dim:
            raise DimensionError(f"Lambda^2 R^{n} has dimension {n * (n - 1) // 2}, lattice has {dim}")
        return bivector_norm(n, kind, cfg.get("gram"))
    raise ValidationError(f"unknown norm kind {kind!r}")


def load_config(cfg: dict[str, Any]) -> tuple[Lattice, NormOracle]:
    """Parse ``{"basis": [[...]], "norm": {...}}``; basis rows, columns are basis vectors."""
    if "basis" not in cfg:
        raise ValidationError("config needs a 'basis' matrix")
    try:
        lat = Lattice(tuple(tuple(row) for row in cfg["basis"]))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad basis: {exc}") from exc
    return lat, norm_from_config(cfg.get("norm", {"kind": "euclidean"}), lat.dim)
