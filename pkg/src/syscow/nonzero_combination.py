"""Integer combinations of independent vectors with every coordinate nonzero.

Given independent ``v_1..v_n`` in Z^n, :func:`find_combination` builds
``a`` in Z^n with ``sum |a_j| <= V_n = floor((n+1)/2) * ceil((n+1)/2)`` such
that ``sum a_j v_j`` has no zero entry. It recurses on the first ``n-1``
coordinates and then repairs the last one by adding ``c * v_l`` for a small
``c``: each of the other ``n-1`` coordinates rules out at most one ``c`` and
``c = 0`` is excluded, so one of the ``2*ceil(n/2) >= n`` candidates works.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Sequence

from . import _exact, kernels
from .errors import ResourceError, ValidationError

DEFAULT_ENUMERATION_CAP = 10**8
_INT64_SAFE = 2**62


def v_n(n: int) -> int:
    """``floor((n+1)/2) * ceil((n+1)/2)``."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return ((n + 1) // 2) * ((n + 2) // 2)


@dataclass(frozen=True)
class IntegerBasis:
    """n independent integer vectors, stored as the columns of ``rows``."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        try:
            rows = tuple(tuple(_as_int(v) for v in row) for row in self.rows)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"matrix entries must be integers: {exc}") from exc
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValidationError("need a non-empty square integer matrix")
        if _exact.int_det(rows) == 0:
            raise ValidationError("columns are linearly dependent")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_columns(cls, vectors: Sequence[Sequence[int]]) -> "IntegerBasis":
        return cls(tuple(zip(*vectors)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def combine(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(r * a for r, a in zip(row, coeffs)) for row in self.rows)

    def permuted(self, perm: Sequence[int]) -> "IntegerBasis":
        """Basis whose ``j``-th column is the ``perm[j]``-th column of this one."""
        return IntegerBasis(tuple(tuple(row[p] for p in perm) for row in self.rows))


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise TypeError("boolean entry")
    if isinstance(v, int):
        return v
    if isinstance(v, float) and v.is_integer():
        return int(v)
    if hasattr(v, "item"):
        return _as_int(v.item())
    raise ValueError(f"{v!r} is not an integer")


@dataclass(frozen=True)
class Combination:
    coeffs: tuple[int, ...]
    result: tuple[int, ...]
    cost: int
    trace: tuple[dict[str, Any], ...] = field(default=(), compare=False)

    def to_json(self) -> dict[str, Any]:
        return {"coeffs": list(self.coeffs), "result": list(self.result),
                "cost": self.cost, "trace": list(self.trace)}


def _make(basis: IntegerBasis, coeffs: Sequence[int], trace=()) -> Combination:
    coeffs = tuple(int(a) for a in coeffs)
    result = basis.combine(coeffs)
    return Combination(coeffs, result, sum(abs(a) for a in coeffs), tuple(trace))


def _repair_order(m: int):
    """Candidate multipliers +1, -1, +2, -2, ..., +-ceil(m/2)."""
    for c in range(1, (m + 1) // 2 + 1):
        yield c
        yield -c


def _solve(rows: list[list[int]], trace: list[dict[str, Any]], depth: int) -> list[int]:
    n = len(rows)
    if n == 1:
        trace.append({"depth": depth, "n": 1, "subset": [0], "l": None, "c": None})
        return [1]
    top = [row for row in rows[:-1]]
    subset = next(s for s in combinations(range(n), n - 1)
                  if _exact.int_det([[row[j] for j in s] for row in top]) != 0)
    sub = [[row[j] for j in subset] for row in top]
    sub_coeffs = _solve(sub, trace, depth + 1)
    a = [0] * n
    for j, c in zip(subset, sub_coeffs):
        a[j] = c
    v = [sum(r * x for r, x in zip(row, a)) for row in rows]
    step: dict[str, Any] = {"depth": depth, "n": n, "subset": list(subset), "l": None, "c": None}
    if v[-1] == 0:
        last = rows[-1]
        l = next(j for j in range(n) if last[j] != 0)
        col = [row[l] for row in rows]
        for c in _repair_order(n):
            if all(x + c * y != 0 for x, y in zip(v, col)):
                a[l] += c
                step["l"], step["c"] = l, c
                break
        else:  # pragma: no cover - excluded by the counting argument
            raise AssertionError("no admissible multiplier; input was not independent")
    trace.append(step)
    return a


def find_combination(basis: IntegerBasis) -> Combination:
    """Coefficients of cost at most ``v_n(n)`` whose combination has no zero entry.

    The trace lists one entry per recursion level (innermost first): the
    column subset kept after deleting the last row, and the repair column
    ``l`` and multiplier ``c`` when the last coordinate needed fixing.
    """
    trace: list[dict[str, Any]] = []
    coeffs = _solve([list(r) for r in basis.rows], trace, 0)
    return _make(basis, coeffs, trace)


def l1_ball_size(n: int, radius: int) -> int:
    """Number of points of Z^n with L1 norm at most ``radius``."""
    return sum(2**k * comb(n, k) * comb(radius, k) for k in range(min(n, radius) + 1))


def brute_force_min_cost(basis: IntegerBasis, budget: int,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> Combination | None:
    """Cheapest all-nonzero combination with cost <= ``budget``, or None.

    Ties go to the lexicographically first coefficient vector under the entry
    order ``0, 1, -1, 2, -2, ...``.
    """
    if budget < 0:
        raise ValidationError("budget must be nonnegative")
    size = l1_ball_size(basis.n, budget)
    if size > cap:
        raise ResourceError(f"enumeration of {size} coefficient vectors exceeds cap {cap}")
    biggest = max(abs(v) for row in basis.rows for v in row)
    if biggest * budget * basis.n < _INT64_SAFE:
        coeffs = kernels.min_cost_nonzero(basis.rows, budget)
    else:
        from ._pykernels import min_cost_nonzero

        coeffs = min_cost_nonzero(basis.rows, budget)
    return None if coeffs is None else _make(basis, coeffs)
