"""Pure-Python hot loops; reference implementation of the compiled kernels.

Both functions here have a twin in ``_ckernels.pyx`` with the same signature
and identical output (including order). ``syscow.kernels`` picks one at import.
"""

from __future__ import annotations

import math

import numpy as np


def enumerate_ball(R, radius2: float, max_count: int):
    """All nonzero integer ``x`` with ``|R x|^2 <= radius2`` (Fincke-Pohst).

    ``R`` is upper triangular with positive diagonal (Cholesky factor of the
    Gram matrix). Returns ``(points, overflow)``: an ``(m, d)`` int64 array and
    a flag set when more than ``max_count`` points exist (points then partial).
    """
    R = np.asarray(R, dtype=float)
    d = R.shape[0]
    diag2 = [R[i, i] ** 2 for i in range(d)]
    mu = [[R[i, j] / R[i, i] for j in range(d)] for i in range(d)]
    x = [0] * d
    center = [0.0] * d
    hi = [0] * d
    partial = [0.0] * (d + 1)
    out: list[tuple[int, ...]] = []

    def bounds(level: int) -> None:
        c = -sum(mu[level][j] * x[j] for j in range(level + 1, d))
        center[level] = c
        rem = radius2 - partial[level + 1]
        if rem < 0:
            rem = 0.0
        half = math.sqrt(rem / diag2[level])
        x[level] = math.ceil(c - half - 1e-12)
        hi[level] = math.floor(c + half + 1e-12)

    level = d - 1
    bounds(level)
    while True:
        if x[level] > hi[level]:
            level += 1
            if level == d:
                break
            x[level] += 1
            continue
        t = x[level] - center[level]
        val = partial[level + 1] + diag2[level] * t * t
        if val > radius2:
            x[level] += 1
            continue
        partial[level] = val
        if level == 0:
            if any(x):
                out.append(tuple(x))
                if len(out) > max_count:
                    return np.array(out, dtype=np.int64), True
            x[0] += 1
            continue
        level -= 1
        bounds(level)
    return np.array(out, dtype=np.int64).reshape(len(out), d), False


def coefficient_order(bound: int):
    """0, 1, -1, 2, -2, ..., bound, -bound."""
    yield 0
    for t in range(1, bound + 1):
        yield t
        yield -t


def min_cost_nonzero(V, budget: int):
    """First ``a`` of least L1 cost with ``V a`` all nonzero.

    ``V`` holds the vectors as columns. Cost levels ``0..budget`` are scanned in
    order and, within a level, coefficient vectors lexicographically with the
    entry order ``0, 1, -1, 2, -2, ...``.
    Returns the coefficient list or ``None``.
    """
    cols = [[int(V[i][j]) for i in range(len(V))] for j in range(len(V[0]))]
    n = len(cols)
    rows = len(cols[0]) if n else 0
    a = [0] * n

    def search(pos: int, remaining: int, acc: list[int]) -> bool:
        col = cols[pos]
        if pos == n - 1:
            for t in ((remaining, -remaining) if remaining else (0,)):
                if all(acc[i] + t * col[i] != 0 for i in range(rows)):
                    a[pos] = t
                    return True
            return False
        for t in coefficient_order(remaining):
            a[pos] = t
            nxt = [acc[i] + t * col[i] for i in range(rows)] if t else acc
            if search(pos + 1, remaining - abs(t), nxt):
                return True
        a[pos] = 0
        return False

    for cost in range(budget + 1):
        if search(0, cost, [0] * rows):
            return list(a)
    return None
