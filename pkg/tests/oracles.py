"""Independent brute-force oracles shared by the module tests and the acceptance suite."""

from __future__ import annotations

import itertools

import numpy as np

BOX = 20
_BOX_POINTS: dict[int, np.ndarray] = {}


def box_points(d: int, bound: int = BOX) -> np.ndarray:
    key = d * 1000 + bound
    if key not in _BOX_POINTS:
        pts = np.array(list(itertools.product(range(-bound, bound + 1), repeat=d)))
        _BOX_POINTS[key] = pts[np.any(pts != 0, axis=1)]
    return _BOX_POINTS[key]


def exhaustive_minima(basis: np.ndarray, norm, bound: int = BOX, shortlist: int = 400):
    """Successive minima over all coefficient vectors with |a_i| <= bound.

    Greedy selection in order of norm value; ties do not change the values.
    """
    d = basis.shape[0]
    pts = box_points(d, bound)
    vals = norm.many(pts @ basis.T)
    for take in (min(shortlist, len(vals)), len(vals)):
        idx = np.argpartition(vals, take - 1)[:take] if take < len(vals) else np.arange(len(vals))
        idx = idx[np.argsort(vals[idx], kind="stable")]
        chosen: list[np.ndarray] = []
        out: list[float] = []
        for t in idx:
            cand = pts[t].astype(float)
            if np.linalg.matrix_rank(np.array(chosen + [cand])) == len(chosen) + 1:
                chosen.append(cand)
                out.append(float(vals[t]))
                if len(chosen) == d:
                    return out
    raise AssertionError("box too small to contain d independent vectors")


def _half_box(d: int, bound: int) -> np.ndarray:
    """Box points whose first nonzero coordinate is positive (one per +-pair)."""
    key = -(d * 1000 + bound)
    if key not in _BOX_POINTS:
        pts = box_points(d, bound)
        first = pts[np.arange(len(pts)), np.argmax(pts != 0, axis=1)]
        _BOX_POINTS[key] = pts[first > 0]
    return _BOX_POINTS[key]


def _extends_rank(chosen: list, cand: np.ndarray) -> bool:
    """Exact independence test for small integer vectors."""
    m = np.array(chosen + [cand], dtype=np.int64)
    k, d = m.shape
    if k == 1:
        return bool(np.any(m))
    if k == d:
        return round(np.linalg.det(m.astype(float))) != 0
    if k == 2 and d == 3:
        return bool(np.any(np.cross(m[0], m[1])))
    return np.linalg.matrix_rank(m.astype(float)) == k


# norms of the columns of a (d, m) array
PLAIN_NORMS = {
    "euclidean": lambda y: np.sqrt(np.sum(y * y, axis=0)),
    "linf": lambda y: np.max(np.abs(y), axis=0),
    "l1": lambda y: np.sum(np.abs(y), axis=0),
}


def exhaustive_minima_plain(basis: np.ndarray, bound: int = BOX, shortlist: int = 64):
    """Successive minima under the Euclidean, L-infinity and L1 norms, by brute force.

    Written directly against numpy so it shares no norm code with the package.
    """
    d = basis.shape[0]
    pts = _half_box(d, bound)
    image = basis @ pts.T
    out = {}
    for name, f in PLAIN_NORMS.items():
        vals = f(image)
        for take in (min(shortlist, len(vals)), len(vals)):
            idx = np.argpartition(vals, take - 1)[:take] if take < len(vals) else np.arange(len(vals))
            idx = idx[np.argsort(vals[idx], kind="stable")]
            chosen: list[np.ndarray] = []
            found: list[float] = []
            for t in idx:
                cand = pts[t]
                if _extends_rank(chosen, cand):
                    chosen.append(cand)
                    found.append(float(vals[t]))
                    if len(chosen) == d:
                        break
            if len(found) == d:
                out[name] = found
                break
        else:  # pragma: no cover
            raise AssertionError("box too small to contain d independent vectors")
    return out


def signed_row_orbit_reps(d: int, bound: int) -> list[np.ndarray]:
    """One nonsingular integer basis (columns) per class of d x d matrices with
    entries in [-bound, bound], where two matrices are identified if they differ
    by column order, column signs, and a signed permutation of the rows.

    Every such matrix generates a lattice that is the image of some returned
    lattice under a signed coordinate permutation.
    """
    vecs = np.array(list(itertools.product(range(-bound, bound + 1), repeat=d)))
    index = {tuple(v): i for i, v in enumerate(vecs)}
    neg = np.array([index[tuple(-v)] for v in vecs])
    # canonical representative of +-v
    half = np.minimum(np.arange(len(vecs)), neg)
    reps_v = np.unique(half[np.any(vecs != 0, axis=1)])
    group = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            mapped = vecs[:, perm] * np.array(signs)
            group.append(np.array([index[tuple(v)] for v in mapped]))
    group = np.array(group)
    combos = np.array(list(itertools.combinations(reps_v, d)))
    best = None
    for g in group:
        img = half[g[combos]]
        img.sort(axis=1)
        key = np.zeros(len(img), dtype=np.int64)
        for j in range(d):
            key = key * len(vecs) + img[:, j]
        best = key if best is None else np.minimum(best, key)
    keys = np.unique(best)
    out = []
    for key in keys:
        cols = []
        for _ in range(d):
            key, r = divmod(int(key), len(vecs))
            cols.append(vecs[r])
        m = np.array(cols[::-1]).T
        if round(abs(np.linalg.det(m))) != 0:
            out.append(m)
    return out


def min_cost_oracle(columns: np.ndarray, budget: int):
    """(cost, coeffs) of the cheapest all-nonzero combination, or None.

    Ties are broken lexicographically with entries ordered 0, 1, -1, 2, -2, ...
    """
    n = columns.shape[1]
    best = None
    for a in itertools.product(range(-budget, budget + 1), repeat=n):
        cost = sum(abs(x) for x in a)
        if cost > budget:
            continue
        key = (cost, tuple((abs(x), x < 0) for x in a))
        if (best is None or key < best[0]) and np.all(columns @ np.array(a) != 0):
            best = (key, a)
    return None if best is None else (best[0][0], best[1])
