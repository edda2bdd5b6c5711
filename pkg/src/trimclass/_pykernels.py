"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``.

Results, including tie-breaks, match the compiled module exactly.
"""
from __future__ import annotations

from itertools import combinations, islice

import numpy as np

_CHUNK = 4096


def _planes(X: np.ndarray, idx: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    i = idx[:, 0]
    if m == 1:
        a = np.ones((idx.shape[0], 1))
        b = -X[i, 0]
        return a, b
    j = idx[:, 1]
    if m == 2:
        a0 = -(X[j, 1] - X[i, 1])
        a1 = X[j, 0] - X[i, 0]
        a = np.stack([a0, a1], axis=1)
        b = -(a0 * X[i, 0] + a1 * X[i, 1])
        return a, b
    k = idx[:, 2]
    u = X[j, :3] - X[i, :3]
    v = X[k, :3] - X[i, :3]
    a0 = u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1]
    a1 = u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2]
    a2 = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    a = np.stack([a0, a1, a2], axis=1)
    b = -(a0 * X[i, 0] + a1 * X[i, 1] + a2 * X[i, 2])
    return a, b


def best_hyperplane(X, y, m: int, init_best: int):
    """See ``_ckernels.best_hyperplane``."""
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=np.int8)
    if not 1 <= m <= 3:
        raise ValueError("kernel supports 1 <= m <= 3")
    if X.shape[1] < m:
        raise ValueError("X has fewer columns than m")
    n = X.shape[0]
    if y.shape[0] != n:
        raise ValueError("label length mismatch")
    labels = y.astype(bool)
    best, best_idx, best_orient = init_best, None, 0
    it = combinations(range(n), m)
    rows = np.arange(_CHUNK)
    while True:
        block = list(islice(it, _CHUNK))
        if not block:
            break
        idx = np.array(block, dtype=np.intp).reshape(-1, m)
        a, b = _planes(X, idx, m)
        keep = np.any(a != 0.0, axis=1)
        v = b[:, None] + a[:, 0:1] * X[None, :, 0]
        for c in range(1, m):
            v = v + a[:, c : c + 1] * X[None, :, c]
        wrong_p = (v >= 0.0) != labels[None, :]
        wrong_m = (-v >= 0.0) != labels[None, :]
        r = rows[: idx.shape[0]]
        for c in range(m):
            wrong_p[r, idx[:, c]] = False
            wrong_m[r, idx[:, c]] = False
        errp = wrong_p.sum(axis=1)
        errm = wrong_m.sum(axis=1)
        err = np.minimum(errp, errm)
        err[~keep] = n + 1
        t = int(np.argmin(err))
        if err[t] < best:
            best = int(err[t])
            best_idx = tuple(int(v_) for v_ in idx[t])
            best_orient = 1 if errp[t] <= errm[t] else -1
    return best, best_idx, best_orient
