"""Linear classifiers on coordinate prefixes and their 0-1 loss trainers.

The family ``G_m`` holds the halfspace rules ``1[a . x[:m] + b >= 0]``; its
VC dimension is ``m + 1``. Families are nested in ``m`` once a shorter
coefficient vector is padded with zeros.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from . import kernels
from .types import LabeledSample, LinearClassifier, ModelFamily

TRAINER_KINDS = ("exact_sweep_1d", "exact_enumeration", "stochastic_search")

EXACT_MAX_M = 3
EXACT_MAX_N = 60


class InstanceTooLarge(ValueError):
    """Raised when exact enumeration is requested beyond its guard rails."""


def predict_linear(a: Sequence[float], b: float, x: Sequence[float]) -> int:
    """``1`` iff ``a . x[:m] + b >= 0`` where ``m = len(a)``."""
    a = np.asarray(a, dtype=float).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if a.size > x.size:
        raise ValueError(f"dimension mismatch: {a.size} coefficients, {x.size} features")
    return int(float(a @ x[: a.size]) + float(b) >= 0.0)


def _errors(X: np.ndarray, y: np.ndarray, a: np.ndarray, b: float) -> int:
    return int(np.count_nonzero(((X @ a + b) >= 0.0) != (y == 1)))


def best_constant(s: LabeledSample, m: int = 1) -> tuple[LinearClassifier, int]:
    """Best constant rule and its error count; ties go to the all-ones rule."""
    ones = int(np.count_nonzero(s.y))
    if ones >= s.n - ones:
        return LinearClassifier.constant(1, m), s.n - ones
    return LinearClassifier.constant(0, m), ones


def erm_exact_1d(s: LabeledSample) -> LinearClassifier:
    """Exact empirical risk minimiser over thresholds on the first coordinate.

    Thresholds run over -inf, the midpoints of consecutive distinct values and
    +inf, each with both orientations. The first minimiser in that order wins,
    with the increasing orientation before the decreasing one.
    """
    x = s.X[:, 0]
    y = s.y
    vals = np.unique(x)
    mids = (vals[:-1] + vals[1:]) / 2.0
    thresholds = np.concatenate([[-np.inf], mids, [np.inf]])
    ones = int(np.count_nonzero(y))
    zeros = s.n - ones
    # errors of "predict 1 iff x >= t": zeros at or above t, ones below t
    xs = np.sort(x)
    order = np.argsort(x, kind="stable")
    ys = y[order]
    ones_below = np.concatenate([[0], np.cumsum(ys)])
    zeros_below = np.arange(s.n + 1) - ones_below
    pos = np.searchsorted(xs, thresholds, side="left")
    err_up = ones_below[pos] + (zeros - zeros_below[pos])
    err_down = s.n - err_up
    errs = np.stack([err_up, err_down], axis=1).ravel()
    best = int(np.argmin(errs))
    t, orient = thresholds[best // 2], best % 2
    if np.isinf(t):
        # -inf/up and +inf/down predict 1 everywhere
        label = 1 if (t < 0) == (orient == 0) else 0
        return LinearClassifier.constant(label)
    if orient == 0:
        return LinearClassifier((1.0,), -t)
    return LinearClassifier((-1.0,), t)


def _plane(X: np.ndarray, idx: tuple, m: int) -> tuple[np.ndarray, float]:
    a, b = kernels._pykernels._planes(X, np.array([idx], dtype=np.intp), m)
    return a[0], float(b[0])


def _perturb_onto_sides(Xm, y, idx, a, b):
    """Tilt the plane through ``idx`` so its defining points fall on their
    correct side without moving any other point across it."""
    idx = list(idx)
    targets = np.where(y[idx] == 1, 1.0, -1.0)
    design = np.hstack([Xm[idx], np.ones((len(idx), 1))])
    sol, *_ = np.linalg.lstsq(design, targets, rcond=None)
    c, d = sol[:-1], float(sol[-1])
    v = Xm @ a + b
    w = Xm @ c + d
    others = np.ones(Xm.shape[0], dtype=bool)
    others[idx] = False
    movable = others & (np.abs(w) > 0) & (v != 0)
    if np.any(movable):
        eps = 0.5 * float(np.min(np.abs(v[movable]) / np.abs(w[movable])))
    else:
        eps = 1.0
    return a + eps * c, b + eps * d


def _solve_small(Xm, y):
    """Any labelling of at most ``m`` generic points is linearly realisable."""
    targets = np.where(y == 1, 1.0, -1.0)
    design = np.hstack([Xm, np.ones((Xm.shape[0], 1))])
    sol, *_ = np.linalg.lstsq(design, targets, rcond=None)
    return sol[:-1], float(sol[-1])


def erm_exact_enum(
    s: LabeledSample,
    m: int,
    *,
    max_n: int = EXACT_MAX_N,
) -> LinearClassifier:
    """Exact 0-1 loss minimiser over ``G_m`` by hyperplane enumeration.

    Every hyperplane through ``m`` sample points is scanned with both
    orientations and with its defining points placed on their correct side;
    constant rules are included. For points in general position some
    candidate attains the global minimum. Requires ``m <= 3`` and
    ``n <= max_n``.
    """
    if not 1 <= m <= EXACT_MAX_M:
        raise InstanceTooLarge(
            f"instance too large for exact enumeration: m={m} exceeds {EXACT_MAX_M}"
        )
    if s.n > max_n:
        raise InstanceTooLarge(
            f"instance too large for exact enumeration: n={s.n} exceeds {max_n}"
        )
    if m > s.p:
        raise ValueError(f"m={m} exceeds feature dimension p={s.p}")
    Xm = np.ascontiguousarray(s.X[:, :m])
    y = s.y
    const, const_err = best_constant(s, m)
    best = const
    best_err = const_err
    if s.n <= m:
        a, b = _solve_small(Xm, y)
        if np.all(np.isfinite(a)):
            cand = LinearClassifier(a, b)
            err = _errors(Xm, y, np.asarray(cand.a), cand.b)
            if err < best_err:
                best, best_err = cand, err
        return best
    err, idx, orient = kernels.best_hyperplane(Xm, y.astype(np.int8), m, const_err)
    if idx is None:
        return best
    a, b = _plane(Xm, idx, m)
    a, b = orient * a, orient * b
    a, b = _perturb_onto_sides(Xm, y, idx, a, b)
    cand = LinearClassifier(a, b)
    if _errors(Xm, y, np.asarray(cand.a), cand.b) < best_err:
        best = cand
    return best


def _line_search(s_base: np.ndarray, col: np.ndarray, y1: np.ndarray):
    """Exact minimiser over ``t`` of the errors of ``1[s_base + t col >= 0]``.

    Returns ``(t, errors)``; gaps between breakpoints are preferred to the
    breakpoints themselves.
    """
    fixed = col == 0
    fixed_err = int(np.count_nonzero((s_base[fixed] >= 0) != y1[fixed]))
    pos = col > 0
    neg = col < 0
    r = np.empty_like(s_base)
    r[~fixed] = -s_base[~fixed] / col[~fixed]
    # col > 0: predicts 1 iff t >= r ; col < 0: predicts 1 iff t <= r
    p1 = np.sort(r[pos & y1])
    p0 = np.sort(r[pos & ~y1])
    n1 = np.sort(r[neg & y1])
    n0 = np.sort(r[neg & ~y1])
    brk = np.unique(r[~fixed])
    if brk.size == 0:
        return 0.0, fixed_err
    mids = (brk[:-1] + brk[1:]) / 2.0
    span = max(1.0, float(brk[-1] - brk[0]))
    cands = np.concatenate([mids, [brk[0] - span, brk[-1] + span], brk])
    err = (
        fixed_err
        + (p1.size - np.searchsorted(p1, cands, side="right"))  # t < r
        + np.searchsorted(p0, cands, side="right")  # r <= t
        + np.searchsorted(n1, cands, side="left")  # r < t
        + (n0.size - np.searchsorted(n0, cands, side="left"))  # t <= r
    )
    k = int(np.argmin(err))
    return float(cands[k]), int(err[k])


def _descend(Xm, y1, a, b, iters):
    y = y1.astype(np.int64)
    err = _errors(Xm, y, a, b)
    ones = np.ones(Xm.shape[0])
    for _ in range(iters):
        improved = False
        for j in range(Xm.shape[1] + 1):
            col = Xm[:, j] if j < Xm.shape[1] else ones
            coef = a[j] if j < Xm.shape[1] else b
            base = Xm @ a + b - coef * col
            t, e = _line_search(base, col, y1)
            if e < err:
                a2, b2 = a.copy(), b
                if j < Xm.shape[1]:
                    a2[j] = t
                else:
                    b2 = t
                honest = _errors(Xm, y, a2, b2)
                if honest < err:
                    a, b, err = a2, b2, honest
                    improved = True
        if not improved or err == 0:
            break
    return a, b, err


def erm_stochastic(
    s: LabeledSample,
    m: int,
    seed: int = 0,
    restarts: int = 50,
    iters: int = 200,
    init: Sequence[LinearClassifier] = (),
) -> LinearClassifier:
    """Random-restart coordinate descent on the empirical 0-1 loss.

    Each restart draws its own generator from ``SeedSequence(seed)``; the
    first restart starts from the class-mean direction. Each coordinate step
    is an exact line search. ``init`` adds warm starts (padded with zeros to
    length ``m``). Never worse than the best constant rule.
    """
    if m > s.p:
        raise ValueError(f"m={m} exceeds feature dimension p={s.p}")
    Xm = np.ascontiguousarray(s.X[:, :m])
    y = s.y
    y1 = y == 1
    best, best_err = best_constant(s, m)
    starts = []
    for g in init:
        a0 = np.zeros(m)
        a0[: g.m] = g.a[:m]
        starts.append((a0, g.b))
    children = np.random.SeedSequence(seed).spawn(restarts)
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        if r == 0 and y1.any() and (~y1).any():
            a0 = Xm[y1].mean(axis=0) - Xm[~y1].mean(axis=0)
            if not np.any(a0):
                a0 = rng.standard_normal(m)
            mid = (Xm[y1].mean(axis=0) + Xm[~y1].mean(axis=0)) / 2.0
        else:
            a0 = rng.standard_normal(m)
            mid = Xm[rng.integers(s.n)]
        starts.append((a0, -float(a0 @ mid)))
    for a0, b0 in starts:
        a, b, err = _descend(Xm, y1, np.array(a0, dtype=float), float(b0), iters)
        if err < best_err and np.all(np.isfinite(a)) and math.isfinite(b):
            best, best_err = LinearClassifier(a, b), err
    return best


def train(s: LabeledSample, m: int, kind: str = "exact", **kw) -> LinearClassifier:
    """Dispatch to a trainer by name.

    ``exact`` picks the threshold sweep for ``m == 1`` and enumeration above.
    """
    if kind in ("exact", "exact_sweep_1d") and m == 1:
        return erm_exact_1d(s)
    if kind in ("exact", "exact_enumeration"):
        return erm_exact_enum(s, m, **{k: v for k, v in kw.items() if k == "max_n"})
    if kind in ("stochastic", "stochastic_search"):
        allowed = {"seed", "restarts", "iters", "init"}
        return erm_stochastic(s, m, **{k: v for k, v in kw.items() if k in allowed})
    raise ValueError(f"unknown trainer kind {kind!r}; expected exact or stochastic")


@dataclass(frozen=True)
class LinearPrefixFamily:
    """Halfspace rules on the first ``m`` of ``p`` coordinates."""

    m: int
    p: int
    trainer_kind: str = "exact"
    seed: int = 0
    restarts: int = 50
    iters: int = 200
    max_n: int = EXACT_MAX_N

    def __post_init__(self):
        if not 1 <= self.m <= self.p:
            raise ValueError(f"need 1 <= m <= p, got m={self.m}, p={self.p}")

    @property
    def vc_dim(self) -> int:
        return self.m + 1

    @property
    def weight(self) -> float:
        return math.log(self.p)

    def fit(self, s: LabeledSample, init: Sequence[LinearClassifier] = ()) -> LinearClassifier:
        return train(
            s,
            self.m,
            self.trainer_kind,
            seed=self.seed,
            restarts=self.restarts,
            iters=self.iters,
            max_n=self.max_n,
            init=init,
        )

    def as_model_family(self) -> ModelFamily:
        return ModelFamily(
            index=self.m,
            vc_dim=self.vc_dim,
            weight=self.weight,
            trainer=self.fit,
            name=f"linear-prefix-{self.m}",
        )


def prefix_families(p: int, max_m: int | None = None, trainer_kind="exact", **kw) -> list[ModelFamily]:
    """``G_1, ..., G_max_m`` with ``x_m = ln p`` (so ``sum exp(-x_m) <= 1``)."""
    max_m = p if max_m is None else max_m
    if not 1 <= max_m <= p:
        raise ValueError(f"max_m must lie in [1, {p}]")
    kinds = trainer_kind if isinstance(trainer_kind, (list, tuple)) else [trainer_kind] * max_m
    return [
        LinearPrefixFamily(m, p, kinds[m - 1], **kw).as_model_family()
        for m in range(1, max_m + 1)
    ]


def bayes_two_gaussians(mu0, mu1, sigma: float, p0: float = 0.5) -> tuple[LinearClassifier, float]:
    """Bayes rule and Bayes error for ``N(mu_k, sigma^2 I)`` class conditionals.

    With ``d = |mu1 - mu0| / sigma`` and ``lam = ln(p0 / p1)`` the error is
    ``p0 Phi(-d/2 - lam/d) + p1 Phi(-d/2 + lam/d)``.
    """
    mu0 = np.asarray(mu0, dtype=float).ravel()
    mu1 = np.asarray(mu1, dtype=float).ravel()
    if mu0.shape != mu1.shape:
        raise ValueError("class means must have the same dimension")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not 0.0 < p0 < 1.0:
        raise ValueError("p0 must lie strictly inside (0, 1)")
    p1 = 1.0 - p0
    diff = mu1 - mu0
    d = float(np.linalg.norm(diff)) / sigma
    if d == 0.0:
        label = 1 if p1 >= p0 else 0
        return LinearClassifier.constant(label, mu0.size), min(p0, p1)
    lam = math.log(p0 / p1)
    a = diff / sigma**2
    b = -(float(mu1 @ mu1) - float(mu0 @ mu0)) / (2 * sigma**2) - lam
    err = p0 * norm.cdf(-d / 2 - lam / d) + p1 * norm.cdf(-d / 2 + lam / d)
    return LinearClassifier(a, b), float(err)


def gaussian_side_prob(a, b: float, mu, sigma: float) -> float:
    """``P(a . x[:m] + b >= 0)`` for ``x ~ N(mu, sigma^2 I)``."""
    a = np.asarray(a, dtype=float)
    mu = np.asarray(mu, dtype=float)[: a.size]
    mean = float(a @ mu) + b
    scale = sigma * float(np.linalg.norm(a))
    if scale == 0.0:
        return 1.0 if mean >= 0 else 0.0
    return float(norm.cdf(mean / scale))


def linear_rule_error(g: LinearClassifier, mu0, mu1, sigma: float, p0: float = 0.5) -> float:
    """Exact error of a linear rule for isotropic Gaussian classes."""
    a, b = np.asarray(g.a), g.b
    return p0 * gaussian_side_prob(a, b, mu0, sigma) + (1 - p0) * (
        1.0 - gaussian_side_prob(a, b, mu1, sigma)
    )
