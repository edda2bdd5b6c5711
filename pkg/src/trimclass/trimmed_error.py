"""Trimmed classification error functionals.

The empirical trimmed error of a rule ``g`` at level ``alpha`` is the
smallest weighted misclassification rate over the weight polytope

    W = {w : 0 <= w_i <= 1/(n(1-alpha)), sum_i w_i = 1},

and equals ``(R_n(g) - alpha)_+ / (1 - alpha)``. The population version has
the same form in terms of ``R(g)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import Classifier, LabeledSample, TrimWeights, check_alpha

# weights this far below the cap count as trimmed
TRIM_TOL = 1e-12


def misclassified(s: LabeledSample, g: Classifier) -> np.ndarray:
    """Boolean mask of observations with ``g(X_i) != Y_i``."""
    return g.predict(s.X) != s.y


def empirical_error(s: LabeledSample, g: Classifier) -> float:
    """Fraction of misclassified observations."""
    return int(np.count_nonzero(misclassified(s, g))) / s.n


def _check_err(err: float) -> float:
    err = float(err)
    if not (0.0 <= err <= 1.0):
        raise ValueError(f"error rate must lie in [0, 1], got {err!r}")
    return err


def trimmed_error_closed_form(err: float, alpha: float) -> float:
    """``(err - alpha)_+ / (1 - alpha)``."""
    err = _check_err(err)
    alpha = check_alpha(alpha)
    return max(err - alpha, 0.0) / (1.0 - alpha)


def trimmed_error_array(err, alpha):
    """Vectorised closed form; no validation."""
    err = np.asarray(err, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    return np.maximum(err - alpha, 0.0) / (1.0 - alpha)


def trimmed_bayes_error(err_bayes: float, alpha: float) -> float:
    """Trimmed Bayes error; zero exactly when ``err_bayes <= alpha``."""
    return trimmed_error_closed_form(err_bayes, alpha)


def perfect_separation(err: float, alpha: float) -> bool:
    """True iff trimming a fraction ``alpha`` can remove every error."""
    return _check_err(err) <= check_alpha(alpha)


def fill_weights(wrong: np.ndarray, alpha: float) -> tuple[float, TrimWeights]:
    """Optimal weights in ``W`` for a given misclassification mask.

    Correctly classified points are filled to the cap first, in index order;
    any remaining mass goes to misclassified points, also in index order.
    Returns the objective and the weights.
    """
    alpha = check_alpha(alpha)
    wrong = np.asarray(wrong, dtype=bool)
    n = wrong.size
    cap = TrimWeights.cap_for(n, alpha)
    order = np.concatenate([np.flatnonzero(~wrong), np.flatnonzero(wrong)])
    # the unit mass holds n(1 - alpha) full caps
    slots = n * (1.0 - alpha)
    if abs(slots - round(slots)) < 1e-9:
        slots = float(round(slots))
    full = int(math.floor(slots))
    frac = slots - full
    w = np.zeros(n)
    w[order[:full]] = cap
    if full < n and frac > 1e-12:
        w[order[full]] = frac * cap
    # absorb rounding drift into the last positive weight so sum(w) == 1
    drift = 1.0 - math.fsum(w)
    if drift != 0.0:
        j = np.flatnonzero(w > 0)[-1]
        w[j] = min(max(w[j] + drift, 0.0), cap)
    value = math.fsum(w[wrong])
    return value, TrimWeights(w, alpha)


def empirical_trimmed_error_polytope(
    s: LabeledSample, g: Classifier, alpha: float
) -> tuple[float, TrimWeights]:
    """Minimum of ``sum_i w_i 1[g(X_i) != Y_i]`` over ``W`` and a minimiser."""
    return fill_weights(misclassified(s, g), alpha)


def trimmed_sets(weights: TrimWeights, wrong: np.ndarray) -> tuple[tuple, tuple]:
    """Indices of trimmed misclassified points and those only partly trimmed.

    A misclassified point is trimmed when its weight is strictly below the cap
    (minus 1e-12); it is partly trimmed when that weight is also positive.
    """
    w = weights.weights
    below = (w < weights.cap - TRIM_TOL) & np.asarray(wrong, dtype=bool)
    trimmed = tuple(int(i) for i in np.flatnonzero(below))
    partial = tuple(int(i) for i in np.flatnonzero(below & (w > 0.0)))
    return trimmed, partial


@dataclass(frozen=True)
class MixtureSpec:
    """A distribution seen through one classifier.

    ``p0`` is the class-0 prior, ``q00 = P0(g = 0)`` and ``q11 = P1(g = 1)``.
    """

    p0: float
    q00: float
    q11: float

    def __post_init__(self):
        if not (0.0 < self.p0 < 1.0):
            raise ValueError("p0 must lie strictly inside (0, 1)")
        for name in ("q00", "q11"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def error(self) -> float:
        return self.p0 * (1.0 - self.q00) + (1.0 - self.p0) * (1.0 - self.q11)


def feasible_q0_interval(p0: float, alpha: float) -> tuple[float, float]:
    """Class-0 masses reachable by an alpha-trimming of the class split."""
    k = 1.0 - alpha
    lo = max(0.0, 1.0 - (1.0 - p0) / k)
    hi = min(1.0, p0 / k)
    return lo, hi


def trimmed_error_decomposition_oracle(mix: MixtureSpec, alpha: float) -> float:
    """Trimmed error as a minimum over the class-0 mass ``q0`` of a trimming.

    The objective ``(q0 - p0 q00/(1-a))_+ + (1 - q0 - p1 q11/(1-a))_+`` is
    piecewise linear in ``q0``, so it is evaluated at its two kinks (clipped
    to the feasible interval) and at the interval ends.
    """
    alpha = check_alpha(alpha)
    lo, hi = feasible_q0_interval(mix.p0, alpha)
    if lo > hi + 1e-12:
        raise ValueError("empty feasible interval for q0")
    # at alpha = 0 the interval is the single point p0, up to rounding
    lo = min(lo, hi)
    k = 1.0 - alpha
    keep0 = mix.p0 * mix.q00 / k
    keep1 = (1.0 - mix.p0) * mix.q11 / k
    best = math.inf
    for q0 in (lo, hi, min(max(keep0, lo), hi), min(max(1.0 - keep1, lo), hi)):
        v = max(q0 - keep0, 0.0) + max(1.0 - q0 - keep1, 0.0)
        if v < best:
            best = v
    return best


def bias_bound(err_true: float, n: int, alpha: float) -> float:
    """Upper bound ``sqrt(R)/(sqrt(2n)(1-alpha))`` on the bias of R_{n,alpha}."""
    err_true = _check_err(err_true)
    alpha = check_alpha(alpha)
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.sqrt(err_true) / (math.sqrt(2.0 * n) * (1.0 - alpha))


def lipschitz_alpha_bound(n: int, alpha_max: float) -> float:
    """Largest change of the trimmed error over an alpha step of ``1/n``."""
    alpha_max = check_alpha(alpha_max, "alpha_max")
    if n < 1:
        raise ValueError("n must be at least 1")
    return 1.0 / (n * (1.0 - alpha_max) ** 2)


def expected_empirical_trimmed_error(err_true: float, n: int, alpha: float) -> float:
    """Exact ``E[R_{n,alpha}(g)]`` when ``n R_n(g)`` is Binomial(n, err_true)."""
    from scipy.stats import binom

    err_true = _check_err(err_true)
    alpha = check_alpha(alpha)
    k = np.arange(n + 1)
    pmf = binom.pmf(k, n, err_true)
    return float(np.dot(pmf, trimmed_error_array(k / n, alpha)))
