"""Penalties, penalised selection of the trimming level (and model), and the
right-hand sides of the matching oracle inequalities.

Selection runs over the grid ``A = {0, 1/n, ..., k0/n}`` with
``k0 = floor(n * alpha_max)``. Ties go to the smallest alpha, then to the
smallest model index. ``ln`` is the natural logarithm throughout.
"""
from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field
from typing import Sequence

from .trimmed_error import (
    bias_bound,
    empirical_error,
    empirical_trimmed_error_polytope,
    lipschitz_alpha_bound,
    misclassified,
    trimmed_error_closed_form,
    trimmed_sets,
)
from .types import (
    Classifier,
    LabeledSample,
    ModelFamily,
    SelectionResult,
    check_alpha,
    check_family_weights,
)

DEFAULT_ALPHA_MAX = 0.25


class TrainerError(RuntimeError):
    """A family's trainer failed; ``family_index`` names the family."""

    def __init__(self, family_index: int, cause: BaseException):
        super().__init__(f"trainer for family m={family_index} failed: {cause}")
        self.family_index = family_index


def alpha_grid(n: int, alpha_max: float) -> tuple[float, ...]:
    """``(0, 1/n, ..., k0/n)`` with ``k0 = floor(n alpha_max)``."""
    alpha_max = check_alpha(alpha_max, "alpha_max")
    if n < 1:
        raise ValueError("n must be at least 1")
    k0 = int(math.floor(n * alpha_max + 1e-9))
    while k0 > 0 and k0 / n > alpha_max:
        k0 -= 1
    return tuple(k / n for k in range(k0 + 1))


@dataclass(frozen=True)
class SelectionConfig:
    n: int
    alpha_max: float = DEFAULT_ALPHA_MAX
    sigma: float = 1.0
    grid: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("selection needs n >= 2 so that ln(n) > 0")
        object.__setattr__(self, "alpha_max", check_alpha(self.alpha_max, "alpha_max"))
        if not (self.sigma >= 0.0):
            raise ValueError("sigma must be nonnegative")
        object.__setattr__(self, "grid", alpha_grid(self.n, self.alpha_max))

    @property
    def k0(self) -> int:
        return len(self.grid) - 1

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha_max": self.alpha_max, "sigma": self.sigma, "k0": self.k0}


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise ValueError(f"penalties need an integer n >= 2, got {n!r}")
    return int(n)


def pen_single(alpha: float, n: int) -> float:
    """``sqrt(ln n / (2n)) / (1 - alpha)``."""
    n = _check_n(n)
    alpha = check_alpha(alpha)
    return math.sqrt(math.log(n) / (2.0 * n)) / (1.0 - alpha)


def pen_joint_terms(alpha: float, fam: ModelFamily, n: int, *, log_variant: str = "statement") -> tuple[float, float]:
    """The two addends of the joint penalty.

    ``log_variant="statement"`` uses ``ln n`` in the first addend; ``"proof"``
    uses ``ln(n + 1)``, the form that closes the union bound.
    """
    n = _check_n(n)
    alpha = check_alpha(alpha)
    if log_variant == "statement":
        lg = math.log(n)
    elif log_variant == "proof":
        lg = math.log(n + 1)
    else:
        raise ValueError("log_variant must be 'statement' or 'proof'")
    k = 1.0 - alpha
    trim_term = math.sqrt((lg + fam.weight) / (2.0 * n * k * k))
    vc_term = math.sqrt((fam.vc_dim * math.log(n + 1) + math.log(2.0)) / n) / k
    return trim_term, vc_term


def pen_joint(alpha: float, fam: ModelFamily, n: int, *, log_variant: str = "statement") -> float:
    """``sqrt((ln n + x_m)/(2n(1-a)^2)) + sqrt((V_m ln(n+1) + ln 2)/n)/(1-a)``."""
    t1, t2 = pen_joint_terms(alpha, fam, n, log_variant=log_variant)
    return t1 + t2


def _argmin_first(values: Sequence[float]) -> int:
    best = 0
    for i, v in enumerate(values):
        if v < values[best]:
            best = i
    return best


def select_alpha(s: LabeledSample, g: Classifier, cfg: SelectionConfig) -> SelectionResult:
    """Choose the trimming level for a fixed rule ``g``.

    Minimises ``R_{n,alpha}(g) + pen_single(alpha, n)`` over the grid.
    """
    if cfg.n != s.n:
        raise ValueError(f"config built for n={cfg.n}, sample has n={s.n}")
    err = empirical_error(s, g)
    trace = []
    for a in cfg.grid:
        r = trimmed_error_closed_form(err, a)
        pen = pen_single(a, s.n)
        trace.append({"alpha": a, "trimmed_error": r, "penalty": pen, "objective": r + pen})
    k = _argmin_first([row["objective"] for row in trace])
    alpha_hat = cfg.grid[k]
    wrong = misclassified(s, g)
    _, weights = empirical_trimmed_error_polytope(s, g, alpha_hat)
    trimmed, partial = trimmed_sets(weights, wrong)
    diag = {
        "empirical_error": err,
        "trimmed_error": trace[k]["trimmed_error"],
        "penalty": trace[k]["penalty"],
        "grid_size": len(cfg.grid),
    }
    return SelectionResult(
        alpha_hat=alpha_hat,
        m_hat=None,
        classifier=g,
        trimmed_indices=trimmed,
        partially_trimmed=partial,
        objective=trace[k]["objective"],
        diagnostics=diag,
        trace=tuple(trace),
    )


def _accepts_init(fn) -> bool:
    try:
        return "init" in inspect.signature(fn).parameters
    except (TypeError, ValueError):
        return False


def select_alpha_model(
    s: LabeledSample,
    fams: Sequence[ModelFamily],
    cfg: SelectionConfig,
    *,
    warm_start: bool = False,
    log_variant: str = "statement",
) -> SelectionResult:
    """Jointly choose the trimming level and the model.

    Each family's trainer fits an empirical risk minimiser, which also
    minimises the trimmed empirical error within the class at every level.
    With ``warm_start`` the classifiers fitted so far are passed to trainers
    that take an ``init`` keyword.
    """
    if cfg.n != s.n:
        raise ValueError(f"config built for n={cfg.n}, sample has n={s.n}")
    fams = sorted(fams, key=lambda f: f.index)
    check_family_weights(fams, cfg.sigma)
    fits = []
    for fam in fams:
        try:
            if warm_start and _accepts_init(fam.trainer):
                g = fam.trainer(s, init=list(fits))
            else:
                g = fam.trainer(s)
        except Exception as exc:
            raise TrainerError(fam.index, exc) from exc
        fits.append(g)
    errs = [empirical_error(s, g) for g in fits]
    trace = []
    best = None
    for ai, a in enumerate(cfg.grid):
        for fi, fam in enumerate(fams):
            r = trimmed_error_closed_form(errs[fi], a)
            t1, t2 = pen_joint_terms(a, fam, s.n, log_variant=log_variant)
            obj = r + (t1 + t2)
            trace.append(
                {
                    "alpha": a,
                    "m": fam.index,
                    "empirical_error": errs[fi],
                    "trimmed_error": r,
                    "penalty_trim": t1,
                    "penalty_vc": t2,
                    "objective": obj,
                }
            )
            if best is None or obj < best[0]:
                best = (obj, ai, fi)
    obj, ai, fi = best
    alpha_hat, fam, g = cfg.grid[ai], fams[fi], fits[fi]
    wrong = misclassified(s, g)
    _, weights = empirical_trimmed_error_polytope(s, g, alpha_hat)
    trimmed, partial = trimmed_sets(weights, wrong)
    t1, t2 = pen_joint_terms(alpha_hat, fam, s.n, log_variant=log_variant)
    diag = {
        "empirical_error": errs[fi],
        "trimmed_error": trimmed_error_closed_form(errs[fi], alpha_hat),
        "penalty_trim": t1,
        "penalty_vc": t2,
        "penalty": t1 + t2,
        "penalty_trim_proof_log": pen_joint_terms(alpha_hat, fam, s.n, log_variant="proof")[0],
        "grid_size": len(cfg.grid),
        "n_families": len(fams),
    }
    return SelectionResult(
        alpha_hat=alpha_hat,
        m_hat=fam.index,
        classifier=g,
        trimmed_indices=trimmed,
        partially_trimmed=partial,
        objective=obj,
        diagnostics=diag,
        trace=tuple(trace),
    )


def continuum_infimum(err_true: float, alpha_max: float, coef: float) -> float:
    """``inf`` over ``[0, alpha_max]`` of ``((R - a)_+ + coef) / (1 - a)``.

    On each side of ``a = R`` the function is monotone, so the infimum sits at
    ``0``, ``min(R, alpha_max)`` or ``alpha_max``.
    """
    pts = {0.0, min(err_true, alpha_max), alpha_max}
    return min((max(err_true - a, 0.0) + coef) / (1.0 - a) for a in pts)


def oracle_bound_single_details(err_true: float, n: int, cfg: SelectionConfig) -> dict:
    """All pieces of the single-rule oracle bound.

    ``value`` takes the minimum over the grid with the ``sqrt(R)/(sqrt(n)(1-a))``
    deviation term. ``value_sqrt2n`` swaps in ``sqrt(2n)``. ``continuum_value``
    is the exact infimum over ``[0, alpha_max]``, which can undercut the grid
    by at most ``lipschitz_slack``.
    """
    if not 0.0 <= err_true <= 1.0:
        raise ValueError("err_true must lie in [0, 1]")
    _check_n(n)
    am = cfg.alpha_max
    c_pen = math.sqrt(math.log(n) / (2.0 * n))

    def grid_min(dev):
        return min(
            trimmed_error_closed_form(err_true, a) + pen_single(a, n) + dev / (1.0 - a)
            for a in cfg.grid
        )

    dev_n = math.sqrt(err_true) / math.sqrt(n)
    dev_2n = math.sqrt(err_true) / math.sqrt(2.0 * n)
    tail = math.sqrt(2.0 * math.pi / n) / (1.0 - am) + lipschitz_alpha_bound(n, am)
    return {
        "value": grid_min(dev_n) + tail,
        "value_sqrt2n": grid_min(dev_2n) + tail,
        "continuum_value": continuum_infimum(err_true, am, c_pen + dev_n) + tail,
        "tail": tail,
        "lipschitz_slack": lipschitz_alpha_bound(n, am),
    }


def oracle_bound_single(err_true: float, n: int, cfg: SelectionConfig) -> float:
    """Right-hand side of the single-rule oracle inequality (grid form)."""
    return oracle_bound_single_details(err_true, n, cfg)["value"]


def oracle_bound_joint_details(
    fams: Sequence[ModelFamily],
    errs_true: Sequence[float],
    n: int,
    cfg: SelectionConfig,
    *,
    log_variant: str = "statement",
) -> dict:
    """Pieces of the joint oracle bound; ``errs_true[i]`` is the smallest true
    error within ``fams[i]``."""
    fams = list(fams)
    errs_true = [float(e) for e in errs_true]
    if len(fams) != len(errs_true):
        raise ValueError(f"{len(fams)} families but {len(errs_true)} true errors")
    if any(not 0.0 <= e <= 1.0 for e in errs_true):
        raise ValueError("true errors must lie in [0, 1]")
    _check_n(n)
    am = cfg.alpha_max
    best = None
    for a in cfg.grid:
        for fam, e in zip(fams, errs_true):
            v = (
                trimmed_error_closed_form(e, a)
                + pen_joint(a, fam, n, log_variant=log_variant)
                + bias_bound(e, n, a)
            )
            if best is None or v < best[0]:
                best = (v, a, fam.index)
    tail = (1.0 + cfg.sigma) / (2.0 * (1.0 - am)) * math.sqrt(math.pi / (2.0 * n)) + lipschitz_alpha_bound(n, am)
    return {
        "value": best[0] + tail,
        "grid_min": best[0],
        "argmin_alpha": best[1],
        "argmin_m": best[2],
        "tail": tail,
        "lipschitz_slack": lipschitz_alpha_bound(n, am),
    }


def oracle_bound_joint(
    fams: Sequence[ModelFamily],
    errs_true: Sequence[float],
    n: int,
    cfg: SelectionConfig,
) -> float:
    """Right-hand side of the joint oracle inequality."""
    return oracle_bound_joint_details(fams, errs_true, n, cfg)["value"]
