"""Seeded contaminated-data generators and Monte Carlo verification runs.

Clean data come from two isotropic Gaussian classes. A fraction ``eps`` of
points is replaced by outliers: either the label is flipped, or the point is
redrawn from a shifted Gaussian (optionally with a fixed label).

Every stochastic assertion passes when the measured value respects its bound
within 3 standard errors. Random streams come from ``SeedSequence`` children
keyed by chunk or replication index, so results do not depend on how the
work is split.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from .classifiers import (
    bayes_two_gaussians,
    gaussian_side_prob,
    prefix_families,
)
from .selection import (
    SelectionConfig,
    oracle_bound_joint_details,
    oracle_bound_single_details,
    select_alpha,
    select_alpha_model,
)
from .trimmed_error import (
    MixtureSpec,
    bias_bound,
    expected_empirical_trimmed_error,
    fill_weights,
    lipschitz_alpha_bound,
    trimmed_bayes_error,
    trimmed_error_array,
    trimmed_error_closed_form,
    trimmed_error_decomposition_oracle,
)
from .types import Classifier, LabeledSample, LinearClassifier, ModelFamily, check_alpha

SE_SLACK = 3.0
CHUNK = 10_000


@dataclass(frozen=True)
class TwoGaussians:
    mu0: tuple
    mu1: tuple
    sigma: float = 1.0
    p0: float = 0.5

    def __post_init__(self):
        mu0 = tuple(float(v) for v in np.atleast_1d(self.mu0))
        mu1 = tuple(float(v) for v in np.atleast_1d(self.mu1))
        if len(mu0) != len(mu1):
            raise ValueError("class means must have the same dimension")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0.0 < self.p0 < 1.0:
            raise ValueError("p0 must lie strictly inside (0, 1)")
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "mu1", mu1)

    @property
    def dim(self) -> int:
        return len(self.mu0)

    def to_dict(self) -> dict:
        return {"mu0": list(self.mu0), "mu1": list(self.mu1), "sigma": self.sigma, "p0": self.p0}


@dataclass(frozen=True)
class LabelFlip:
    kind = "label_flip"

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class CovariateShift:
    """Outliers drawn from ``N(mu_out, sigma_out^2 I)``.

    ``label=None`` draws the outlier label from the clean class prior.
    """

    mu_out: tuple
    sigma_out: float = 1.0
    label: int | None = None
    kind = "covariate_shift"

    def __post_init__(self):
        object.__setattr__(self, "mu_out", tuple(float(v) for v in np.atleast_1d(self.mu_out)))
        if not self.sigma_out > 0:
            raise ValueError("sigma_out must be positive")
        if self.label not in (None, 0, 1):
            raise ValueError("outlier label must be 0, 1 or None")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mu_out": list(self.mu_out),
            "sigma_out": self.sigma_out,
            "label": self.label,
        }


@dataclass(frozen=True)
class ContaminationSpec:
    clean: TwoGaussians
    eps: float = 0.0
    outlier: LabelFlip | CovariateShift = field(default_factory=LabelFlip)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("eps must lie in [0, 1)")
        if isinstance(self.outlier, CovariateShift) and len(self.outlier.mu_out) != self.clean.dim:
            raise ValueError("outlier mean has the wrong dimension")

    @property
    def dim(self) -> int:
        return self.clean.dim

    def to_dict(self) -> dict:
        return {
            "clean": self.clean.to_dict(),
            "eps": self.eps,
            "outlier": self.outlier.to_dict(),
            "seed": self.seed,
        }


class Draw(NamedTuple):
    sample: LabeledSample
    outliers: tuple


def _draw_arrays(spec: ContaminationSpec, shape: tuple, rng: np.random.Generator):
    """Draw labels, features and the outlier mask for ``shape = (..., n)``."""
    c = spec.clean
    p = c.dim
    out = rng.random(shape) < spec.eps
    y = (rng.random(shape) >= c.p0).astype(np.int64)
    noise = rng.standard_normal(shape + (p,))
    mu = np.where(y[..., None] == 1, np.asarray(c.mu1), np.asarray(c.mu0))
    X = mu + c.sigma * noise
    o = spec.outlier
    if isinstance(o, LabelFlip):
        y = np.where(out, 1 - y, y)
    else:
        X = np.where(out[..., None], np.asarray(o.mu_out) + o.sigma_out * noise, X)
        if o.label is not None:
            y = np.where(out, o.label, y)
    return X, y, out


def generate(spec: ContaminationSpec, n: int, seed: int | None = None) -> Draw:
    """Draw ``n`` points; the outlier indices are kept as ground truth."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    X, y, out = _draw_arrays(spec, (n,), rng)
    return Draw(LabeledSample(X, y), tuple(int(i) for i in np.flatnonzero(out)))


def _batches(spec: ContaminationSpec, n: int, reps: int, seed: int, chunk: int = CHUNK):
    """Yield ``(X, y)`` with shapes ``(r, n, p)`` and ``(r, n)``; chunk ``i``
    uses child ``i`` of ``SeedSequence(seed)``."""
    n_chunks = -(-reps // chunk)
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_chunks)):
        r = min(chunk, reps - i * chunk)
        X, y, _ = _draw_arrays(spec, (r, n), np.random.default_rng(child))
        yield X, y


def _empirical_errors(g: Classifier, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    r, n, p = X.shape
    pred = g.predict(X.reshape(r * n, p)).reshape(r, n)
    return np.count_nonzero(pred != y, axis=1) / n


def _outlier_error(g: LinearClassifier, spec: ContaminationSpec) -> float:
    o = spec.outlier
    a, b = np.asarray(g.a), g.b
    if isinstance(o, LabelFlip):
        return 1.0 - true_error(g, ContaminationSpec(spec.clean))
    hit = gaussian_side_prob(a, b, o.mu_out, o.sigma_out)
    if o.label == 1:
        return 1.0 - hit
    if o.label == 0:
        return hit
    return spec.clean.p0 * hit + (1 - spec.clean.p0) * (1.0 - hit)


def true_error(g: Classifier, spec: ContaminationSpec) -> float:
    """Exact misclassification probability of a linear rule under ``spec``."""
    if not isinstance(g, LinearClassifier):
        raise TypeError("closed-form error needs a LinearClassifier; use estimate_true_error")
    c = spec.clean
    a, b = np.asarray(g.a), g.b
    clean = c.p0 * gaussian_side_prob(a, b, c.mu0, c.sigma) + (1 - c.p0) * (
        1.0 - gaussian_side_prob(a, b, c.mu1, c.sigma)
    )
    if spec.eps == 0.0:
        return clean
    return (1 - spec.eps) * clean + spec.eps * _outlier_error(g, spec)


def estimate_true_error(
    g: Classifier, spec: ContaminationSpec, samples: int = 1_000_000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of ``R(g)`` and its standard error."""
    wrong = 0
    for X, y in _batches(spec, samples, 1, seed, chunk=1):
        wrong = int(np.count_nonzero(g.predict(X[0]) != y[0]))
    est = wrong / samples
    return est, math.sqrt(max(est * (1 - est), 0.0) / samples)


def class_min_error(spec: ContaminationSpec, m: int, *, restarts: int = 8, seed: int = 0) -> float:
    """Smallest true error over linear rules on the first ``m`` coordinates.

    Exact for clean data and for label flips with ``eps < 1/2``: the best
    rule is then the Bayes rule of the first ``m`` coordinates. Under
    covariate shift the closed-form error is minimised numerically, which
    yields an upper bound on the class minimum.
    """
    c = spec.clean
    g, err = bayes_two_gaussians(c.mu0[:m], c.mu1[:m], c.sigma, c.p0)
    if spec.eps == 0.0:
        return err
    if isinstance(spec.outlier, LabelFlip):
        if spec.eps >= 0.5:
            raise ValueError("label flips at rate >= 1/2 reverse the optimal rule")
        return spec.eps + (1 - 2 * spec.eps) * err

    def risk(theta):
        a = theta[:m]
        if not np.any(a):
            return 1.0
        return true_error(LinearClassifier(a, theta[m]), spec)

    rng = np.random.default_rng(seed)
    starts = [np.concatenate([np.asarray(g.a, dtype=float), [g.b]])]
    starts += [rng.standard_normal(m + 1) for _ in range(restarts - 1)]
    best = min(risk(s) for s in starts)
    for s in starts:
        res = minimize(risk, s, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best


@dataclass
class ExperimentReport:
    """Outcome of one verification run."""

    name: str
    replications: int
    measured: dict = field(default_factory=dict)  # name -> (mean, standard error)
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    runtime: float = 0.0
    per_replication: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.checks = {k: bool(v) for k, v in self.checks.items()}

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if ok else 'FAIL'} {self.name}:{key}" for key, ok in self.checks.items()]

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = {
            "name": self.name,
            "replications": self.replications,
            "measured": {k: {"mean": v[0], "std_error": v[1]} for k, v in self.measured.items()},
            "bounds": dict(self.bounds),
            "checks": dict(self.checks),
            "passed": self.passed,
            "details": dict(self.details),
        }
        if include_runtime:
            d["runtime_seconds"] = self.runtime
        return d

    def write_csv(self, path) -> None:
        """One row per replication, then one summary row per assertion."""
        cols = sorted(self.per_replication)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row_type", "index", *cols, "assertion", "passed"])
            if cols:
                for i, vals in enumerate(zip(*(self.per_replication[c] for c in cols))):
                    w.writerow(["replication", i, *(repr(float(v)) for v in vals), "", ""])
            for key, ok in self.checks.items():
                w.writerow(["summary", "", *([""] * len(cols)), key, int(ok)])


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def _trimmed_errors_mc(g, spec, n, alpha, reps, seed):
    out = []
    for X, y in _batches(spec, n, reps, seed):
        out.append(trimmed_error_array(_empirical_errors(g, X, y), alpha))
    return np.concatenate(out)


def verify_bias_bound(
    g: Classifier, spec: ContaminationSpec, n: int, alpha: float, reps: int, seed: int = 0
) -> ExperimentReport:
    """Check ``0 <= E R_{n,alpha}(g) - R_alpha(g) <= sqrt(R)/(sqrt(2n)(1-alpha))``."""
    t0 = time.perf_counter()
    alpha = check_alpha(alpha)
    r = true_error(g, spec)
    target = trimmed_error_closed_form(r, alpha)
    vals = _trimmed_errors_mc(g, spec, n, alpha, reps, seed)
    mean, se = _mean_se(vals)
    bias = mean - target
    bound = bias_bound(r, n, alpha)
    exact_bias = expected_empirical_trimmed_error(r, n, alpha) - target
    return ExperimentReport(
        name="bias",
        replications=reps,
        measured={"bias": (bias, se), "trimmed_error": (mean, se)},
        bounds={"lower": 0.0, "upper": bound},
        checks={
            "lower": bias >= -SE_SLACK * se,
            "upper": bias <= bound + SE_SLACK * se,
            "exact_within_bounds": -1e-12 <= exact_bias <= bound + 1e-12,
        },
        details={"n": n, "alpha": alpha, "true_error": r, "trimmed_true_error": target,
                 "exact_bias": exact_bias, "seed": seed},
        runtime=time.perf_counter() - t0,
        per_replication={"trimmed_error": vals},
    )


def verify_concentration(
    g: Classifier, spec: ContaminationSpec, n: int, alpha: float, reps: int, z: float, seed: int = 0
) -> ExperimentReport:
    """Compare deviation frequencies of ``R_{n,alpha}(g)`` with ``exp(-z)``.

    The threshold is ``sqrt(z / (2n(1-alpha)^2))`` and the mean is the exact
    binomial expectation. Requires ``reps >= 100 exp(z)``.
    """
    t0 = time.perf_counter()
    alpha = check_alpha(alpha)
    if not z > 0:
        raise ValueError("z must be positive")
    need = 100.0 * math.exp(z)
    if reps < need:
        raise ValueError(f"precondition violated: reps={reps} < 100*exp(z)={need:.0f}")
    r = true_error(g, spec)
    mean = expected_empirical_trimmed_error(r, n, alpha)
    t = math.sqrt(z / (2.0 * n * (1.0 - alpha) ** 2))
    vals = _trimmed_errors_mc(g, spec, n, alpha, reps, seed)
    upper = vals - mean >= t
    lower = mean - vals >= t
    level = math.exp(-z)
    se = math.sqrt(level * (1 - level) / reps)
    f_up, f_lo = float(upper.mean()), float(lower.mean())
    return ExperimentReport(
        name="concentration",
        replications=reps,
        measured={"upper_tail": (f_up, se), "lower_tail": (f_lo, se)},
        bounds={"exp_minus_z": level, "threshold": t},
        checks={"upper_tail": f_up <= level + SE_SLACK * se,
                "lower_tail": f_lo <= level + SE_SLACK * se},
        details={"n": n, "alpha": alpha, "z": z, "true_error": r, "expected_trimmed_error": mean, "seed": seed},
        runtime=time.perf_counter() - t0,
        per_replication={"trimmed_error": vals},
    )


def _map(fn, items, workers: int):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
    return [fn(it) for it in items]


class _SingleRep:
    def __init__(self, g, spec, n, cfg):
        self.g, self.spec, self.n, self.cfg = g, spec, n, cfg

    def __call__(self, child):
        s = generate(self.spec, self.n, seed=child).sample
        return select_alpha(s, self.g, self.cfg).alpha_hat


def verify_oracle_single(
    g: Classifier,
    spec: ContaminationSpec,
    n: int,
    cfg: SelectionConfig,
    reps: int,
    seed: int = 0,
    workers: int = 0,
) -> ExperimentReport:
    """Mean true trimmed error at the selected level against the oracle bound."""
    t0 = time.perf_counter()
    r = true_error(g, spec)
    children = np.random.SeedSequence(seed).spawn(reps)
    alphas = np.array(_map(_SingleRep(g, spec, n, cfg), children, workers))
    lhs = trimmed_error_array(r, alphas)
    mean, se = _mean_se(lhs)
    det = oracle_bound_single_details(r, n, cfg)
    levels, counts = np.unique(alphas, return_counts=True)
    return ExperimentReport(
        name="oracle-single",
        replications=reps,
        measured={"trimmed_error_at_selected": (mean, se), "alpha_hat": _mean_se(alphas)},
        bounds={"oracle": det["value"], "oracle_continuum": det["continuum_value"],
                "oracle_sqrt2n": det["value_sqrt2n"]},
        checks={"oracle": mean <= det["value"] + SE_SLACK * se,
                "oracle_continuum": mean <= det["continuum_value"] + SE_SLACK * se},
        details={"n": n, "true_error": r, "config": cfg.to_dict(), "seed": seed,
                 "alpha_hist": {repr(float(a)): int(c) for a, c in zip(levels, counts)}},
        runtime=time.perf_counter() - t0,
        per_replication={"alpha_hat": alphas, "trimmed_error_at_selected": lhs},
    )


class _JointRep:
    def __init__(self, fams, spec, n, cfg, warm_start):
        self.fams, self.spec, self.n, self.cfg, self.warm = fams, spec, n, cfg, warm_start

    def __call__(self, child):
        s = generate(self.spec, self.n, seed=child).sample
        res = select_alpha_model(s, self.fams, self.cfg, warm_start=self.warm)
        return res.alpha_hat, res.m_hat


def verify_oracle_joint(
    fams: Sequence[ModelFamily],
    spec: ContaminationSpec,
    n: int,
    cfg: SelectionConfig,
    reps: int,
    seed: int = 0,
    errs_true: Sequence[float] | None = None,
    warm_start: bool = True,
    workers: int = 0,
) -> ExperimentReport:
    """Mean true trimmed class error at the selected (alpha, m) against the
    joint oracle bound. ``errs_true`` defaults to :func:`class_min_error` for
    prefix families."""
    t0 = time.perf_counter()
    fams = sorted(fams, key=lambda f: f.index)
    if errs_true is None:
        errs_true = [class_min_error(spec, f.index) for f in fams]
    by_index = {f.index: e for f, e in zip(fams, errs_true)}
    children = np.random.SeedSequence(seed).spawn(reps)
    picks = _map(_JointRep(fams, spec, n, cfg, warm_start), children, workers)
    alphas = np.array([a for a, _ in picks])
    ms = np.array([m for _, m in picks])
    lhs = np.array([trimmed_error_closed_form(by_index[m], a) for a, m in picks])
    mean, se = _mean_se(lhs)
    det = oracle_bound_joint_details(fams, errs_true, n, cfg)
    hist: dict = {}
    for a, m in picks:
        key = f"{a!r},{m}"
        hist[key] = hist.get(key, 0) + 1
    return ExperimentReport(
        name="oracle-joint",
        replications=reps,
        measured={"trimmed_error_at_selected": (mean, se), "alpha_hat": _mean_se(alphas),
                  "m_hat": _mean_se(ms)},
        bounds={"oracle": det["value"]},
        checks={"oracle": mean <= det["value"] + SE_SLACK * se},
        details={"n": n, "class_errors": {str(k): v for k, v in by_index.items()},
                 "config": cfg.to_dict(), "seed": seed, "selection_hist": dict(sorted(hist.items())),
                 "m_hist": {str(int(k)): int(c) for k, c in zip(*np.unique(ms, return_counts=True))},
                 "bound_argmin": [det["argmin_alpha"], det["argmin_m"]]},
        runtime=time.perf_counter() - t0,
        per_replication={"alpha_hat": alphas, "m_hat": ms.astype(float), "trimmed_error_at_selected": lhs},
    )


def verify_threshold_property(errs: Sequence[float], alphas: Sequence[float]) -> ExperimentReport:
    """Trimmed Bayes error is zero exactly when the Bayes error is at most alpha."""
    t0 = time.perf_counter()
    failures = 0
    total = 0
    for e in errs:
        for a in alphas:
            total += 1
            if (trimmed_bayes_error(e, a) == 0.0) != (e <= a):
                failures += 1
    edge = [
        trimmed_bayes_error(0.2, 0.2) == 0.0,
        trimmed_bayes_error(0.2 + 1e-9, 0.2) > 0.0,
    ]
    return ExperimentReport(
        name="threshold",
        replications=total,
        measured={"failures": (float(failures), 0.0)},
        checks={"grid": failures == 0, "boundary_cases": all(edge)},
        details={"grid_points": total},
        runtime=time.perf_counter() - t0,
    )


def verify_lipschitz(
    ns: Sequence[int] = (10, 100, 1000), alpha_max: float = 0.25, err_points: int = 101, substeps: int = 11
) -> ExperimentReport:
    """Trimmed errors move by at most ``1/(n(1-alpha_max)^2)`` over a ``1/n`` step.

    For each ``n``, ``alpha_1`` runs over the selection grid and ``alpha_2``
    over ``substeps`` points of ``[alpha_1, min(alpha_1 + 1/n, alpha_max)]``.
    Population errors run over ``err_points`` values in ``[0, 1]``; empirical
    errors over ``j/n``.
    """
    from .selection import alpha_grid

    t0 = time.perf_counter()
    failures = {"population": 0, "empirical": 0}
    worst = 0.0
    checked = 0
    for n in ns:
        bound = lipschitz_alpha_bound(n, alpha_max)
        a1 = np.array(alpha_grid(n, alpha_max))
        steps = np.linspace(0.0, 1.0, substeps)
        a2 = np.minimum(a1[:, None] + steps[None, :] / n, alpha_max)
        a1b = np.broadcast_to(a1[:, None], a2.shape)
        for key, errs in (("population", np.linspace(0.0, 1.0, err_points)), ("empirical", np.arange(n + 1) / n)):
            e = errs[:, None, None]
            diff = trimmed_error_array(e, a1b[None]) - trimmed_error_array(e, a2[None])
            failures[key] += int(np.count_nonzero(diff > bound))
            worst = max(worst, float((diff / bound).max()))
            checked += diff.size
    return ExperimentReport(
        name="lipschitz",
        replications=checked,
        measured={"max_ratio_to_bound": (worst, 0.0)},
        checks={k: v == 0 for k, v in failures.items()},
        details={"ns": list(ns), "alpha_max": alpha_max, "failures": failures},
        runtime=time.perf_counter() - t0,
    )


def verify_equivalence(instances: int = 200, max_n: int = 200, seed: int = 0, decomposition_points: int = 20) -> ExperimentReport:
    """Polytope solver against the closed form on random instances, and the
    decomposition oracle against the closed form on a 4-d grid."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_poly = 0.0
    poly_checks = 0
    for _ in range(instances):
        n = int(rng.integers(1, max_n + 1))
        wrong = rng.random(n) < rng.random()
        err = int(wrong.sum()) / n
        for k in range(n):
            a = k / n
            val, _ = fill_weights(wrong, a)
            worst_poly = max(worst_poly, abs(val - trimmed_error_closed_form(err, a)))
            poly_checks += 1
    pts = decomposition_points
    p0s = np.linspace(0.5 / pts, 1 - 0.5 / pts, pts)
    qs = np.linspace(0.0, 1.0, pts)
    als = np.linspace(0.0, 0.95, pts)
    worst_dec = 0.0
    for p0 in p0s:
        for q00 in qs:
            for q11 in qs:
                mix = MixtureSpec(float(p0), float(q00), float(q11))
                e = mix.error
                for a in als:
                    d = trimmed_error_decomposition_oracle(mix, float(a))
                    worst_dec = max(worst_dec, abs(d - max(e - a, 0.0) / (1.0 - a)))
    return ExperimentReport(
        name="equivalence",
        replications=instances,
        measured={"polytope_max_abs_diff": (worst_poly, 0.0), "decomposition_max_abs_diff": (worst_dec, 0.0)},
        bounds={"polytope_tol": 1e-12, "decomposition_tol": 1e-9},
        checks={"polytope": worst_poly <= 1e-12, "decomposition": worst_dec <= 1e-9},
        details={"polytope_checks": poly_checks, "decomposition_checks": pts**4, "seed": seed},
        runtime=time.perf_counter() - t0,
    )


# default experiment settings used by the CLI suites and the acceptance tests

def bias_setup():
    """Two unit-variance Gaussians at distance 2 (Bayes error Phi(-1))."""
    spec = ContaminationSpec(TwoGaussians((-1.0,), (1.0,), 1.0, 0.5))
    g, _ = bayes_two_gaussians(spec.clean.mu0, spec.clean.mu1, 1.0, 0.5)
    return g, spec


def oracle_single_setup(target_error: float = 0.15):
    """1-d Gaussians placed so the Bayes rule has error ``target_error``."""
    delta = -float(norm.ppf(target_error))
    spec = ContaminationSpec(TwoGaussians((-delta,), (delta,), 1.0, 0.5))
    g, _ = bayes_two_gaussians(spec.clean.mu0, spec.clean.mu1, 1.0, 0.5)
    return g, spec


def oracle_joint_setup(p: int = 5, eps: float = 0.1, max_n_exact: int = 200, seed: int = 0):
    """Signal in the first two of ``p`` coordinates, ``eps`` label flips.

    Families ``m <= 3`` use exact trainers; larger ``m`` use warm-started
    stochastic search.
    """
    mu1 = (1.2, 0.8) + (0.0,) * (p - 2)
    mu0 = tuple(-v for v in mu1)
    spec = ContaminationSpec(TwoGaussians(mu0, mu1, 1.0, 0.5), eps=eps, outlier=LabelFlip())
    kinds = ["exact" if m <= 3 else "stochastic" for m in range(1, p + 1)]
    fams = prefix_families(p, p, kinds, max_n=max_n_exact, seed=seed, restarts=10)
    return fams, spec
