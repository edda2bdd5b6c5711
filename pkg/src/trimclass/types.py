"""Domain types shared across the package.

Everything here is immutable after construction; constructors validate and
raise ``ValueError`` on any invariant violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

WEIGHT_SUM_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def check_alpha(alpha: float, name: str = "alpha") -> float:
    """Return ``alpha`` as a float after checking ``0 <= alpha < 1``."""
    alpha = float(alpha)
    if not (0.0 <= alpha < 1.0) or math.isnan(alpha):
        raise ValueError(f"{name} must lie in [0, 1), got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class LabeledSample:
    """Training set of (label, feature vector) pairs.

    ``X`` has shape ``(n, p)``; ``y`` holds integer labels in {0, 1}. Index
    ``i`` always refers to the same observation.
    """

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2:
            raise ValueError("features must be a 2-d array (n, p)")
        n = X.shape[0]
        if n < 1:
            raise ValueError("empty sample")
        if X.shape[1] < 1:
            raise ValueError("feature dimension must be at least 1")
        if y.shape != (n,):
            raise ValueError(f"expected {n} labels, got shape {y.shape}")
        bad = np.flatnonzero((y != 0) & (y != 1))
        if bad.size:
            raise ValueError(f"label outside {{0,1}} at row {bad[0]}")
        nonfinite = np.flatnonzero(~np.isfinite(X).all(axis=1))
        if nonfinite.size:
            raise ValueError(f"non-finite feature value at row {nonfinite[0]}")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y.astype(np.int64)))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> tuple[int, np.ndarray]:
        return int(self.y[i]), self.X[i]


def validate_sample(rows: Sequence[tuple[int, Sequence[float]]]) -> LabeledSample:
    """Build a :class:`LabeledSample` from ``(label, vector)`` rows.

    Errors name the offending row index. Order is preserved.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("empty input: at least one row is required")
    p = None
    labels = []
    feats = []
    for i, row in enumerate(rows):
        try:
            label, vec = row
        except (TypeError, ValueError):
            raise ValueError(f"row {i} is not a (label, vector) pair") from None
        if isinstance(label, bool) or label not in (0, 1):
            raise ValueError(f"label outside {{0,1}} at row {i}: {label!r}")
        vec = np.asarray(vec, dtype=float).ravel()
        if p is None:
            p = vec.size
            if p == 0:
                raise ValueError("row 0 has an empty feature vector")
        elif vec.size != p:
            raise ValueError(f"dimension mismatch at row {i}: expected {p}, got {vec.size}")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"non-finite feature value at row {i}")
        labels.append(int(label))
        feats.append(vec)
    return LabeledSample(np.vstack(feats), np.array(labels, dtype=np.int64))


class Classifier:
    """A deterministic map from feature vectors to {0, 1}.

    Subclasses implement :meth:`predict` on a 2-d array of rows.
    """

    def predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": type(self).__name__}

    def __call__(self, x) -> int:
        return int(self.predict(np.atleast_2d(np.asarray(x, dtype=float)))[0])


@dataclass(frozen=True)
class LinearClassifier(Classifier):
    """``g(x) = 1`` iff ``a . x[:m] + b >= 0`` with ``m = len(a)``.

    Points exactly on the boundary are labelled 1.
    """

    a: tuple
    b: float

    def __post_init__(self):
        a = tuple(float(v) for v in np.atleast_1d(np.asarray(self.a, dtype=float)))
        if not a:
            raise ValueError("coefficient vector must be nonempty")
        if not all(math.isfinite(v) for v in a) or not math.isfinite(float(self.b)):
            raise ValueError("classifier coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))

    @property
    def m(self) -> int:
        return len(self.a)

    def scores(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] < self.m:
            raise ValueError(f"classifier uses {self.m} coordinates, input has {X.shape[1]}")
        return X[:, : self.m] @ np.asarray(self.a) + self.b

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.scores(X) >= 0.0).astype(np.int64)

    @property
    def is_constant(self) -> bool:
        return all(v == 0.0 for v in self.a)

    def describe(self) -> dict:
        return {"kind": "linear", "m": self.m, "a": list(self.a), "b": self.b}

    @classmethod
    def constant(cls, label: int, m: int = 1) -> "LinearClassifier":
        """The classifier that always outputs ``label``."""
        if label not in (0, 1):
            raise ValueError("label outside {0,1}")
        return cls((0.0,) * m, 0.0 if label == 1 else -1.0)


@dataclass(frozen=True)
class FunctionClassifier(Classifier):
    """Wraps a plain Python callable ``x -> {0, 1}``."""

    decide: Callable[[np.ndarray], int]
    descriptor: Mapping = field(default_factory=dict)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.fromiter((int(self.decide(row)) for row in X), dtype=np.int64, count=X.shape[0])
        if np.any((out != 0) & (out != 1)):
            raise ValueError("decision function returned a value outside {0,1}")
        return out

    def describe(self) -> dict:
        return {"kind": "function", **dict(self.descriptor)}


@dataclass(frozen=True)
class TrimWeights:
    """Weights in the trimming polytope for level ``alpha``.

    ``0 <= w_i <= 1/(n(1-alpha))`` and ``sum(w) == 1`` up to 1e-12.
    """

    weights: np.ndarray
    alpha: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        alpha = check_alpha(self.alpha)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-d vector")
        cap = self.cap_for(w.size, alpha)
        if np.any(w < 0.0) or np.any(w > cap * (1 + 1e-12)):
            raise ValueError("weights violate 0 <= w_i <= 1/(n(1-alpha))")
        if abs(math.fsum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {math.fsum(w)!r}, not 1")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "alpha", alpha)

    @staticmethod
    def cap_for(n: int, alpha: float) -> float:
        return 1.0 / (n * (1.0 - alpha))

    @property
    def cap(self) -> float:
        return self.cap_for(self.weights.size, self.alpha)


@dataclass(frozen=True)
class ModelFamily:
    """A class of classifiers with its VC dimension and complexity weight.

    ``trainer`` maps a :class:`LabeledSample` to a :class:`Classifier`
    minimising the empirical error within the class.
    """

    index: int
    vc_dim: int
    weight: float
    trainer: Callable[[LabeledSample], Classifier] = field(compare=False, repr=False)
    name: str = ""

    def __post_init__(self):
        if int(self.index) != self.index or self.index < 1:
            raise ValueError("family index must be a positive integer")
        if int(self.vc_dim) != self.vc_dim or self.vc_dim < 1:
            raise ValueError("vc_dim must be a positive integer")
        if not (self.weight >= 0.0) or not math.isfinite(self.weight):
            raise ValueError("family weight x_m must be finite and nonnegative")


def check_family_weights(families: Sequence[ModelFamily], sigma: float) -> float:
    """Check ``sum_m exp(-x_m) <= sigma`` and return the sum."""
    if not families:
        raise ValueError("at least one model family is required")
    total = math.fsum(math.exp(-f.weight) for f in families)
    if total > sigma * (1 + 1e-12):
        raise ValueError(f"sum of exp(-x_m) = {total!r} exceeds sigma = {sigma!r}")
    indices = [f.index for f in families]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate family index")
    return total


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a penalised trimming-level (and model) selection."""

    alpha_hat: float
    m_hat: int | None
    classifier: Classifier
    trimmed_indices: tuple
    partially_trimmed: tuple
    objective: float
    diagnostics: Mapping[str, float]
    trace: tuple = ()

    def to_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "m_hat": self.m_hat,
            "classifier": self.classifier.describe(),
            "trimmed_indices": list(self.trimmed_indices),
            "partially_trimmed": list(self.partially_trimmed),
            "objective": self.objective,
            "diagnostics": dict(self.diagnostics),
            "trace": [dict(row) for row in self.trace],
        }
