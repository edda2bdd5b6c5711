"""Robust classification by trimming.

Trimmed empirical errors, the penalised choice of trimming level and model,
halfspace trainers and a Monte Carlo harness for checking the bounds.
"""
__version__ = "0.1.0"

from .types import (
    Classifier,
    FunctionClassifier,
    LabeledSample,
    LinearClassifier,
    ModelFamily,
    SelectionResult,
    TrimWeights,
    validate_sample,
)
from .trimmed_error import (
    bias_bound,
    empirical_error,
    empirical_trimmed_error_polytope,
    lipschitz_alpha_bound,
    trimmed_bayes_error,
    trimmed_error_closed_form,
)
from .selection import (
    SelectionConfig,
    alpha_grid,
    oracle_bound_joint,
    oracle_bound_single,
    pen_joint,
    pen_single,
    select_alpha,
    select_alpha_model,
)
from .classifiers import LinearPrefixFamily, bayes_two_gaussians, prefix_families, train
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "Classifier",
    "FunctionClassifier",
    "LabeledSample",
    "LinearClassifier",
    "LinearPrefixFamily",
    "ModelFamily",
    "SelectionConfig",
    "SelectionResult",
    "TrimWeights",
    "alpha_grid",
    "bayes_two_gaussians",
    "bias_bound",
    "empirical_error",
    "empirical_trimmed_error_polytope",
    "lipschitz_alpha_bound",
    "oracle_bound_joint",
    "oracle_bound_single",
    "pen_joint",
    "pen_single",
    "prefix_families",
    "select_alpha",
    "select_alpha_model",
    "train",
    "trimmed_bayes_error",
    "trimmed_error_closed_form",
    "validate_sample",
]
