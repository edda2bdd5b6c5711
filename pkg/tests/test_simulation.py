import math

import numpy as np
import pytest

from trimclass.classifiers import bayes_two_gaussians, linear_rule_error
from trimclass.selection import SelectionConfig
from trimclass.simulation import (
    ContaminationSpec,
    CovariateShift,
    ExperimentReport,
    LabelFlip,
    TwoGaussians,
    bias_setup,
    class_min_error,
    estimate_true_error,
    generate,
    oracle_single_setup,
    true_error,
    verify_bias_bound,
    verify_concentration,
    verify_oracle_single,
    verify_threshold_property,
)
from trimclass.types import LinearClassifier


def test_generate_is_seeded():
    spec = ContaminationSpec(TwoGaussians((-1.0, 0.0), (1.0, 0.0)), eps=0.2, outlier=LabelFlip(), seed=3)
    a, b = generate(spec, 100), generate(spec, 100)
    np.testing.assert_array_equal(a.sample.X, b.sample.X)
    np.testing.assert_array_equal(a.sample.y, b.sample.y)
    assert a.outliers == b.outliers
    c = generate(spec, 100, seed=4)
    assert not np.array_equal(a.sample.X, c.sample.X)


def test_eps_zero_has_no_outliers():
    spec = ContaminationSpec(TwoGaussians((-1.0,), (1.0,)), seed=1)
    assert len(generate(spec, 500).outliers) == 0


def test_outlier_fraction():
    spec = ContaminationSpec(TwoGaussians((-1.0,), (1.0,)), eps=0.3, outlier=LabelFlip(), seed=0)
    frac = len(generate(spec, 20_000).outliers) / 20_000
    assert abs(frac - 0.3) < 4 * math.sqrt(0.3 * 0.7 / 20_000)


def test_label_flip_error_formula():
    spec = ContaminationSpec(TwoGaussians((-1.0,), (1.0,)), eps=0.1, outlier=LabelFlip())
    g, bayes = bayes_two_gaussians((-1.0,), (1.0,), 1.0)
    assert true_error(g, spec) == pytest.approx(0.1 + 0.8 * bayes, rel=1e-12)
    est, se = estimate_true_error(g, spec, samples=400_000, seed=2)
    assert abs(est - true_error(g, spec)) <= 4 * se


def test_covariate_shift_error_closed_form_vs_sampling():
    spec = ContaminationSpec(
        TwoGaussians((-1.0, 0.0), (1.0, 0.0)), eps=0.15,
        outlier=CovariateShift((4.0, 1.0), 0.5, label=0),
    )
    g = LinearClassifier((1.0, 0.2), -0.1)
    est, se = estimate_true_error(g, spec, samples=400_000, seed=5)
    assert abs(est - true_error(g, spec)) <= 4 * se


def test_class_min_error_clean():
    spec = ContaminationSpec(TwoGaussians((-1.0, -1.0), (1.0, 1.0)))
    _, bayes = bayes_two_gaussians((-1.0, -1.0), (1.0, 1.0), 1.0)
    # first coordinate alone: Gaussians at distance 2
    _, first = bayes_two_gaussians((-1.0,), (1.0,), 1.0)
    assert class_min_error(spec, 2) == pytest.approx(bayes, abs=1e-9)
    assert class_min_error(spec, 1) == pytest.approx(first, abs=1e-9)


def test_class_min_error_covariate_shift_beats_bayes_rule():
    spec = ContaminationSpec(
        TwoGaussians((-1.0,), (1.0,)), eps=0.1, outlier=CovariateShift((5.0,), 1.0, label=0),
    )
    g, _ = bayes_two_gaussians((-1.0,), (1.0,), 1.0)
    assert class_min_error(spec, 1) <= true_error(g, spec) + 1e-9


def test_report_lines_and_csv(tmp_path):
    rep = ExperimentReport("demo", 2, checks={"a": np.True_, "b": False}, per_replication={"x": np.array([1.0, 2.0])})
    assert rep.lines() == ["PASS demo:a", "FAIL demo:b"]
    assert rep.passed is False
    path = tmp_path / "r.csv"
    rep.write_csv(path)
    rows = path.read_text().splitlines()
    assert rows[0].startswith("row_type")
    assert len(rows) == 1 + 2 + 2


def test_threshold_report():
    rep = verify_threshold_property(np.linspace(0, 0.99, 30), np.linspace(0, 0.99, 30))
    assert rep.passed and rep.replications == 900


def test_small_bias_run():
    g, spec = bias_setup()
    rep = verify_bias_bound(g, spec, 50, 0.1, 20_000, seed=1)
    assert rep.passed


def test_concentration_needs_enough_replications():
    g, spec = bias_setup()
    with pytest.raises(ValueError):
        verify_concentration(g, spec, 100, 0.1, 50, 1.0)


def test_oracle_single_setup_error():
    g, spec = oracle_single_setup(0.15)
    assert true_error(g, spec) == pytest.approx(0.15, abs=1e-12)
    rep = verify_oracle_single(g, spec, 200, SelectionConfig(200, 0.25), 50, seed=0)
    assert rep.passed
    assert linear_rule_error(g, spec.clean.mu0, spec.clean.mu1, 1.0) == pytest.approx(0.15, abs=1e-12)
