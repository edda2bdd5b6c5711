import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trimclass.classifiers import prefix_families
from trimclass.selection import (
    SelectionConfig,
    TrainerError,
    alpha_grid,
    continuum_infimum,
    oracle_bound_joint,
    oracle_bound_joint_details,
    oracle_bound_single,
    oracle_bound_single_details,
    pen_joint,
    pen_joint_terms,
    pen_single,
    select_alpha,
    select_alpha_model,
)
from trimclass.types import LabeledSample, LinearClassifier, ModelFamily


def family(m, p=5, trainer=None):
    return ModelFamily(m, m + 1, math.log(p), trainer or (lambda s: LinearClassifier.constant(1, 1)))


def test_grid():
    assert alpha_grid(10, 0.25) == (0.0, 0.1, 0.2)
    assert len(alpha_grid(200, 0.25)) == 51
    assert alpha_grid(200, 0.25)[-1] == 0.25
    assert SelectionConfig(200, 0.25).k0 == 50
    with pytest.raises(ValueError):
        SelectionConfig(1)


def test_penalties_frozen():
    # reference values from a 30-digit evaluation of the penalty formulas
    assert pen_single(0.1, 100) == pytest.approx(0.168603014376127372318, rel=1e-13)
    fam2 = ModelFamily(1, 2, 0.0, lambda s: None)
    assert pen_joint(0.0, fam2, 100) == pytest.approx(0.466756811261787528745, rel=1e-13)
    fam3 = ModelFamily(2, 3, math.log(5), lambda s: None)
    assert pen_joint(0.2, fam3, 100) == pytest.approx(0.696961790089104031941, rel=1e-13)
    t1, _ = pen_joint_terms(0.2, fam3, 100, log_variant="proof")
    assert t1 == pytest.approx(0.220520662815786377358, rel=1e-13)


@given(st.integers(2, 5000), st.floats(0.0, 0.5), st.floats(0.0, 0.5))
def test_penalties_increase_in_alpha(n, a1, a2):
    lo, hi = sorted((a1, a2))
    fam = family(2)
    if hi - lo > 1e-9:
        assert pen_single(hi, n) > pen_single(lo, n)
        assert pen_joint(hi, fam, n) > pen_joint(lo, fam, n)


def toy_sample(n=40, flips=6, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 2))
    y = (X[:, 0] >= 0).astype(int)
    y[:flips] = 1 - y[:flips]
    return LabeledSample(X, y)


def test_select_alpha_trace_and_optimality():
    s = toy_sample()
    g = LinearClassifier((1.0,), 0.0)
    cfg = SelectionConfig(s.n, 0.25)
    res = select_alpha(s, g, cfg)
    assert len(res.trace) == math.floor(s.n * 0.25) + 1
    for row in res.trace:
        assert row["objective"] == row["trimmed_error"] + row["penalty"]
    assert all(res.objective <= row["objective"] for row in res.trace)
    # the six flipped labels are the only errors; trimming removes them
    assert res.alpha_hat == pytest.approx(6 / 40)
    assert set(res.trimmed_indices) == set(range(6))


def test_clean_sample_selects_zero():
    s = toy_sample(flips=0)
    res = select_alpha(s, LinearClassifier((1.0,), 0.0), SelectionConfig(s.n))
    assert res.alpha_hat == 0.0
    assert res.trimmed_indices == ()


def test_identical_families_tie_to_smallest_m():
    s = toy_sample()
    g = LinearClassifier((1.0,), 0.0)
    fams = [ModelFamily(m, 2, math.log(3), lambda s, g=g: g) for m in (3, 1, 2)]
    res = select_alpha_model(s, fams, SelectionConfig(s.n))
    assert res.m_hat == 1


def test_joint_selection_objective_optimal():
    s = toy_sample(n=50, flips=5, seed=3)
    fams = prefix_families(2, 2, "exact")
    res = select_alpha_model(s, fams, SelectionConfig(s.n))
    best = min(row["objective"] for row in res.trace)
    assert res.objective == best
    first = next(row for row in res.trace if row["objective"] == best)
    assert (first["alpha"], first["m"]) == (res.alpha_hat, res.m_hat)
    for row in res.trace:
        assert row["objective"] == row["trimmed_error"] + (row["penalty_trim"] + row["penalty_vc"])


def test_trainer_failure_names_family():
    def broken(s):
        raise RuntimeError("boom")

    s = toy_sample()
    with pytest.raises(TrainerError, match="m=2"):
        select_alpha_model(s, [family(1), ModelFamily(2, 3, math.log(5), broken)], SelectionConfig(s.n))


def test_oracle_single_frozen():
    cfg100 = SelectionConfig(100, 0.25)
    expected = pen_single(0.0, 100) + (1 / 0.75) * math.sqrt(2 * math.pi / 100) + 1 / (100 * 0.5625)
    assert oracle_bound_single(0.0, 100, cfg100) == pytest.approx(expected, rel=1e-13)
    assert oracle_bound_single(0.0, 100, cfg100) == pytest.approx(0.503737594000425813186, rel=1e-13)
    cfg200 = SelectionConfig(200, 0.25)
    assert oracle_bound_single(0.15, 200, cfg200) == pytest.approx(0.412835479039420309272, rel=1e-13)
    assert oracle_bound_single(0.3, 100, cfg100) > 0


def test_oracle_single_details():
    d = oracle_bound_single_details(0.15, 200, SelectionConfig(200, 0.25))
    assert d["value"] == oracle_bound_single(0.15, 200, SelectionConfig(200, 0.25))
    assert d["continuum_value"] <= d["value"]


@given(st.floats(0.0, 1.0), st.floats(0.0, 0.5), st.floats(0.0, 1.0))
def test_continuum_infimum_matches_scan(r, am, coef):
    a = np.linspace(0.0, am, 2001)
    f = (np.maximum(r - a, 0.0) + coef) / (1.0 - a)
    assert continuum_infimum(r, am, coef) <= f.min() + 1e-12
    assert continuum_infimum(r, am, coef) >= f.min() - 1e-3


def test_oracle_joint_frozen():
    cfg = SelectionConfig(200, 0.25)
    fams = [family(m) for m in (1, 2, 3)]
    assert oracle_bound_joint(fams, [0.3, 0.2, 0.2], 200, cfg) == pytest.approx(
        0.679424352296518536007, rel=1e-13
    )
    d = oracle_bound_joint_details(fams, [0.3, 0.2, 0.2], 200, cfg)
    assert d["tail"] == pytest.approx(
        (2 / 1.5) * math.sqrt(math.pi / 400) + 1 / (200 * 0.5625), rel=1e-13
    )
    tail100 = oracle_bound_joint_details(fams, [0.0] * 3, 100, SelectionConfig(100, 0.25))["tail"]
    assert tail100 == pytest.approx(0.184886329419844477939, rel=1e-13)
    zero = oracle_bound_joint(fams, [0.0] * 3, 100, SelectionConfig(100, 0.25))
    assert zero == pytest.approx(min(pen_joint(0.0, f, 100) for f in fams) + tail100, rel=1e-13)
    with pytest.raises(ValueError):
        oracle_bound_joint(fams, [0.1], 200, cfg)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_select_alpha_matches_exhaustive_recheck(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 80))
    X = rng.standard_normal((n, 1))
    y = rng.integers(0, 2, n)
    s = LabeledSample(X, y)
    g = LinearClassifier((1.0,), float(rng.normal()))
    cfg = SelectionConfig(n, 0.3)
    res = select_alpha(s, g, cfg)
    err = float(np.mean(g.predict(X) != y))
    objs = [max(err - a, 0) / (1 - a) + pen_single(a, n) for a in cfg.grid]
    assert res.alpha_hat == cfg.grid[int(np.argmin(objs))]


def test_first_addend_with_log_p_weight():
    fam = ModelFamily(1, 2, math.log(10), lambda s: None)
    t1, _ = pen_joint_terms(0.0, fam, 100)
    assert t1 == pytest.approx(math.sqrt(math.log(1000) / 200), rel=1e-14)
