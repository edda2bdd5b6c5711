import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from trimclass.cli import dumps, main

FIXTURES = Path(__file__).parent / "fixtures"


def write_csv(path, X, y, header=None):
    X = np.atleast_2d(X)
    header = header or ["label"] + [f"x{j + 1}" for j in range(X.shape[1])]
    lines = [",".join(header)]
    lines += [",".join([str(int(lab))] + [repr(float(v)) for v in row]) for lab, row in zip(y, X)]
    Path(path).write_text("\n".join(lines) + "\n")
    return str(path)


def run_json(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_dumps_float_format():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(1.0) == "1.0"
    assert dumps([np.float64(0.5), np.int64(3), True, None]) == "[\n  0.5,\n  3,\n  true,\n  null\n]"
    with pytest.raises(ValueError):
        dumps(float("nan"))


@pytest.fixture
def ten_rows(tmp_path):
    x = np.arange(10, dtype=float)
    y = (x >= 5).astype(int)
    y[[0, 6, 8]] = 1 - y[[0, 6, 8]]  # three errors for the rule x >= 4.5
    return write_csv(tmp_path / "ten.csv", x[:, None], y)


def test_trim_error_ten_rows(ten_rows, tmp_path):
    code, doc = run_json(["trim-error", "--input", ten_rows, "--coef", "1", "--intercept", "-4.5",
                          "--alpha", "0.2", "--alpha-max", "0.3"], tmp_path)
    assert code == 0
    assert doc["empirical_error"] == pytest.approx(0.3)
    assert doc["trimmed_error"] == pytest.approx(0.125, abs=1e-15)
    assert doc["trace"][0]["alpha"] == 0.0
    assert doc["trace"][0]["trimmed_error"] == doc["empirical_error"]
    assert len(doc["trimmed_indices"]) == 2
    assert set(doc["trimmed_indices"]) <= {0, 6, 8}
    assert doc["config"]["seed"] == 0


def test_trim_error_perfect_classifier(tmp_path):
    x = np.linspace(-1, 1, 20)
    path = write_csv(tmp_path / "sep.csv", x[:, None], (x >= 0).astype(int))
    code, doc = run_json(["trim-error", "--input", path, "--trainer", "exact"], tmp_path)
    assert code == 0
    assert all(row["trimmed_error"] == 0.0 for row in doc["trace"])


def test_label_by_index_and_name(tmp_path):
    x = np.linspace(-1, 1, 12)
    y = (x >= 0).astype(int)
    path = tmp_path / "swap.csv"
    path.write_text("x1,target\n" + "\n".join(f"{float(v)!r},{lab}" for v, lab in zip(x, y)) + "\n")
    c1, d1 = run_json(["trim-error", "--input", str(path), "--label", "target"], tmp_path, "a.json")
    c2, d2 = run_json(["trim-error", "--input", str(path), "--label", "1"], tmp_path, "b.json")
    assert c1 == c2 == 0
    assert d1["empirical_error"] == d2["empirical_error"] == 0.0
    assert d1["feature_columns"] == ["x1"]


def test_malformed_csv(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("label,x1\n0,1.0\n1,abc\n")
    assert main(["trim-error", "--input", str(path)]) == 2
    assert "row 2" in capsys.readouterr().err
    path.write_text("label,x1\n0,1.0\n3,2.0\n")
    assert main(["trim-error", "--input", str(path)]) == 2
    assert "label outside" in capsys.readouterr().err


def test_missing_input_names_path(tmp_path, capsys):
    missing = str(tmp_path / "nowhere.csv")
    assert main(["select", "--input", missing]) == 2
    assert missing in capsys.readouterr().err


def test_select_clean_separable(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((40, 2))
    path = write_csv(tmp_path / "clean.csv", X, (X[:, 0] - X[:, 1] >= 0).astype(int))
    code, doc = run_json(["select", "--input", path, "--max-m", "2"], tmp_path)
    assert code == 0
    assert doc["alpha_hat"] == 0.0
    assert doc["trimmed_indices"] == []
    for key in ("deviation_sqrt_n", "deviation_sqrt_2n"):
        assert key in doc["diagnostics"]
    assert set(doc["penalty"]) >= {"trim_term", "vc_term", "total"}


def test_select_guard_suggests_stochastic(tmp_path, capsys):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((80, 2))
    path = write_csv(tmp_path / "big.csv", X, rng.integers(0, 2, 80))
    assert main(["select", "--input", path, "--max-m", "2"]) == 2
    assert "--trainer stochastic" in capsys.readouterr().err


def test_config_file_and_override(tmp_path):
    rng = np.random.default_rng(1)
    X = rng.standard_normal((30, 2))
    path = write_csv(tmp_path / "d.csv", X, (X[:, 0] >= 0).astype(int))
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalpha-max = 0.1\nmax_m = 1\nseed = 5\n")
    code, doc = run_json(["select", "--input", path, "--config", str(cfg)], tmp_path, "a.json")
    assert code == 0
    assert doc["config"]["alpha_max"] == 0.1 and doc["config"]["max_m"] == 1 and doc["seed"] == 5
    assert len(doc["trace"]) == 4
    code, doc = run_json(["select", "--input", path, "--config", str(cfg), "--seed", "9"], tmp_path, "b.json")
    assert doc["seed"] == 9 and doc["config"]["alpha_max"] == 0.1
    cfg.write_text("colour = blue\n")
    assert main(["select", "--input", path, "--config", str(cfg)]) == 2


def test_verify_threshold_and_bogus(tmp_path, capsys):
    code, doc = run_json(["verify", "--suite", "threshold"], tmp_path)
    assert code == 0 and doc["passed"]
    assert "PASS threshold:grid" in capsys.readouterr().out
    assert main(["verify", "--suite", "bogus"]) != 0
    assert "oracle-joint" in capsys.readouterr().err


def test_verify_writes_csv(tmp_path):
    code, _ = run_json(["verify", "--suite", "bias", "--reps", "5000", "--csv-dir", str(tmp_path / "t")], tmp_path)
    assert code == 0
    assert (tmp_path / "t" / "bias.csv").exists()


def test_simulate_reproduces_fixture(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = main([
        "simulate", "--n", "200", "--p", "2", "--mu0=-2,0", "--mu1", "2,0", "--eps", "0.15",
        "--outlier", "covariate_shift", "--mu-out", "6,0", "--sigma-out", "0.5",
        "--outlier-label", "0", "--seed", "20261016", "--out", "contaminated.csv",
    ])
    assert code == 0
    assert Path("contaminated.csv").read_bytes() == (FIXTURES / "contaminated.csv").read_bytes()
    assert Path("contaminated.outliers.json").read_bytes() == (FIXTURES / "contaminated.outliers.json").read_bytes()


def test_select_fixture_deterministic(tmp_path, monkeypatch):
    for name in ("contaminated.csv", "contaminated.cfg"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    monkeypatch.chdir(tmp_path)
    args = ["select", "--input", "contaminated.csv", "--config", "contaminated.cfg", "--out", "sel.json"]
    assert main(args) == 0
    first = Path("sel.json").read_bytes()
    assert main(args) == 0
    assert Path("sel.json").read_bytes() == first
    doc = json.loads(first)
    truth = json.loads((FIXTURES / "contaminated.outliers.json").read_text())["outlier_indices"]
    recall = len(set(truth) & set(doc["trimmed_indices"])) / len(truth)
    assert recall >= 0.8
    assert doc["alpha_hat"] >= 0.1
