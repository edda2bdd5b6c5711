"""Command-line interface.

Subcommands: ``trim-error``, ``select``, ``verify`` and ``simulate``.

Input CSV files carry a header row. The label column is chosen by name or
zero-based index; every other column is a feature, in file order. Column
order matters: the model ``G_m`` uses the first ``m`` feature columns.

Exit codes: 0 success, 1 failed assertion, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classifiers import InstanceTooLarge, LinearPrefixFamily, prefix_families, EXACT_MAX_N
from .selection import (
    SelectionConfig,
    TrainerError,
    alpha_grid,
    select_alpha_model,
)
from .simulation import (
    ContaminationSpec,
    CovariateShift,
    LabelFlip,
    TwoGaussians,
    bias_setup,
    generate,
    oracle_joint_setup,
    oracle_single_setup,
    verify_bias_bound,
    verify_concentration,
    verify_equivalence,
    verify_lipschitz,
    verify_oracle_joint,
    verify_oracle_single,
    verify_threshold_property,
)
from .trimmed_error import (
    empirical_error,
    fill_weights,
    misclassified,
    trimmed_error_closed_form,
    trimmed_sets,
)
from .types import LabeledSample, LinearClassifier

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("bias", "concentration", "lipschitz", "threshold", "oracle-single", "oracle-joint", "equivalence")


class InputError(Exception):
    """Bad input file or option; reported with exit code 2."""


# ---------------------------------------------------------------- JSON output

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _write_json(doc: dict, out: str | None) -> None:
    text = dumps(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_trace_csv(rows, path: str) -> None:
    if not rows:
        return
    cols = list(rows[0])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            w.writerow([_fmt_float(v) if isinstance(v, float) else v for v in (row[c] for c in cols)])


# ---------------------------------------------------------------- CSV input

def read_sample(path: str, label: str | None = None) -> tuple[LabeledSample, list[str], str]:
    """Load a labelled sample; returns the sample, feature names and label name."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    with p.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if label is None or label == "":
        li = 0
    elif label in header:
        li = header.index(label)
    else:
        try:
            li = int(label)
        except ValueError:
            raise InputError(f"{path}: no label column named {label!r}") from None
        if not 0 <= li < len(header):
            raise InputError(f"{path}: label column index {li} out of range")
    if len(header) < 2:
        raise InputError(f"{path}: need a label column and at least one feature column")
    feats = [h for i, h in enumerate(header) if i != li]
    X, y = [], []
    for r, row in enumerate(rows[1:], start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise InputError(f"{path}: row {r} has {len(row)} fields, expected {len(header)}")
        try:
            lab = float(row[li])
            vals = [float(c) for i, c in enumerate(row) if i != li]
        except ValueError as exc:
            raise InputError(f"{path}: row {r}: {exc}") from None
        if lab not in (0.0, 1.0):
            raise InputError(f"{path}: row {r}: label outside {{0,1}}: {row[li]!r}")
        if not all(math.isfinite(v) for v in vals):
            raise InputError(f"{path}: row {r}: non-finite feature value")
        y.append(int(lab))
        X.append(vals)
    if not X:
        raise InputError(f"{path}: no data rows")
    return LabeledSample(np.array(X), np.array(y)), feats, header[li]


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------- commands

def _families(args, p: int):
    max_m = args.max_m or p
    if not 1 <= max_m <= p:
        raise InputError(f"--max-m must lie in [1, {p}]")
    return prefix_families(p, max_m, args.trainer, seed=args.seed, max_n=args.exact_max_n)


def _resolved(args) -> dict:
    keep = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return dict(sorted(keep.items()))


def cmd_trim_error(args) -> int:
    s, feats, label = read_sample(args.input, args.label)
    if args.coef:
        a = _floats(args.coef)
        if len(a) > s.p:
            raise InputError(f"--coef has {len(a)} entries but the data have {s.p} features")
        g = LinearClassifier(a, args.intercept)
    else:
        m = args.max_m or s.p
        g = LinearPrefixFamily(m, s.p, args.trainer, seed=args.seed, max_n=args.exact_max_n).fit(s)
    err = empirical_error(s, g)
    grid = alpha_grid(s.n, args.alpha_max)
    trace = [{"alpha": a, "trimmed_error": trimmed_error_closed_form(err, a)} for a in grid]
    alpha = args.alpha_max if args.alpha is None else args.alpha
    wrong = misclassified(s, g)
    value, weights = fill_weights(wrong, alpha)
    trimmed, partial = trimmed_sets(weights, wrong)
    doc = {
        "command": "trim-error",
        "version": __version__,
        "config": _resolved(args),
        "n": s.n,
        "p": s.p,
        "label_column": label,
        "feature_columns": feats,
        "classifier": g.describe(),
        "empirical_error": err,
        "alpha": alpha,
        "trimmed_error": value,
        "trimmed_indices": list(trimmed),
        "partially_trimmed": list(partial),
        "trace": trace,
    }
    _write_json(doc, args.out)
    if args.trace_csv:
        _write_trace_csv(trace, args.trace_csv)
    print(f"R_n = {err:.6g}; trimmed error at alpha={alpha:g}: {value:.6g}; "
          f"{len(trimmed)} trimmed", file=sys.stderr)
    return EXIT_OK


def cmd_select(args) -> int:
    s, feats, label = read_sample(args.input, args.label)
    cfg = SelectionConfig(s.n, args.alpha_max, sigma=1.0)
    fams = _families(args, s.p)
    try:
        res = select_alpha_model(s, fams, cfg, warm_start=True)
    except TrainerError as exc:
        if isinstance(exc.__cause__, InstanceTooLarge):
            raise InputError(f"{exc}; use --trainer stochastic for this sample size") from None
        raise
    d = res.diagnostics
    r = d["empirical_error"]
    k = 1.0 - res.alpha_hat
    diagnostics = dict(d)
    diagnostics["deviation_sqrt_n"] = math.sqrt(r) / (math.sqrt(s.n) * k)
    diagnostics["deviation_sqrt_2n"] = math.sqrt(r) / (math.sqrt(2 * s.n) * k)
    doc = {
        "command": "select",
        "version": __version__,
        "config": _resolved(args),
        "seed": args.seed,
        "n": s.n,
        "p": s.p,
        "label_column": label,
        "feature_columns": feats,
        "selection_config": cfg.to_dict(),
        "alpha_hat": res.alpha_hat,
        "m_hat": res.m_hat,
        "classifier": res.classifier.describe(),
        "objective": res.objective,
        "trimmed_indices": list(res.trimmed_indices),
        "partially_trimmed": list(res.partially_trimmed),
        "penalty": {"trim_term": d["penalty_trim"], "vc_term": d["penalty_vc"], "total": d["penalty"],
                    "trim_term_with_ln_n_plus_1": d["penalty_trim_proof_log"]},
        "diagnostics": diagnostics,
        "notes": ["penalty trim term uses ln(n); the ln(n+1) variant is reported alongside"],
        "trace": [dict(row) for row in res.trace],
    }
    _write_json(doc, args.out)
    if args.trace_csv:
        _write_trace_csv(list(res.trace), args.trace_csv)
    print(f"alpha_hat = {res.alpha_hat:g}, m_hat = {res.m_hat}, "
          f"{len(res.trimmed_indices)} trimmed", file=sys.stderr)
    return EXIT_OK


def _run_suite(name: str, args):
    seed = args.seed
    reps = args.reps
    if name == "bias":
        g, spec = bias_setup()
        return verify_bias_bound(g, spec, 50, 0.1, reps or 100_000, seed=seed)
    if name == "concentration":
        g, spec = bias_setup()
        return verify_concentration(g, spec, 100, 0.1, reps or 100_000, 1.0, seed=seed)
    if name == "lipschitz":
        return verify_lipschitz((10, 100, 1000), args.alpha_max)
    if name == "threshold":
        grid = np.linspace(0.0, 0.99, 100)
        return verify_threshold_property(grid, grid)
    if name == "oracle-single":
        g, spec = oracle_single_setup(0.15)
        cfg = SelectionConfig(200, args.alpha_max)
        return verify_oracle_single(g, spec, 200, cfg, reps or 500, seed=seed, workers=args.workers)
    if name == "oracle-joint":
        fams, spec = oracle_joint_setup(seed=seed)
        cfg = SelectionConfig(200, args.alpha_max)
        return verify_oracle_joint(fams, spec, 200, cfg, reps or 300, seed=seed, workers=args.workers)
    if name == "equivalence":
        return verify_equivalence(seed=seed)
    raise InputError(f"unknown suite {name!r}; available: {', '.join(SUITES + ('all',))}")


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; available: {', '.join(SUITES + ('all',))}")
    reports = []
    for name in names:
        rep = _run_suite(name, args)
        reports.append(rep)
        for line in rep.lines():
            print(line)
        if args.csv_dir:
            Path(args.csv_dir).mkdir(parents=True, exist_ok=True)
            rep.write_csv(Path(args.csv_dir) / f"{name}.csv")
    doc = {
        "command": "verify",
        "version": __version__,
        "config": _resolved(args),
        "reports": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    _write_json(doc, args.out)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_simulate(args) -> int:
    p = args.p
    mu1 = _floats(args.mu1) if args.mu1 else [args.separation / 2] + [0.0] * (p - 1)
    mu0 = _floats(args.mu0) if args.mu0 else [-v for v in mu1]
    if len(mu0) != p or len(mu1) != p:
        raise InputError(f"class means must have {p} entries")
    if args.outlier == "label_flip":
        outlier = LabelFlip()
    else:
        mu_out = _floats(args.mu_out) if args.mu_out else [3.0 * v for v in mu1]
        if len(mu_out) != p:
            raise InputError(f"--mu-out must have {p} entries")
        outlier = CovariateShift(mu_out, args.sigma_out, args.outlier_label)
    spec = ContaminationSpec(TwoGaussians(mu0, mu1, args.sigma, args.p0), args.eps, outlier, args.seed)
    draw = generate(spec, args.n)
    if not args.out:
        raise InputError("simulate needs --out for the CSV file")
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label"] + [f"x{j + 1}" for j in range(p)])
        for (lab, x) in zip(draw.sample.y, draw.sample.X):
            w.writerow([int(lab)] + [_fmt_float(float(v)) for v in x])
    truth = {
        "command": "simulate",
        "version": __version__,
        "config": _resolved(args),
        "spec": spec.to_dict(),
        "n": args.n,
        "outlier_indices": list(draw.outliers),
    }
    out.with_suffix(".outliers.json").write_text(dumps(truth) + "\n")
    print(f"wrote {args.n} rows ({len(draw.outliers)} outliers) to {out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _outlier_label(text):
    if text in (None, "", "none", "None"):
        return None
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("outlier label must be 0, 1 or none")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trimclass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value file; command-line flags take precedence")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (JSON; CSV for simulate)")
        return sp

    def data_opts(sp):
        sp.add_argument("--input", required=False, help="CSV file with a header row")
        sp.add_argument("--label", default=None, help="label column name or zero-based index (default 0)")
        sp.add_argument("--alpha-max", type=float, default=0.25)
        sp.add_argument("--max-m", type=int, default=None, help="largest prefix dimension (default p)")
        sp.add_argument("--trainer", choices=("exact", "stochastic"), default="exact")
        sp.add_argument("--exact-max-n", type=int, default=EXACT_MAX_N,
                        help="sample-size guard for exact enumeration with m >= 2")
        sp.add_argument("--trace-csv", help="also write the objective trace as CSV")

    sp = common(sub.add_parser("trim-error", help="empirical trimmed errors of one classifier"))
    data_opts(sp)
    sp.add_argument("--coef", help="comma-separated coefficients a (uses the first len(a) features)")
    sp.add_argument("--intercept", type=float, default=0.0)
    sp.add_argument("--alpha", type=float, default=None, help="level for the trimmed index set (default alpha-max)")
    sp.set_defaults(func=cmd_trim_error)

    sp = common(sub.add_parser("select", help="penalised choice of trimming level and model"))
    data_opts(sp)
    sp.set_defaults(func=cmd_select)

    sp = common(sub.add_parser("verify", help="run a verification suite"))
    sp.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, all")
    sp.add_argument("--reps", type=int, default=None, help="Monte Carlo replications")
    sp.add_argument("--alpha-max", type=float, default=0.25)
    sp.add_argument("--workers", type=int, default=0, help="processes for the oracle suites")
    sp.add_argument("--csv-dir", help="directory for per-suite CSV tables")
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("simulate", help="draw a contaminated two-Gaussian dataset"))
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--mu0", help="class-0 mean, comma-separated")
    sp.add_argument("--mu1", help="class-1 mean, comma-separated")
    sp.add_argument("--separation", type=float, default=2.0, help="mean distance along x1 if means not given")
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--p0", type=float, default=0.5)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--outlier", choices=("label_flip", "covariate_shift"), default="label_flip")
    sp.add_argument("--mu-out", help="outlier mean, comma-separated")
    sp.add_argument("--sigma-out", type=float, default=1.0)
    sp.add_argument("--outlier-label", type=_outlier_label, default=None)
    sp.set_defaults(func=cmd_simulate)
    return parser


def load_config(path: str) -> dict:
    """Read ``key = value`` lines (``#`` comments allowed, no sections)."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"config file not found: {path}")
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + p.read_text())
    except configparser.Error as exc:
        raise InputError(f"{path}: {exc}") from None
    return {k.strip().lstrip("-").replace("-", "_"): v.strip() for k, v in cp["run"].items()}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            values = load_config(args.config)
            sp = parser._subparsers._group_actions[0].choices[args.command]
            known = {a.dest for a in sp._actions}
            unknown = sorted(set(values) - known)
            if unknown:
                raise InputError(f"{args.config}: unknown keys {', '.join(unknown)}")
            sp.set_defaults(**values)
            args = parser.parse_args(argv)
        if args.command in ("trim-error", "select") and not args.input:
            raise InputError("--input is required")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TrainerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
