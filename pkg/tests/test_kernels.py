import os
import subprocess
import sys

import numpy as np
import pytest

from trimclass import _pykernels, kernels

try:
    from trimclass import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def instance(seed, n, m):
    rng = np.random.default_rng(seed)
    X = np.ascontiguousarray(rng.standard_normal((n, m)))
    y = rng.integers(0, 2, n).astype(np.int8)
    return X, y


@needs_ext
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("seed", range(8))
def test_backends_agree(m, seed):
    X, y = instance(seed, 25 + 3 * seed, m)
    init = min(int(y.sum()), y.size - int(y.sum()))
    assert _ckernels.best_hyperplane(X, y, m, init) == _pykernels.best_hyperplane(X, y, m, init)


@needs_ext
def test_backends_agree_when_nothing_improves():
    X, y = instance(0, 12, 2)
    assert _ckernels.best_hyperplane(X, y, 2, 0) == _pykernels.best_hyperplane(X, y, 2, 0)
    assert _pykernels.best_hyperplane(X, y, 2, 0) == (0, None, 0)


def test_default_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")
    forced = os.environ.get("TRIMCLASS_PURE_PYTHON", "") not in ("", "0")
    if _ckernels is not None and not forced:
        assert kernels.BACKEND == "cython"


def test_fallback_selected_by_environment():
    env = dict(os.environ, TRIMCLASS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import trimclass.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
