import os
import subprocess
import sys

import numpy as np
import pytest

from meanking import _kernels

pytestmark = pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not installed")

DIMS = [3, 5, 7, 11]


def both(fn, *args):
    out = {}
    for name in ("numba", "numpy"):
        prev = _kernels.set_backend(name)
        try:
            out[name] = fn(*args)
        finally:
            _kernels.set_backend(prev)
    return out["numba"], out["numpy"]


@pytest.mark.parametrize("d", DIMS)
def test_mub_table(d):
    a, b = both(_kernels.mub_table, d)
    assert a.shape == (d + 1, d, d)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("d", DIMS)
def test_line_table(d):
    a, b = both(_kernels.line_table, d)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("d", DIMS)
def test_incidence_table(d):
    a, b = both(_kernels.incidence_table, d)
    assert a.dtype == b.dtype == np.int64
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("d", DIMS)
def test_point_table(d):
    mub = _kernels.mub_table(d)
    a, b = both(_kernels.point_table, mub)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_overlap_probabilities(d):
    P = _kernels.point_table(_kernels.mub_table(d))
    L = _kernels.line_table(d)
    a, b = both(_kernels.overlap_probabilities, P, L)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("d", [3, 5, 7])
@pytest.mark.parametrize("seed", [0, 1])
def test_branch_probabilities(d, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    psi /= np.linalg.norm(psi)
    basis = _kernels.mub_table(d)[1 + seed]
    a, b = both(_kernels.branch_probabilities, psi, basis, _kernels.line_table(d))
    np.testing.assert_allclose(a, b, atol=1e-13)
    assert a.sum() == pytest.approx(1.0)


def test_set_backend_validates():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")
    assert _kernels.set_backend(_kernels.BACKEND) in ("numba", "numpy")


def test_env_flag_selects_numpy():
    env = dict(os.environ, MEANKING_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from meanking import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
