import math

import numpy as np
import pytest

from curvpend import _pykernels, kernels

CASES = [
    ("rigid_leapfrog", (1.0, 0.0, 1.0, 1.0, 1e-3, 5000, 7)),
    ("rigid_rk4", (1.0, 0.3, 1.3, -0.7, 1e-3, 5000, 7)),
    ("elastic_rk4", (0.5, 0.01, 0.2, 0.0, 1.0, 1.0, 1.0, 10.0, 1e-3, 5000, 7)),
    ("elastic_rk4", (0.5, 0.01, 0.2, 0.1, 1.2, -2.0, 0.5, 40.0, 1e-3, 5000, 7)),
]


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
def test_backends_agree_on_hyperbolic_runaway():
    # weak spring at K < 0: the rod stretches until sinh overflows
    args = (0.5, 0.01, 0.2, 0.1, 1.2, -2.0, 0.5, 4.0, 1e-3, 20000, 7)
    s_py, y_py, ok_py = kernels.python.elastic_rk4(*args)
    s_c, y_c, ok_c = kernels.compiled.elastic_rk4(*args)
    assert ok_py == ok_c
    assert np.array_equal(s_py, s_c)
    assert np.array_equal(y_py, y_c)


def test_default_backend_selection():
    assert kernels.default in kernels.available()
    assert kernels.get("python") is _pykernels
    assert kernels.get() is kernels.default
    with pytest.raises(ValueError):
        kernels.get("fortran")


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
@pytest.mark.parametrize("name,args", CASES, ids=[c[0] for c in CASES])
def test_backends_bit_identical(name, args):
    s_py, y_py, ok_py = getattr(kernels.python, name)(*args)
    s_c, y_c, ok_c = getattr(kernels.compiled, name)(*args)
    assert ok_py and ok_c
    assert np.array_equal(s_py, s_c)
    assert np.array_equal(y_py, y_c)


@pytest.mark.parametrize("name,args", CASES[:3], ids=[c[0] for c in CASES[:3]])
def test_sampling_stride_and_last_step(backend, name, args):
    steps, y, ok = getattr(backend, name)(*args)
    assert ok
    assert steps.dtype == np.int64
    assert list(steps[:-1]) == list(range(0, 5000, 7))
    assert steps[-1] == 5000
    assert y.shape == (len(steps), 2 if name.startswith("rigid") else 4)


def test_stride_one_and_divisible_end(backend):
    steps, y, _ = backend.rigid_rk4(0.5, 0.0, 1.0, 1.0, 0.01, 10, 1)
    assert list(steps) == list(range(11))
    steps, _, _ = backend.rigid_rk4(0.5, 0.0, 1.0, 1.0, 0.01, 10, 5)
    assert list(steps) == [0, 5, 10]


def test_rigid_rk4_general_matches_constant_kernel(backend):
    mc = -(1.3 * 1.3) * 0.8
    args = (0.4, -0.2, 1e-3, 2000, 10)
    s_g, y_g, _ = backend.rigid_rk4_general(lambda t, z, zd: mc * math.sin(z) * math.cos(z), *args)
    s_c, y_c, _ = backend.rigid_rk4(0.4, -0.2, 1.3, 0.8, 1e-3, 2000, 10)
    assert np.array_equal(s_g, s_c)
    assert np.array_equal(y_g, y_c)


def test_non_finite_aborts(backend):
    steps, y, ok = backend.rigid_rk4(1.0, 0.0, 1e200, 1.0, 1e-3, 100, 1)
    assert not ok
    assert np.all(np.isfinite(y))
    assert steps[-1] < 100


def test_elastic_rod_through_pole_aborts(backend):
    # K = 1 with rho close to pi and the rod growing: rho + l reaches pi
    steps, y, ok = backend.elastic_rk4(0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 3.0, 0.0, 1e-3, 1000, 1)
    assert not ok
    assert np.all(y[:, 1] + 3.0 < math.pi)
    assert 0 < steps[-1] < 1000


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
@pytest.mark.parametrize("name", ["rigid_rk4", "rigid_leapfrog"])
def test_backends_abort_at_same_step(name):
    args = (1.0, 0.0, 1e200, 1.0, 1e-3, 100, 1)
    s_py, y_py, ok_py = getattr(kernels.python, name)(*args)
    s_c, y_c, ok_c = getattr(kernels.compiled, name)(*args)
    assert not ok_py and not ok_c
    assert np.array_equal(s_py, s_c)
    assert np.array_equal(y_py, y_c)
