import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quietzone import _backend, _pycore

BACKENDS = [_backend.load(n) for n in _backend.available()]
needs_core = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")


def test_fallback_always_available():
    assert "python" in _backend.available()
    assert _backend.load("python") is _pycore
    with pytest.raises(ValueError):
        _backend.load("fortran")


def test_environment_forces_fallback():
    env = dict(os.environ, QUIETZONE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import quietzone; print(quietzone.backend)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("QUIETZONE_THREADS", "1")
    assert _backend.max_workers() == 1
    monkeypatch.setenv("QUIETZONE_THREADS", "junk")
    assert _backend.max_workers() == (os.cpu_count() or 1)


@needs_core
def test_j_tables_agree():
    core, py = BACKENDS
    z = np.concatenate([np.geomspace(1e-8, 200.0, 300), [0.0]])
    a, b = core.j_table(120, z), py.j_table(120, z)
    env = np.maximum(np.abs(a), np.minimum(1.0, np.sqrt(2 / (np.pi * np.maximum(z, 1e-300)))))
    assert np.all(np.abs(a - b) <= 1e-13 * env)


@needs_core
def test_jy_tables_agree():
    core, py = BACKENDS
    z = np.geomspace(1e-4, 200.0, 200)
    (ja, ya), (jb, yb) = core.jy_table(30, z), py.jy_table(30, z)
    ok = np.isfinite(ya) & np.isfinite(yb)
    scale = np.maximum(np.abs(ya), np.sqrt(2 / (np.pi * z)))
    assert np.all(np.abs(ya - yb)[ok] <= 1e-12 * scale[ok])
    assert np.array_equal(np.isfinite(ya), np.isfinite(yb))


@needs_core
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(0.1, 6.0),
       st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=20))
def test_sums_agree(N, k, pts):
    core, py = BACKENDS
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    rng = np.random.default_rng(N)
    c = rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1)
    ra, rb = core.regular_sum(xs, ys, 0.3, -0.2, k, c), py.regular_sum(xs, ys, 0.3, -0.2, k, c)
    assert np.allclose(ra, rb, rtol=1e-12, atol=1e-12 * np.abs(c).sum())
    r = np.hypot(xs - 0.3, ys + 0.2)
    far = r > 0.05
    oa = core.outgoing_sum(xs[far], ys[far], 0.3, -0.2, k, c)
    ob = py.outgoing_sum(xs[far], ys[far], 0.3, -0.2, k, c)
    assert np.allclose(oa, ob, rtol=1e-11, atol=0)


@pytest.mark.parametrize("mod", BACKENDS, ids=[m.name for m in BACKENDS])
def test_outgoing_sum_singular_at_centre(mod):
    v = mod.outgoing_sum(np.array([1.0, 2.0]), np.array([1.0, 1.0]), 1.0, 1.0, 1.0, np.ones(3, complex))
    assert not np.isfinite(v[0]) and np.isfinite(v[1])


@pytest.mark.parametrize("mod", BACKENDS, ids=[m.name for m in BACKENDS])
def test_batch_independence(mod):
    z = np.geomspace(0.01, 150.0, 64)
    whole = mod.j_table(40, z)
    for i in (0, 17, 63):
        assert np.array_equal(mod.j_table(40, z[i:i + 1])[:, 0], whole[:, i])


@pytest.mark.parametrize("mod", BACKENDS, ids=[m.name for m in BACKENDS])
def test_batch_independence_y(mod):
    z = np.geomspace(0.01, 150.0, 64)
    _, whole = mod.jy_table(20, z)
    for i in (0, 30, 63):
        assert np.array_equal(mod.jy_table(20, z[i:i + 1])[1][:, 0], whole[:, i])
