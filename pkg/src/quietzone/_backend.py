"""Pick the kernel implementation at import time.

The compiled ``_core`` module is used when it was built; setting
``QUIETZONE_PURE_PYTHON=1`` forces the numpy fallback. ``QUIETZONE_THREADS``
caps the number of worker threads used by callers that split work.
"""

import importlib
import os

from . import _pycore


def load(name=None):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name is None:
        name = "python" if os.environ.get("QUIETZONE_PURE_PYTHON") else "cython"
    if name == "python":
        return _pycore
    if name == "cython":
        try:
            return importlib.import_module("quietzone._core")
        except ImportError:
            return _pycore
    raise ValueError(f"unknown backend {name!r}")


def available():
    """Names of the backends importable in this installation."""
    names = ["python"]
    try:
        importlib.import_module("quietzone._core")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def max_workers():
    env = os.environ.get("QUIETZONE_THREADS")
    ncpu = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), ncpu))
        except ValueError:
            pass
    return ncpu


kernels = load()
