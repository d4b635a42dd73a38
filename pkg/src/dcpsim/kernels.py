"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when
``DCPSIM_PURE_PYTHON=1`` is set, the numpy fallback is used. Both backends
produce identical results; ``tests/test_kernels.py`` checks this.
"""

import importlib
import os

BACKENDS = ("cython", "python")


def load_backend(name):
    if name == "cython":
        return importlib.import_module("dcpsim._ckernels")
    if name == "python":
        return importlib.import_module("dcpsim._pykernels")
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    found = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        found.append(name)
    return found


def set_backend(name):
    global BACKEND, form_clusters, charge_heads, tick
    mod = load_backend(name)
    BACKEND = name
    form_clusters = mod.form_clusters
    charge_heads = mod.charge_heads
    tick = mod.tick


if os.environ.get("DCPSIM_PURE_PYTHON", "") not in ("", "0"):
    set_backend("python")
else:
    try:
        set_backend("cython")
    except ImportError:
        set_backend("python")
