import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcpsim import SimConfig, generate_topology, kernels
from dcpsim.report import run_batch

backends = kernels.available_backends()
needs_both = pytest.mark.skipif(len(backends) < 2, reason="compiled extension not built")


def test_python_fallback_always_available():
    assert "python" in backends


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


@needs_both
@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30), st.integers(0, 10**6), st.floats(0.5, 200))
def test_form_clusters_agree(n, seed, range_):
    topo = generate_topology(SimConfig(node_count=n, area_width=200, area_height=200), seed)
    energy = np.random.default_rng(seed).integers(-3, 10, n).astype(np.int64)
    c_labels, c_heads = kernels.load_backend("cython").form_clusters(energy, topo.distance, range_)
    p_labels, p_heads = kernels.load_backend("python").form_clusters(energy, topo.distance, range_)
    assert np.array_equal(c_labels, p_labels)
    assert list(c_heads) == list(p_heads)


@needs_both
@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-2, 20), min_size=1, max_size=40), st.data())
def test_tick_and_charge_agree(energies, data):
    n = len(energies)
    is_head = np.array(data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=np.uint8)
    active = np.array(data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=np.uint8)
    heads = np.flatnonzero(is_head).astype(np.int64)
    out = {}
    for name in ("cython", "python"):
        mod = kernels.load_backend(name)
        e = np.array(energies, dtype=np.int64)
        a = active.copy()
        charged = mod.charge_heads(e, heads, 10)
        ticked = mod.tick(e, is_head, a, 2, 1)
        out[name] = (tuple(map(int, charged)), tuple(map(int, ticked)), e.tolist(), a.tolist())
    assert out["cython"] == out["python"]


@needs_both
def test_full_batch_identical_across_backends():
    cfg = SimConfig(node_count=120, area_width=400, area_height=400, range=70)
    runs = {}
    for name in backends:
        kernels.set_backend(name)
        runs[name] = run_batch(cfg, seeds=[0, 1])
    kernels.set_backend(backends[0])
    assert runs["cython"] == runs["python"]


def test_tick_contract(backend):
    e = np.array([5, 5, 5], dtype=np.int64)
    active = np.array([1, 0, 1], dtype=np.uint8)
    dead, spent, n_active = kernels.tick(e, np.array([1, 0, 0], dtype=np.uint8), active, 2, 1)
    assert (dead, spent, n_active) == (False, 3, 1)
    assert e.tolist() == [5, 4, 3]
    assert active.tolist() == [1, 0, 0]
    e[1] = 0
    assert kernels.tick(e, np.zeros(3, dtype=np.uint8), active, 2, 1) == (True, 0, 0)
    assert e.tolist() == [5, 0, 3]


def test_charge_contract(backend):
    e = np.array([5, 0, 7], dtype=np.int64)
    assert kernels.charge_heads(e, np.array([0, 2], dtype=np.int64), 10) == (False, 20)
    assert e.tolist() == [-5, 0, -3]
    assert kernels.charge_heads(e, np.array([1], dtype=np.int64), 10) == (True, 0)
