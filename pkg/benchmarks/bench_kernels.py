"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--nodes 450] [--repeat 5]
"""

import argparse
import time

import numpy as np

from dcpsim import SimConfig, generate_topology, kernels, run_dcp, run_leach


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(backend, nodes, repeat):
    kernels.set_backend(backend)
    mod = kernels.load_backend(backend)
    cfg = SimConfig(node_count=nodes)
    topo = generate_topology(cfg, 0)
    energy = np.random.default_rng(0).integers(1, 500, nodes).astype(np.int64)
    is_head = np.zeros(nodes, dtype=np.uint8)
    is_head[::15] = 1

    def ticks():
        e = energy.copy()
        for _ in range(100):
            active = (np.arange(nodes) % 2).astype(np.uint8)
            mod.tick(e, is_head, active, 2, 1)

    return {
        "form_clusters": best_of(lambda: mod.form_clusters(energy, topo.distance, cfg.range), repeat),
        "tick x100": best_of(ticks, repeat),
        "run_dcp": best_of(lambda: run_dcp(cfg, topo), repeat),
        "run_leach": best_of(lambda: run_leach(cfg, topo), repeat),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=450)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    rows = {b: bench(b, args.nodes, args.repeat) for b in backends}
    print(f"{'kernel':<16}" + "".join(f"{b:>14}" for b in backends)
          + ("       speedup" if len(backends) == 2 else ""))
    for name in rows[backends[0]]:
        line = f"{name:<16}" + "".join(f"{rows[b][name] * 1e3:>12.3f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{rows['python'][name] / rows['cython'][name]:>13.1f}x"
        print(line)


if __name__ == "__main__":
    main()
