"""Static-cluster baseline ("LEACH" as the comparison treats it).

Heads are chosen once, every other node joins its nearest head, and the
layout never changes. There is no sleep/wait: every member transmits, and
pays the active rate, on every tick. Heads pay the per-cycle head cost at
the start of each ``refresh_time`` window, exactly like DCP heads.

This is deliberately not canonical LEACH, which rotates heads with a
probabilistic threshold.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .config import LeachConfig
from .energy import e_total_network
from .metrics import EnergyLedger, SimulationResult, record_tick
from .protocol import ClusterAssignment
from .topology import Topology

__all__ = ["LeachConfig", "head_count", "form_static_clusters", "run_leach"]


def head_count(node_count: int, head_fraction: float) -> int:
    # round first so 0.07 * 100 == 7.000000000000001 does not become 8
    return max(1, min(node_count, math.ceil(round(head_fraction * node_count, 9))))


def form_static_clusters(energy: np.ndarray, topology: Topology,
                         n_heads: int) -> ClusterAssignment:
    """Highest-energy nodes become heads (lowest id on ties); others join the nearest head."""
    n = len(energy)
    order = np.lexsort((np.arange(n), -np.asarray(energy)))
    heads = order[:n_heads]
    nearest = np.argmin(topology.distance[:, heads], axis=1)
    cluster_no = nearest.astype(np.int64) + 1
    cluster_no[heads] = np.arange(1, n_heads + 1)
    return ClusterAssignment.from_labels(cluster_no, [int(h) + 1 for h in heads])


def run_leach(config, topology: Topology, leach: LeachConfig | None = None,
              seed: int | None = None) -> SimulationResult:
    if leach is None:
        leach = config.leach
    if seed is None:
        seed = config.seed
    n = topology.node_count
    if n != config.node_count:
        raise ValueError(f"topology has {n} nodes, config expects {config.node_count}")
    sched = config.schedule
    initial = config.initial_units
    energy = np.full(n, initial, dtype=np.int64)

    assignment = form_static_clusters(energy, topology, head_count(n, leach.head_fraction))
    heads = np.asarray(assignment.subsink, dtype=np.int64) - 1
    is_head = np.zeros(n, dtype=np.uint8)
    is_head[heads] = 1
    members = (1 - is_head).astype(np.uint8)
    cluster_count = len(assignment)
    e_radio = e_total_network(config.radio, assignment, topology)

    ledger = EnergyLedger(initial_total=n * initial)
    records = [record_tick(0, energy, cluster_count, e_radio, ledger)]
    tick = 0
    alive = True
    while alive and (config.horizon is None or tick < config.horizon):
        if tick % config.refresh_time == 0:
            dead, spent = kernels.charge_heads(energy, heads, sched.head_cost_per_cycle)
            if dead:
                alive = False
                break
            ledger.spend(spent)
        active = members.copy()
        dead, spent, n_active = kernels.tick(
            energy, is_head, active, sched.active_cost_per_tick, sched.idle_cost_per_tick)
        if dead:
            alive = False
            break
        tick += 1
        ledger.spend(spent)
        # heads forward every tick: each datum arrives the tick it is sent
        ledger.deliver(n_active, 1)
        records.append(record_tick(tick, energy, cluster_count, e_radio, ledger))

    return SimulationResult(
        records=tuple(records),
        lifetime=tick,
        protocol="leach",
        seed=seed,
        died=not alive,
        final_energy=tuple(int(e) for e in energy),
    )
