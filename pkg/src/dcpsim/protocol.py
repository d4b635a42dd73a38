"""Dynamic Clustering Protocol: election, duty cycling and periodic refresh.

Node ids are 1-based throughout the public API (cluster id 0 means
"unassigned"); the per-node arrays inside :class:`ProtocolState` are
0-based, so node ``i`` lives at index ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .energy import e_total_network
from .metrics import EnergyLedger, RoundRecord, SimulationResult, record_tick
from .topology import Topology


@dataclass(frozen=True)
class Node:
    id: int
    energy: int
    cluster_no: int = 0
    ss_flag: bool = False
    active: bool = False


@dataclass(frozen=True)
class Cluster:
    head: int
    members: frozenset[int]

    @property
    def nodes(self) -> frozenset[int]:
        return self.members | {self.head}


@dataclass(frozen=True)
class ClusterAssignment:
    clusters: Mapping[int, Cluster]
    subsink: tuple[int, ...]

    @classmethod
    def from_labels(cls, cluster_no: Sequence[int], subsink: Sequence[int]) -> "ClusterAssignment":
        members: dict[int, set[int]] = {}
        heads = {}
        for cid, head in enumerate(subsink, start=1):
            heads[cid] = head
            members[cid] = set()
        for idx, cid in enumerate(cluster_no):
            node_id = idx + 1
            cid = int(cid)
            if cid not in heads:
                raise ValueError(f"node {node_id} has no valid cluster (cluster_no={cid})")
            if heads[cid] != node_id:
                members[cid].add(node_id)
        clusters = {cid: Cluster(heads[cid], frozenset(members[cid])) for cid in heads}
        return cls(clusters, tuple(int(h) for h in subsink))

    def cluster(self, cluster_id: int) -> Cluster:
        try:
            return self.clusters[cluster_id]
        except KeyError:
            raise KeyError(f"unknown cluster id {cluster_id}") from None

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(c.nodes for c in self.clusters.values())

    def __len__(self):
        return len(self.clusters)


@dataclass(eq=False)
class ProtocolState:
    energy: np.ndarray          # int64, one entry per node
    cluster_no: np.ndarray      # int64, 0 = unassigned
    ss_flag: np.ndarray         # bool, cluster head
    active: np.ndarray          # bool, has data this tick
    rng: np.random.Generator
    subsink: list[int] = field(default_factory=list)
    tick: int = 0
    cycle: int = 0
    alive: bool = True

    @classmethod
    def fresh(cls, energies: Sequence[int], seed: int = 0) -> "ProtocolState":
        energy = np.array(energies, dtype=np.int64)
        n = len(energy)
        return cls(
            energy=energy,
            cluster_no=np.zeros(n, dtype=np.int64),
            ss_flag=np.zeros(n, dtype=bool),
            active=np.zeros(n, dtype=bool),
            rng=np.random.default_rng([seed, 1]),
        )

    @property
    def node_count(self) -> int:
        return len(self.energy)

    @property
    def nodes(self) -> list[Node]:
        return [
            Node(i + 1, int(self.energy[i]), int(self.cluster_no[i]),
                 bool(self.ss_flag[i]), bool(self.active[i]))
            for i in range(self.node_count)
        ]

    @property
    def assignment(self) -> ClusterAssignment:
        return ClusterAssignment.from_labels(self.cluster_no, self.subsink)


def energy_max(nodes: Sequence[Node]) -> int | None:
    """Id of the highest-energy unassigned node, lowest id on ties; None if all assigned."""
    best = None
    for node in sorted(nodes, key=lambda n: n.id):
        if node.cluster_no != 0:
            continue
        if best is None or node.energy > best.energy:
            best = node
    return None if best is None else best.id


def make_cluster(state: ProtocolState, topology: Topology, range_: float) -> ProtocolState:
    """Form clusters from current residual energies.

    The richest unassigned node becomes a head and absorbs every
    unassigned node within ``range_``; repeat until nobody is left.
    Any previous assignment is discarded first.
    """
    cluster_no, subsink = kernels.form_clusters(
        np.ascontiguousarray(state.energy, dtype=np.int64), topology.distance, float(range_))
    state.cluster_no = np.asarray(cluster_no, dtype=np.int64)
    state.subsink = list(subsink)
    state.ss_flag = np.zeros(state.node_count, dtype=bool)
    state.ss_flag[np.asarray(state.subsink, dtype=np.int64) - 1] = True
    state.active = np.zeros(state.node_count, dtype=bool)
    return state


def status_update(state: ProtocolState, p_active: float,
                  rng: np.random.Generator | None = None) -> ProtocolState:
    """Mark each non-head node active with probability ``p_active``.

    One uniform draw per node is consumed every call, heads included, so
    the random stream does not depend on the cluster layout.
    """
    if not 0.0 <= p_active <= 1.0:
        raise ValueError("p_active must lie in [0, 1]")
    draws = (rng or state.rng).random(state.node_count)
    state.active = (draws < p_active) & ~state.ss_flag
    return state


def _deliver_cycle(ledger: EnergyLedger, pending: list[tuple[int, int]], end_tick: int) -> None:
    # members hand data to the head as soon as they are active; the head
    # flushes the aggregate to the base station when the cycle closes
    for generated, count in pending:
        ledger.deliver(count, end_tick - generated + 1)
    pending.clear()


def dcp_cycle(state: ProtocolState, topology: Topology, config,
              ledger: EnergyLedger) -> tuple[ProtocolState, list[RoundRecord], bool]:
    """Run one refresh cycle: charge heads, ``refresh_time`` ticks, re-cluster.

    Returns the state, the records of the ticks completed, and whether the
    network is still alive. A configured horizon may stop the cycle early;
    the network is then alive and no re-clustering happens.
    """
    if not state.alive:
        return state, [], False
    if config.horizon is not None and state.tick >= config.horizon:
        return state, [], True
    sched = config.schedule
    e_radio = e_total_network(config.radio, state.assignment, topology)
    cluster_count = len(state.subsink)
    records: list[RoundRecord] = []

    heads = np.asarray(state.subsink, dtype=np.int64) - 1
    dead, spent = kernels.charge_heads(state.energy, heads, sched.head_cost_per_cycle)
    if dead:
        state.alive = False
        return state, records, False
    ledger.spend(spent)

    pending: list[tuple[int, int]] = []
    for step in range(config.refresh_time):
        if config.horizon is not None and state.tick >= config.horizon:
            return state, records, True
        status_update(state, config.p_active)
        active = state.active.view(np.uint8)
        dead, spent, n_active = kernels.tick(
            state.energy, state.ss_flag.view(np.uint8), active,
            sched.active_cost_per_tick, sched.idle_cost_per_tick)
        if dead:
            state.alive = False
            return state, records, False
        state.tick += 1
        ledger.spend(spent)
        if n_active:
            pending.append((state.tick, n_active))
        if step == config.refresh_time - 1:
            _deliver_cycle(ledger, pending, state.tick)
        records.append(record_tick(state.tick, state.energy, cluster_count, e_radio, ledger))

    state.cycle += 1
    make_cluster(state, topology, config.range)
    return state, records, True


def run_dcp(config, topology: Topology, seed: int | None = None) -> SimulationResult:
    """Simulate DCP from full batteries until the first node dies or the horizon."""
    if seed is None:
        seed = config.seed
    n = topology.node_count
    if n != config.node_count:
        raise ValueError(f"topology has {n} nodes, config expects {config.node_count}")
    initial = config.initial_units
    state = ProtocolState.fresh(np.full(n, initial, dtype=np.int64), seed)
    make_cluster(state, topology, config.range)
    ledger = EnergyLedger(initial_total=n * initial)
    records = [record_tick(0, state.energy, len(state.subsink),
                           e_total_network(config.radio, state.assignment, topology), ledger)]
    while state.alive and (config.horizon is None or state.tick < config.horizon):
        state, recs, _ = dcp_cycle(state, topology, config, ledger)
        records.extend(recs)
    return SimulationResult(
        records=tuple(records),
        lifetime=state.tick,
        protocol="dcp",
        seed=seed,
        died=not state.alive,
        final_energy=tuple(int(e) for e in state.energy),
    )
