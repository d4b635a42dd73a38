"""Per-tick records, run results and the distance/energy diagnostics."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .topology import Topology

CSV_HEADER = ("tick", "protocol", "seed", "cumulative_dissipated", "remaining_total",
              "alive_count", "cluster_count", "mean_delay", "e_total_radio")


@dataclass(frozen=True)
class RoundRecord:
    tick: int
    cumulative_dissipated: int
    remaining_total: int
    alive_count: int
    cluster_count: int
    mean_delay: float | None
    e_total_radio: float


@dataclass(frozen=True)
class SimulationResult:
    records: tuple[RoundRecord, ...]
    lifetime: int
    protocol: str
    seed: int
    died: bool
    final_energy: tuple[int, ...] = field(repr=False)

    @property
    def final_dissipated(self) -> int:
        return self.records[-1].cumulative_dissipated

    @property
    def final_mean_delay(self) -> float | None:
        return self.records[-1].mean_delay


@dataclass
class EnergyLedger:
    """Running totals for one run: energy spent and data delivered."""
    initial_total: int
    dissipated: int = 0
    delay_sum: int = 0
    delivered: int = 0

    def spend(self, units: int) -> None:
        self.dissipated += int(units)

    def deliver(self, count: int, delay: int) -> None:
        """Record ``count`` data that each took ``delay`` ticks."""
        self.delay_sum += int(count) * int(delay)
        self.delivered += int(count)

    @property
    def mean_delay(self) -> float | None:
        if self.delivered == 0:
            return None
        return self.delay_sum / self.delivered


def record_tick(tick: int, energy: np.ndarray, cluster_count: int,
                e_total_radio: float, ledger: EnergyLedger) -> RoundRecord:
    remaining = int(energy.sum())
    # a broken identity here means a decrement escaped the ledger
    assert ledger.dissipated + remaining == ledger.initial_total, (
        f"energy not conserved at tick {tick}: "
        f"{ledger.dissipated} + {remaining} != {ledger.initial_total}"
    )
    return RoundRecord(
        tick=tick,
        cumulative_dissipated=ledger.dissipated,
        remaining_total=remaining,
        alive_count=int((energy > 0).sum()),
        cluster_count=int(cluster_count),
        mean_delay=ledger.mean_delay,
        e_total_radio=float(e_total_radio),
    )


def mean_delay(deliveries: Iterable[tuple[int, int]]) -> float | None:
    """Mean of ``delivered - generated + 1`` ticks; None for no deliveries."""
    total = 0
    count = 0
    for generated, delivered in deliveries:
        if delivered < generated:
            raise ValueError(f"datum delivered at {delivered} before generation at {generated}")
        total += delivered - generated + 1
        count += 1
    return total / count if count else None


def d_b(topology: Topology) -> float:
    """Sum of node-to-base-station distances over all nodes."""
    return float(sum(float(d) for d in topology.dist_to_bs))


def d_c(assignment, topology: Topology, cluster_id: int) -> float:
    """Sum of member-to-head distances in one cluster (head-to-BS leg excluded)."""
    cluster = assignment.cluster(cluster_id)
    h = cluster.head - 1
    return float(sum(float(topology.distance[m - 1, h]) for m in sorted(cluster.members)))


def t_dist(assignment, topology: Topology) -> float:
    """Member-to-head plus head-to-BS path length, summed over all clusters."""
    total = 0.0
    for cid in sorted(assignment.clusters):
        total += d_c(assignment, topology, cid)
        total += float(topology.dist_to_bs[assignment.clusters[cid].head - 1])
    return total


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(results: Sequence[SimulationResult], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for res in results:
        for r in res.records:
            writer.writerow([
                r.tick, res.protocol, res.seed, r.cumulative_dissipated, r.remaining_total,
                r.alive_count, r.cluster_count, _fmt(r.mean_delay), _fmt(r.e_total_radio),
            ])


def records_csv(results: Sequence[SimulationResult]) -> str:
    buf = io.StringIO()
    write_records_csv(results, buf)
    return buf.getvalue()


def read_records_csv(fh) -> dict[tuple[str, int], list[RoundRecord]]:
    """Parse a ``runs.csv`` back into records keyed by ``(protocol, seed)``."""
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames!r}")
    out: dict[tuple[str, int], list[RoundRecord]] = {}
    for row in reader:
        key = (row["protocol"], int(row["seed"]))
        out.setdefault(key, []).append(RoundRecord(
            tick=int(row["tick"]),
            cumulative_dissipated=int(row["cumulative_dissipated"]),
            remaining_total=int(row["remaining_total"]),
            alive_count=int(row["alive_count"]),
            cluster_count=int(row["cluster_count"]),
            mean_delay=float(row["mean_delay"]) if row["mean_delay"] else None,
            e_total_radio=float(row["e_total_radio"]),
        ))
    return out
