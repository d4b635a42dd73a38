"""Energy bookkeeping.

Two accountings live here side by side. :class:`EnergySchedule` is the
integer decrement schedule that drives the simulation (head cost per
refresh cycle, active and idle cost per tick). :class:`RadioModel` is the
first-order radio model used only for the analytical per-cluster
dissipation diagnostic reported alongside each tick.
"""

from __future__ import annotations

from dataclasses import dataclass

from .topology import Topology


@dataclass(frozen=True)
class EnergySchedule:
    head_cost_per_cycle: int = 10
    active_cost_per_tick: int = 2
    idle_cost_per_tick: int = 1
    units_per_joule: float = 1000.0

    def __post_init__(self):
        if not (self.head_cost_per_cycle >= self.active_cost_per_tick
                >= self.idle_cost_per_tick >= 0):
            raise ValueError(
                "energy schedule must satisfy head_cost_per_cycle >= "
                "active_cost_per_tick >= idle_cost_per_tick >= 0"
            )
        if self.units_per_joule <= 0:
            raise ValueError("units_per_joule must be positive")

    def to_units(self, joules: float) -> int:
        """Convert Joules to integer schedule units; rejects fractional results."""
        units = joules * self.units_per_joule
        rounded = round(units)
        if abs(units - rounded) > 1e-9 * max(1.0, abs(units)):
            raise ValueError(
                f"{joules} J x {self.units_per_joule} units/J is not a whole number of units"
            )
        return int(rounded)


@dataclass(frozen=True)
class RadioModel:
    e_elec: float = 50e-9      # J/bit, transmit and receive electronics
    e_amp: float = 100e-12     # J/bit/m^2
    message_bits: int = 2000

    def __post_init__(self):
        if self.e_elec < 0 or self.e_amp < 0 or self.message_bits < 0:
            raise ValueError("radio model parameters must be non-negative")


def tx_energy(model: RadioModel, dist: float) -> float:
    if dist < 0:
        raise ValueError("distance must be non-negative")
    return model.e_elec * model.message_bits + model.e_amp * model.message_bits * dist * dist


def rx_energy(model: RadioModel) -> float:
    return model.e_elec * model.message_bits


def e_total(model: RadioModel, assignment, topology: Topology, cluster_id: int) -> float:
    """Energy to move one round of a cluster's data to the base station.

    Every member transmits to the head (which pays the matching receive
    cost), then the head sends a single aggregated message to the base
    station.
    """
    cluster = assignment.cluster(cluster_id)
    h = cluster.head - 1
    total = 0.0
    for m in sorted(cluster.members):
        total += tx_energy(model, float(topology.distance[m - 1, h])) + rx_energy(model)
    return total + tx_energy(model, float(topology.dist_to_bs[h]))


def e_total_network(model: RadioModel, assignment, topology: Topology) -> float:
    return sum(e_total(model, assignment, topology, cid) for cid in sorted(assignment.clusters))
