"""Discrete-time simulator for the Dynamic Clustering Protocol (DCP) and a
static-cluster LEACH baseline on wireless sensor networks."""

from .config import ConfigError, LeachConfig, SimConfig, dump_config, load_config
from .energy import EnergySchedule, RadioModel, e_total, rx_energy, tx_energy
from .kernels import BACKEND
from .leach import run_leach
from .metrics import (EnergyLedger, RoundRecord, SimulationResult, d_b, d_c, mean_delay,
                      record_tick, t_dist)
from .protocol import (ClusterAssignment, Node, ProtocolState, dcp_cycle, energy_max,
                       make_cluster, run_dcp, status_update)
from .report import compare_report, run_batch
from .topology import Position, Topology, cal_distance, generate_topology, load_positions

__version__ = "0.1.0"
