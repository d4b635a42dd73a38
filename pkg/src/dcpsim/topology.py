"""Node placement, base station and the all-pairs distance matrix."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np


class Position(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class Topology:
    positions: np.ndarray      # (N, 2)
    base_station: Position
    distance: np.ndarray       # (N, N)
    dist_to_bs: np.ndarray     # (N,)

    @property
    def node_count(self) -> int:
        return len(self.positions)

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            tuple(self.base_station) == tuple(other.base_station)
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.distance, other.distance)
            and np.array_equal(self.dist_to_bs, other.dist_to_bs)
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def cal_distance(positions: Sequence[Sequence[float]] | np.ndarray,
                 base_station: Sequence[float]) -> Topology:
    """Build a Topology, filling the distance matrix and distances to the BS.

    Only the upper triangle is computed; the lower one is its mirror so the
    matrix is symmetric bit for bit.
    """
    pos = np.array(positions, dtype=np.float64).reshape(-1, 2)
    bs = Position(float(base_station[0]), float(base_station[1]))
    dx = pos[:, None, 0] - pos[None, :, 0]
    dy = pos[:, None, 1] - pos[None, :, 1]
    upper = np.triu(np.hypot(dx, dy), 1)
    dist = upper + upper.T
    to_bs = np.hypot(pos[:, 0] - bs.x, pos[:, 1] - bs.y)
    return Topology(_frozen(pos), bs, _frozen(dist), _frozen(to_bs))


def generate_topology(config, seed: int | None = None) -> Topology:
    """Place ``config.node_count`` nodes uniformly in the area.

    Explicit ``config.positions`` bypass the random placement. The base
    station defaults to the centre of the area.
    """
    width, height = config.area_width, config.area_height
    if width <= 0 or height <= 0:
        raise ValueError("area dimensions must be positive")
    if config.node_count < 1:
        raise ValueError("node_count must be at least 1")
    if seed is None:
        seed = config.seed

    if config.positions is not None:
        pos = np.asarray(config.positions, dtype=np.float64).reshape(-1, 2)
        if len(pos) != config.node_count:
            raise ValueError(
                f"{len(pos)} positions given for node_count={config.node_count}"
            )
        if (pos[:, 0] < 0).any() or (pos[:, 0] > width).any() \
                or (pos[:, 1] < 0).any() or (pos[:, 1] > height).any():
            raise ValueError("injected positions fall outside the area")
    else:
        rng = np.random.default_rng([seed, 0])
        pos = rng.uniform((0.0, 0.0), (width, height), size=(config.node_count, 2))

    bs = config.base_station
    if bs is None:
        bs = (width / 2.0, height / 2.0)
    return cal_distance(pos, bs)


def load_positions(path: str | Path) -> list[Position]:
    """Read an ``id,x,y`` CSV. Rows may come in any order; ids must be 1..N."""
    rows = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["id", "x", "y"]:
            raise ValueError(f"{path}: expected header 'id,x,y'")
        for lineno, row in enumerate(reader, start=2):
            try:
                nid = int(row["id"])
                rows[nid] = Position(float(row["x"]), float(row["y"]))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad row {row!r}") from exc
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise ValueError(f"{path}: node ids must be exactly 1..{len(rows)}")
    return [rows[i] for i in range(1, len(rows) + 1)]
