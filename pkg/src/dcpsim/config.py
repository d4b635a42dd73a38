"""Simulation configuration and its on-disk format.

The config file is INI-style text with sections::

    nodes = 450                 # keys before any header belong to [simulation]

    [simulation]
    range = 150
    seeds = 0,1,2,3,4

    [energy]
    head_cost_per_cycle = 10

    [leach]
    head_fraction = 0.05

Every key is optional. Resolution order is defaults, then file, then
command-line overrides.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .energy import EnergySchedule, RadioModel
from .topology import load_positions

PROTOCOLS = ("dcp", "leach")

# Table 1 entries the simulator records but does not model.
INFORMATIONAL = {
    "simulation_area": "1000x1000",
    "radio_propagation_model": "Two way ground",
    "channel_type": "Wireless Channel",
    "antenna_model": "Antenna/Omniantenna",
    "energy_model": "Battery",
    "round_duration_s": "10",
}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class LeachConfig:
    head_fraction: float = 0.05

    def __post_init__(self):
        if not 0 < self.head_fraction < 1:
            raise ConfigError("head_fraction", "must lie strictly between 0 and 1")


@dataclass(frozen=True)
class SimConfig:
    node_count: int = 450
    area_width: float = 1000.0
    area_height: float = 1000.0
    range: float = 150.0
    refresh_time: int = 10
    initial_energy_joules: float = 0.5
    p_active: float = 0.5
    horizon: int | None = None
    protocol: str = "both"
    seed: int = 0
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    base_station: tuple[float, float] | None = None
    positions: tuple[tuple[float, float], ...] | None = None
    positions_file: str | None = None
    schedule: EnergySchedule = field(default_factory=EnergySchedule)
    radio: RadioModel = field(default_factory=RadioModel)
    leach: LeachConfig = field(default_factory=LeachConfig)

    def __post_init__(self):
        if self.node_count < 1:
            raise ConfigError("nodes", "must be at least 1")
        if self.area_width <= 0 or self.area_height <= 0:
            raise ConfigError("area", "width and height must be positive")
        if self.range <= 0:
            raise ConfigError("range", "must be positive")
        if self.refresh_time < 1:
            raise ConfigError("refresh_time", "must be at least 1")
        if self.initial_energy_joules < 0:
            raise ConfigError("initial_energy_joules", "must be non-negative")
        if not 0.0 <= self.p_active <= 1.0:
            raise ConfigError("p_active", "must lie in [0, 1]")
        if self.horizon is not None and self.horizon < 0:
            raise ConfigError("horizon", "must be non-negative")
        if self.horizon is None and self.schedule.idle_cost_per_tick < 1:
            raise ConfigError("horizon", "required when idle_cost_per_tick is 0 "
                                         "(the network might never die)")
        if self.protocol not in PROTOCOLS + ("both",):
            raise ConfigError("protocol", f"expected dcp, leach or both, got {self.protocol!r}")
        if not self.seeds:
            raise ConfigError("seeds", "at least one seed is required")
        if self.positions is not None and len(self.positions) != self.node_count:
            raise ConfigError("positions_file",
                              f"{len(self.positions)} positions for {self.node_count} nodes")
        try:
            self.schedule.to_units(self.initial_energy_joules)
        except ValueError as exc:
            raise ConfigError("initial_energy_joules", str(exc)) from None

    @property
    def initial_units(self) -> int:
        return self.schedule.to_units(self.initial_energy_joules)

    @property
    def protocols(self) -> tuple[str, ...]:
        return PROTOCOLS if self.protocol == "both" else (self.protocol,)

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)


def _parse_area(value: str) -> tuple[float, float]:
    w, sep, h = value.lower().partition("x")
    if not sep:
        raise ValueError("expected WxH")
    return float(w), float(h)


def _parse_seeds(value: str) -> tuple[int, ...]:
    return tuple(int(s) for s in value.replace(" ", "").split(",") if s)


def _parse_horizon(value: str) -> int | None:
    return None if value.strip().lower() in ("", "none") else int(value)


_SIM_KEYS = {
    "nodes": ("node_count", int),
    "area_width": ("area_width", float),
    "area_height": ("area_height", float),
    "range": ("range", float),
    "refresh_time": ("refresh_time", int),
    "initial_energy_joules": ("initial_energy_joules", float),
    "p_active": ("p_active", float),
    "horizon": ("horizon", _parse_horizon),
    "protocol": ("protocol", str.strip),
    "seed": ("seed", int),
    "seeds": ("seeds", _parse_seeds),
    "base_station_x": ("base_station_x", float),
    "base_station_y": ("base_station_y", float),
    "positions_file": ("positions_file", str.strip),
}
_ENERGY_KEYS = {
    "head_cost_per_cycle": int,
    "active_cost_per_tick": int,
    "idle_cost_per_tick": int,
    "units_per_joule": float,
    "e_elec": float,
    "e_amp": float,
    "message_bits": int,
}
_LEACH_KEYS = {"head_fraction": float}
_SECTIONS = {"simulation", "energy", "leach", "informational"}


def _read_file(path: str | Path) -> dict[str, dict[str, str]]:
    # strict=False lets an explicit [simulation] header follow the implicit one
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                       strict=False)
    parser.optionxform = str
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    try:
        parser.read_string("[simulation]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}") from None
    unknown = set(parser.sections()) - _SECTIONS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")
    return {s: dict(parser.items(s)) for s in parser.sections()}


def load_config(path: str | Path | None = None,
                overrides: Mapping[str, Any] | None = None) -> SimConfig:
    """Resolve a SimConfig from an optional file plus flag overrides.

    ``overrides`` uses the file's key names (``nodes``, ``range``,
    ``refresh_time``...), plus ``area`` as a ``WxH`` string or pair.
    Values may be strings or already-typed.
    """
    sections: dict[str, dict[str, Any]] = {"simulation": {}, "energy": {}, "leach": {}}
    base_dir = Path(".")
    if path is not None:
        base_dir = Path(path).parent
        for name, items in _read_file(path).items():
            sections.setdefault(name, {}).update(items)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "area":
            try:
                w, h = _parse_area(value) if isinstance(value, str) else value
            except ValueError:
                raise ConfigError("area", f"expected WxH, got {value!r}") from None
            sections["simulation"]["area_width"] = w
            sections["simulation"]["area_height"] = h
        elif key in _ENERGY_KEYS:
            sections["energy"][key] = value
        elif key in _LEACH_KEYS:
            sections["leach"][key] = value
        else:
            sections["simulation"][key] = value

    def convert(key, parser, value):
        if not isinstance(value, str):
            return value
        try:
            return parser(value)
        except ValueError:
            raise ConfigError(key, f"cannot parse value {value!r}") from None

    sim: dict[str, Any] = {}
    for key, value in sections["simulation"].items():
        if key not in _SIM_KEYS:
            raise ConfigError(key, "unknown key in [simulation]")
        name, parser = _SIM_KEYS[key]
        sim[name] = convert(key, parser, value)
    energy = {}
    for key, value in sections["energy"].items():
        if key not in _ENERGY_KEYS:
            raise ConfigError(key, "unknown key in [energy]")
        energy[key] = convert(key, _ENERGY_KEYS[key], value)
    leach = {}
    for key, value in sections["leach"].items():
        if key not in _LEACH_KEYS:
            raise ConfigError(key, "unknown key in [leach]")
        leach[key] = convert(key, _LEACH_KEYS[key], value)

    bx, by = sim.pop("base_station_x", None), sim.pop("base_station_y", None)
    if (bx is None) != (by is None):
        raise ConfigError("base_station_x" if bx is None else "base_station_y",
                          "base station needs both coordinates")
    if bx is not None:
        sim["base_station"] = (bx, by)

    if sim.get("positions_file"):
        pfile = Path(sim["positions_file"])
        if not pfile.is_absolute():
            pfile = (base_dir / pfile).resolve()
        try:
            positions = load_positions(pfile)
        except (OSError, ValueError) as exc:
            raise ConfigError("positions_file", str(exc)) from None
        sim["positions_file"] = str(pfile)
        sim["positions"] = tuple((p.x, p.y) for p in positions)
        sim.setdefault("node_count", len(positions))

    radio_keys = {"e_elec", "e_amp", "message_bits"}
    try:
        schedule = EnergySchedule(**{k: v for k, v in energy.items() if k not in radio_keys})
    except ValueError as exc:
        raise ConfigError("energy", str(exc)) from None
    try:
        radio = RadioModel(**{k: v for k, v in energy.items() if k in radio_keys})
    except ValueError as exc:
        raise ConfigError("energy", str(exc)) from None
    return SimConfig(schedule=schedule, radio=radio, leach=LeachConfig(**leach), **sim)


def dump_config(config: SimConfig) -> str:
    """Render the fully resolved configuration in the file format above."""
    def fmt(v):
        if v is None:
            return "none"
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = ["[simulation]"]
    lines.append(f"nodes = {config.node_count}")
    lines.append(f"area_width = {fmt(config.area_width)}")
    lines.append(f"area_height = {fmt(config.area_height)}")
    lines.append(f"range = {fmt(config.range)}")
    lines.append(f"refresh_time = {config.refresh_time}")
    lines.append(f"initial_energy_joules = {fmt(config.initial_energy_joules)}")
    lines.append(f"p_active = {fmt(config.p_active)}")
    lines.append(f"horizon = {fmt(config.horizon)}")
    lines.append(f"protocol = {config.protocol}")
    lines.append(f"seed = {config.seed}")
    lines.append("seeds = " + ",".join(str(s) for s in config.seeds))
    if config.base_station is not None:
        lines.append(f"base_station_x = {fmt(float(config.base_station[0]))}")
        lines.append(f"base_station_y = {fmt(float(config.base_station[1]))}")
    if config.positions_file:
        lines.append(f"positions_file = {config.positions_file}")
    lines.append("")
    lines.append("[energy]")
    s, r = config.schedule, config.radio
    lines.append(f"head_cost_per_cycle = {s.head_cost_per_cycle}")
    lines.append(f"active_cost_per_tick = {s.active_cost_per_tick}")
    lines.append(f"idle_cost_per_tick = {s.idle_cost_per_tick}")
    lines.append(f"units_per_joule = {fmt(float(s.units_per_joule))}")
    lines.append(f"e_elec = {fmt(float(r.e_elec))}")
    lines.append(f"e_amp = {fmt(float(r.e_amp))}")
    lines.append(f"message_bits = {r.message_bits}")
    lines.append("")
    lines.append("[leach]")
    lines.append(f"head_fraction = {fmt(float(config.leach.head_fraction))}")
    lines.append("")
    lines.append("# recorded for reference only; not used by the simulator")
    lines.append("[informational]")
    for k, v in INFORMATIONAL.items():
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"
