"""Batch runs over seeds and protocols, and the DCP-vs-LEACH comparison."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import PROTOCOLS, SimConfig, dump_config
from .leach import run_leach
from .metrics import SimulationResult, write_records_csv
from .protocol import run_dcp
from .topology import generate_topology


class ReportError(ValueError):
    pass


def run_one(config: SimConfig, protocol: str, seed: int) -> SimulationResult:
    topology = generate_topology(config, seed)
    if protocol == "dcp":
        return run_dcp(config, topology, seed=seed)
    if protocol == "leach":
        return run_leach(config, topology, seed=seed)
    raise ValueError(f"unknown protocol {protocol!r}")


def _run_job(args):
    return run_one(*args)


def run_batch(config: SimConfig, seeds: Iterable[int] | None = None,
              protocols: Iterable[str] | None = None, jobs: int = 1) -> list[SimulationResult]:
    """Run every (protocol, seed) pair; results come back sorted by protocol, then seed."""
    seeds = sorted(set(config.seeds if seeds is None else seeds))
    protocols = sorted(set(config.protocols if protocols is None else protocols))
    if not seeds:
        raise ValueError("at least one seed is required")
    if not protocols:
        raise ValueError("at least one protocol is required")
    for p in protocols:
        if p not in PROTOCOLS:
            raise ValueError(f"unknown protocol {p!r}")
    work = [(config, p, s) for p in protocols for s in seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, work))
    return [run_one(*w) for w in work]


def _median(values: list) -> float | None:
    return float(np.median(values)) if values else None


@dataclass
class Series:
    """Per-tick medians across seeds, one column per protocol."""
    ticks: list[int]
    columns: dict[str, list[float | None]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = list(self.columns)
        writer.writerow(["tick", *names])
        for i, t in enumerate(self.ticks):
            writer.writerow([t, *("" if self.columns[n][i] is None else repr(self.columns[n][i])
                                  for n in names)])
        return buf.getvalue()


def _by_protocol(results: Sequence[SimulationResult]) -> dict[str, list[SimulationResult]]:
    grouped: dict[str, list[SimulationResult]] = {}
    for r in sorted(results, key=lambda r: (r.protocol, r.seed)):
        grouped.setdefault(r.protocol, []).append(r)
    return grouped


def build_series(results: Sequence[SimulationResult]) -> dict[str, Series]:
    grouped = _by_protocol(results)
    last = max(r.records[-1].tick for r in results)
    ticks = list(range(last + 1))
    energy, delay, alive_runs, alive_count = {}, {}, {}, {}
    for proto, runs in grouped.items():
        by_tick = [{rec.tick: rec for rec in r.records} for r in runs]
        e_col, d_col, ar_col, ac_col = [], [], [], []
        for t in ticks:
            recs = [m[t] for m in by_tick if t in m]
            e_col.append(_median([rec.cumulative_dissipated for rec in recs]))
            d_col.append(_median([rec.mean_delay for rec in recs if rec.mean_delay is not None]))
            ar_col.append(float(sum(1 for r in runs if r.lifetime >= t)))
            # a dead run keeps the alive count it ended with
            counts = [m[t].alive_count if t in m else sum(1 for e in r.final_energy if e > 0)
                      for m, r in zip(by_tick, runs)]
            ac_col.append(_median(counts))
        energy[proto] = e_col
        delay[proto] = d_col
        alive_runs[f"{proto}_alive_runs"] = ar_col
        alive_count[f"{proto}_alive_count"] = ac_col
    return {
        "energy": Series(ticks, energy),
        "lifetime": Series(ticks, {**alive_runs, **alive_count}),
        "delay": Series(ticks, delay),
    }


@dataclass
class Comparison:
    seeds: list[int]
    refresh_time: int
    median_lifetime: dict[str, float]
    median_final_dissipated: dict[str, float]
    median_final_delay: dict[str, float | None]
    series: dict[str, Series]
    checks: dict[str, bool | None] = field(default_factory=dict)
    common_tick: int = 0

    def summary(self) -> str:
        def word(ok):
            return "N/A" if ok is None else ("PASS" if ok else "FAIL")

        def num(v):
            return "n/a" if v is None else f"{v:g}"

        lines = [
            "DCP vs LEACH comparison",
            "seeds: " + ",".join(str(s) for s in self.seeds),
            f"refresh_time: {self.refresh_time}",
            f"ticks compared for energy: {self.refresh_time + 1}..{self.common_tick}",
            "",
            f"median lifetime (ticks): dcp={num(self.median_lifetime['dcp'])} "
            f"leach={num(self.median_lifetime['leach'])}",
            f"median final dissipated energy (units): dcp={num(self.median_final_dissipated['dcp'])} "
            f"leach={num(self.median_final_dissipated['leach'])}",
            f"median mean delay (ticks): dcp={num(self.median_final_delay['dcp'])} "
            f"leach={num(self.median_final_delay['leach'])}",
            "",
            f"DCP dissipates less energy than LEACH: {word(self.checks['energy_lower'])}",
            f"DCP energy advantage non-decreasing: {word(self.checks['energy_gap_growing'])}",
            f"DCP lifetime > LEACH lifetime: {word(self.checks['lifetime_longer'])}",
            f"DCP delay > LEACH delay: {word(self.checks['delay_higher'])}",
            f"DCP delay <= refresh_time: {word(self.checks['delay_bounded'])}",
        ]
        return "\n".join(lines) + "\n"


def compare_report(results: Sequence[SimulationResult], refresh_time: int) -> Comparison:
    """Medians and trend checks for matched DCP and LEACH runs."""
    grouped = _by_protocol(results)
    if set(grouped) != set(PROTOCOLS):
        raise ReportError(f"need results for both dcp and leach, got {sorted(grouped)}")
    seed_sets = {p: [r.seed for r in runs] for p, runs in grouped.items()}
    if seed_sets["dcp"] != seed_sets["leach"]:
        raise ReportError(f"seed sets differ: dcp={seed_sets['dcp']} leach={seed_sets['leach']}")

    series = build_series(results)
    comp = Comparison(
        seeds=seed_sets["dcp"],
        refresh_time=refresh_time,
        median_lifetime={p: _median([r.lifetime for r in grouped[p]]) for p in PROTOCOLS},
        median_final_dissipated={p: _median([r.final_dissipated for r in grouped[p]])
                                 for p in PROTOCOLS},
        median_final_delay={p: _median([r.final_mean_delay for r in grouped[p]
                                         if r.final_mean_delay is not None]) for p in PROTOCOLS},
        series=series,
    )

    # energy is compared only while every run is still going
    common = min(r.records[-1].tick for r in results)
    comp.common_tick = common
    ticks = range(refresh_time + 1, common + 1)
    e_dcp, e_leach = series["energy"].columns["dcp"], series["energy"].columns["leach"]
    if len(ticks):
        gaps = [e_leach[t] - e_dcp[t] for t in ticks]
        comp.checks["energy_lower"] = all(g > 0 for g in gaps)
        comp.checks["energy_gap_growing"] = all(b >= a for a, b in zip(gaps, gaps[1:]))
    else:
        comp.checks["energy_lower"] = None
        comp.checks["energy_gap_growing"] = None
    comp.checks["lifetime_longer"] = comp.median_lifetime["dcp"] > comp.median_lifetime["leach"]

    d_dcp, d_leach = comp.median_final_delay["dcp"], comp.median_final_delay["leach"]
    comp.checks["delay_higher"] = None if d_dcp is None or d_leach is None else d_dcp > d_leach
    comp.checks["delay_bounded"] = all(
        rec.mean_delay is None or rec.mean_delay <= refresh_time
        for r in grouped["dcp"] for rec in r.records
    )
    return comp


def write_outputs(config: SimConfig, results: Sequence[SimulationResult], out_dir: str | Path) -> str:
    """Write runs.csv, the figure series, summary.txt and resolved_config.txt; return the summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "runs.csv", "w", newline="") as fh:
        write_records_csv(results, fh)
    (out / "resolved_config.txt").write_text(dump_config(config))

    protocols = {r.protocol for r in results}
    if protocols == set(PROTOCOLS):
        comp = compare_report(results, config.refresh_time)
        series, summary = comp.series, comp.summary()
    else:
        series = build_series(results)
        lines = [f"single-protocol run ({', '.join(sorted(protocols))}); no comparison"]
        for r in sorted(results, key=lambda r: (r.protocol, r.seed)):
            lines.append(f"{r.protocol} seed={r.seed} lifetime={r.lifetime} "
                         f"dissipated={r.final_dissipated} mean_delay={r.final_mean_delay}")
        summary = "\n".join(lines) + "\n"
    (out / "fig_energy.csv").write_text(series["energy"].to_csv())
    (out / "fig_lifetime.csv").write_text(series["lifetime"].to_csv())
    (out / "fig_delay.csv").write_text(series["delay"].to_csv())
    (out / "summary.txt").write_text(summary)
    return summary
