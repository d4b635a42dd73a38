"""``simulate`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, dump_config, load_config
from .report import ReportError, run_batch, write_outputs

log = logging.getLogger("dcpsim")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Simulate DCP and the static-cluster LEACH baseline on a sensor field.",
    )
    p.add_argument("--config", help="config file (INI-style, all keys optional)")
    p.add_argument("--protocol", choices=("dcp", "leach", "both"))
    p.add_argument("--nodes", type=int)
    p.add_argument("--area", help="WxH, e.g. 1000x1000")
    p.add_argument("--range", type=float)
    p.add_argument("--refresh-time", type=int)
    p.add_argument("--p-active", type=float)
    p.add_argument("--seeds", help="comma-separated seeds, e.g. 0,1,2")
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("-q", "--quiet", action="store_true", help="do not echo config and summary")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    overrides = {
        "protocol": args.protocol,
        "nodes": args.nodes,
        "area": args.area,
        "range": args.range,
        "refresh_time": args.refresh_time,
        "p_active": args.p_active,
        "seeds": args.seeds,
        "horizon": args.horizon,
    }
    try:
        config = load_config(args.config, overrides)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return 2

    if not args.quiet:
        sys.stdout.write(dump_config(config))
        sys.stdout.write("\n")
    try:
        results = run_batch(config, jobs=args.jobs)
        summary = write_outputs(config, results, args.out)
    except (OSError, ReportError, ConfigError) as exc:
        log.error("%s", exc)
        return 2
    if not args.quiet:
        sys.stdout.write(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
