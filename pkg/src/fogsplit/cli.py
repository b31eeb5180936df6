"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 solver error
(infeasible cell, oracle size cap, or a cell that ran out of solver budget).
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import logging
import sys
import warnings
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import ConfigError, config_checksum, load_config, parse_range
from .optimizer import OracleSizeError
from .powermodel import CATALOG_VERSION, PowerModelError, efficiency_table
from .results import rows_to_csv, write_csv, write_manifest
from .scenarios import ScenarioConfig, SweepError, run_sweep
from .topology import CandidatePolicy, TopologyError
from .workload import TRAFFIC_RANGE_MBPS, TrafficRangeWarning, WorkloadError

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3

log = logging.getLogger("fogsplit")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", required=True, metavar="PATH", help="scenario configuration file")
    p.add_argument("--solver", choices=("exact", "greedy", "oracle"))
    p.add_argument("--engine", choices=("highs", "bnb"), help="exact solver engine")
    p.add_argument("--k", metavar="RANGE", help="split counts, e.g. 1..6")
    p.add_argument("--traffic", metavar="RANGE", help="per-demand traffic in Mbps, e.g. 1..10")
    p.add_argument("--candidate-policy", choices=[c.value for c in CandidatePolicy])
    p.add_argument("--core-hops", type=int, metavar="N")
    p.add_argument("--node-limit", type=int, metavar="N")
    p.add_argument("--time-limit", type=float, metavar="SECONDS")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fogsplit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    solve = sub.add_parser("solve", help="run a sweep and write CSV + manifest")
    _add_common(solve)
    solve.add_argument("--out", metavar="PATH", help="CSV output path ('-' for stdout, no manifest)")
    solve.add_argument("--dump-placement", action="store_true", help="print per-demand allocations")
    solve.add_argument("--validate", action="store_true", help="validate the configuration first")
    solve.add_argument("--timings", action="store_true", help="fill the wall_ms CSV column")
    solve.add_argument("--workers", type=int, default=1, metavar="N")

    validate = sub.add_parser("validate", help="check a configuration and print the efficiency table")
    _add_common(validate)
    return parser


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    changes = {}
    if args.solver:
        changes["solver"] = args.solver
    if args.engine:
        changes["engine"] = args.engine
    if args.k:
        changes["k_values"] = parse_range(args.k, int)
    if args.traffic:
        changes["traffic_mbps"] = parse_range(args.traffic)
    if args.candidate_policy:
        changes["candidate_policy"] = CandidatePolicy(args.candidate_policy)
    if args.core_hops is not None:
        changes["core_hops"] = args.core_hops
    if args.node_limit is not None:
        changes["node_limit"] = args.node_limit
    if args.time_limit is not None:
        changes["time_limit"] = args.time_limit
    try:
        return dataclasses.replace(config, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _load(args) -> tuple[ScenarioConfig, str]:
    config = load_config(args.config)
    config = _apply_overrides(config, args)
    return config, Path(args.config).read_text()


def validate_config(config: ScenarioConfig, out=None) -> list[str]:
    """Raise on the first violated invariant; return warnings."""
    out = out or sys.stdout
    notes: list[str] = []
    try:
        profiles = config.profiles()
    except PowerModelError as exc:
        raise ConfigError(f"profile invariant violated: {exc}") from None
    try:
        topology = config.topology()
    except TopologyError as exc:
        raise ConfigError(str(exc)) from None
    lo, hi = TRAFFIC_RANGE_MBPS
    for traffic in config.traffic_points():
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TrafficRangeWarning)
            try:
                demands = config.demands(topology, traffic)
            except (WorkloadError, TopologyError) as exc:
                raise ConfigError(f"demand set at {traffic:g} Mbps: {exc}") from None
        notes += [str(w.message) for w in caught]
        for d in demands:
            if config.explicit_demands and not lo <= d.traffic * 1000 <= hi:
                notes.append(f"demand {d.id}: traffic {d.traffic * 1000:g} Mbps is outside the {lo:g}-{hi:g} Mbps video range")
            # the all-cloud route must carry one stream
            for v in topology.path(d.source, topology.cloud_server):
                net = profiles[topology.kind(v)].network
                if net is not None and d.traffic > net.capacity:
                    raise ConfigError(
                        f"demand {d.id}: {d.traffic} Gbps exceeds {topology.node(v).label} capacity {net.capacity}"
                    )
    print(f"{'device':<18}{'unit':<8}{'derived':>12}{'printed':>10}", file=out)
    for name, unit, derived, printed in efficiency_table(profiles):
        shown = "" if printed is None else f"{printed:g}"
        print(f"{name:<18}{unit:<8}{derived:>12.5g}{shown:>10}", file=out)
    for note in dict.fromkeys(notes):
        print(f"warning: {note}", file=out)
    return notes


def cmd_validate(args) -> int:
    try:
        config, _ = _load(args)
        validate_config(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print("config OK")
    return EXIT_OK


def _dump(rows, out=None):
    out = out or sys.stdout
    for row in rows:
        for i, shares in enumerate(row.placement.shares):
            parts = " ".join(f"{n}:{x:.6g}" for n, x in shares)
            total = sum(x for _, x in shares)
            print(f"traffic_gbps={row.traffic_gbps:.6g} K={row.K} demand={i} {parts} total={total:.6g}", file=out)


def cmd_solve(args) -> int:
    try:
        config, text = _load(args)
        if args.validate:
            validate_config(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    started = _dt.datetime.now(_dt.timezone.utc)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TrafficRangeWarning)
            rows = run_sweep(config, workers=max(1, args.workers))
    except SweepError as exc:
        cause = exc.cause
        kind = "size cap" if isinstance(cause, OracleSizeError) else "solver"
        print(f"{kind} error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (WorkloadError, TopologyError, PowerModelError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finished = _dt.datetime.now(_dt.timezone.utc)

    out = args.out or config.output or f"{config.scenario_id}.csv"
    if out == "-":
        sys.stdout.write(rows_to_csv(rows, args.timings))
    else:
        path = write_csv(out, rows, args.timings)
        effective = repr(sorted((k, repr(v)) for k, v in dataclasses.asdict(config).items()))
        write_manifest(path, {
            "config_checksum": config_checksum(text, effective),
            "catalog_version": CATALOG_VERSION,
            "solver": config.solver,
            "engine": config.engine,
            "node_limit": config.node_limit,
            "time_limit": config.time_limit,
            "candidate_policy": config.candidate_policy.value,
            "started": started.isoformat(),
            "finished": finished.isoformat(),
            "artifact_version": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "rows": len(rows),
            "wall_ms": [round(r.wall_ms, 3) for r in rows],
        })
        print(f"wrote {len(rows)} rows to {path}", file=sys.stderr)
    if args.dump_placement:
        _dump(rows)
    open_cells = [(r.traffic_gbps, r.K) for r in rows if config.solver == "exact" and not r.optimal]
    if open_cells:
        print(f"solver error: {len(open_cells)} cell(s) exhausted the solver budget "
              f"(best incumbents written): {open_cells}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "validate":
            return cmd_validate(args)
        return cmd_solve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
