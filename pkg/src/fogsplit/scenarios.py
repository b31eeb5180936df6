"""Demand-size x split-count sweeps against the all-cloud baseline."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .optimizer import (
    DEFAULT_MIN_ALLOCATION,
    DEFAULT_NODE_LIMIT,
    InfeasibleError,
    LAYERS,
    Placement,
    SolveResult,
    baseline_cloud,
    brute_force_oracle,
    solve_exact,
    solve_greedy,
)
from .powermodel import DEFAULT_CATALOG, DeviceProfile, override_catalog
from .topology import CandidatePolicy, NodeKind, Topology, build
from .workload import DEFAULT_INTENSITY, DemandSet, demand_from_traffic, make_demand_set

log = logging.getLogger(__name__)


class SweepError(RuntimeError):
    def __init__(self, traffic_mbps: float, K: int, cause: Exception):
        super().__init__(f"traffic={traffic_mbps:g} Mbps, K={K}: {cause}")
        self.traffic_mbps = traffic_mbps
        self.K = K
        self.cause = cause


@dataclass
class ScenarioConfig:
    scenario_id: str = "scenario"
    site_count: int = 4
    iot_per_site: int = 5
    core_hops: int = 4
    active_iot_count: int = 5
    sources: tuple[int, ...] | None = None
    # explicit (source, traffic Mbps) demands; replaces the generated set and the traffic sweep
    explicit_demands: tuple[tuple[int, float], ...] | None = None
    intensity: float = DEFAULT_INTENSITY
    traffic_mbps: tuple[float, ...] = tuple(float(t) for t in range(1, 11))
    k_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    solver: str = "exact"
    engine: str = "highs"
    node_limit: int | None = DEFAULT_NODE_LIMIT
    time_limit: float | None = None
    candidate_policy: CandidatePolicy = CandidatePolicy.PEERS
    min_allocation: float = DEFAULT_MIN_ALLOCATION
    profile_overrides: Mapping[tuple[NodeKind, str, str], float | str] = field(default_factory=dict)
    output: str | None = None

    def __post_init__(self):
        self.candidate_policy = CandidatePolicy(self.candidate_policy)
        if not self.k_values or not self.traffic_mbps:
            raise ValueError("sweeps must be non-empty")
        if any(k < 1 for k in self.k_values):
            raise ValueError("K values must be >= 1")
        if self.solver not in ("exact", "greedy", "oracle"):
            raise ValueError(f"unknown solver {self.solver!r}")

    def topology(self) -> Topology:
        return build(self.site_count, self.iot_per_site, self.core_hops)

    def profiles(self) -> dict[NodeKind, DeviceProfile]:
        return override_catalog(DEFAULT_CATALOG, self.profile_overrides)

    def traffic_points(self) -> tuple[float, ...]:
        if self.explicit_demands:
            return (max(t for _, t in self.explicit_demands),)
        return self.traffic_mbps

    def demands(self, topology: Topology, traffic_mbps: float) -> DemandSet:
        if self.explicit_demands:
            ds = tuple(demand_from_traffic(i, s, t, self.intensity) for i, (s, t) in enumerate(self.explicit_demands))
            return DemandSet(ds, len(ds))
        return make_demand_set(topology, self.active_iot_count, traffic_mbps, self.intensity, self.sources)


@dataclass
class ResultRow:
    scenario: str
    demand_mips: float
    traffic_gbps: float
    K: int
    solver: str
    total_w: float
    network_w: float
    processing_w: float
    iot_w: float
    accessfog_w: float
    edgefog_w: float
    metro_w: float
    core_w: float
    cloud_w: float
    baseline_w: float
    savings_vs_cloud_pct: float
    savings_vs_k1_pct: float
    optimal: bool
    wall_ms: float | None = None
    placement: Placement | None = field(default=None, compare=False, repr=False)


def savings(total: float, baseline: float) -> float:
    """Percentage of ``baseline`` power saved by ``total``."""
    if not baseline > 0:
        raise ValueError(f"baseline must be positive, got {baseline}")
    return 100.0 * (baseline - total) / baseline


def marginal_savings(rows: Sequence[ResultRow]) -> dict[int, float]:
    """Saving of each K over the next smaller K in ``rows`` (one traffic value)."""
    by_k = sorted(rows, key=lambda r: r.K)
    return {b.K: savings(b.total_w, a.total_w) for a, b in zip(by_k, by_k[1:])}


def solve_cell(config: ScenarioConfig, topology, profiles, demands, K: int, solver: str | None = None) -> SolveResult:
    solver = solver or config.solver
    kw = dict(min_allocation=config.min_allocation)
    if solver == "exact":
        return solve_exact(topology, profiles, demands, K, config.candidate_policy, engine=config.engine,
                           node_limit=config.node_limit, time_limit=config.time_limit, **kw)
    if solver == "greedy":
        return solve_greedy(topology, profiles, demands, K, config.candidate_policy, **kw)
    if solver == "oracle":
        return brute_force_oracle(topology, profiles, demands, K, config.candidate_policy, **kw)
    raise ValueError(f"unknown solver {solver!r}")


def _mean(values: Sequence[float]) -> float:
    # homogeneous sets report the exact common value, not a rounded average
    if len(set(values)) == 1:
        return values[0]
    return math.fsum(values) / len(values)


def _sweep_traffic(config: ScenarioConfig, traffic: float) -> list[ResultRow]:
    topology = config.topology()
    profiles = config.profiles()
    demands = list(config.demands(topology, traffic))
    baseline = baseline_cloud(topology, profiles, demands)
    results: dict[int, SolveResult] = {}
    for K in sorted(set(config.k_values) | {1}):
        try:
            res = solve_cell(config, topology, profiles, demands, K)
        except (InfeasibleError, ValueError) as exc:
            raise SweepError(traffic, K, exc) from exc
        # a smaller-K placement stays feasible; keep it when a budget-limited solve did worse
        prev = [r for k, r in results.items() if k < K]
        if prev and not res.optimal:
            incumbent = min(prev, key=lambda r: r.total_power)
            if incumbent.total_power < res.total_power:
                log.info("K=%d at %g Mbps: reusing the K=%d placement", K, traffic,
                         next(k for k, r in results.items() if r is incumbent))
                stats = res.stats
                res = incumbent
                res = SolveResult(res.placement, res.total_power, res.network_power, res.processing_power,
                                  res.layers, res.ledger, stats)
        results[K] = res

    k1 = results[1].total_power
    mips = _mean([d.cpu for d in demands])
    gbps = _mean([d.traffic for d in demands])
    rows = []
    for K in config.k_values:
        res = results[K]
        rows.append(ResultRow(
            scenario=config.scenario_id,
            demand_mips=mips,
            traffic_gbps=gbps,
            K=K,
            solver=config.solver,
            total_w=res.total_power,
            network_w=res.network_power,
            processing_w=res.processing_power,
            **{f"{layer}_w": res.layers[layer] for layer in LAYERS},
            baseline_w=baseline.total_power,
            savings_vs_cloud_pct=savings(res.total_power, baseline.total_power),
            savings_vs_k1_pct=savings(res.total_power, k1) if k1 > 0 else 0.0,
            optimal=res.optimal,
            wall_ms=1000.0 * res.stats.wall_time,
            placement=res.placement,
        ))
    return rows


def run_sweep(config: ScenarioConfig, workers: int = 1) -> list[ResultRow]:
    """One row per (traffic, K) cell, ordered by traffic then K.

    The all-cloud baseline is computed once per traffic value.  With
    ``workers > 1`` traffic values are solved in separate processes; the
    output order does not depend on completion order.
    """
    points = sorted(config.traffic_points())
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_traffic, [config] * len(points), points))
    else:
        chunks = [_sweep_traffic(config, t) for t in points]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.traffic_gbps, r.K))
    return rows
