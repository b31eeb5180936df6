"""Deterministic greedy placement.

Demands are placed largest first.  For each demand the heuristic repeatedly
picks the host with the lowest incremental power per MIPS it can take, where
the incremental power includes every activation cost not yet paid (idle CPU,
idle network along the route) plus the full stream's proportional network
power.  The K-th host must absorb whatever is left.
"""

from __future__ import annotations

import time
from typing import Mapping, Sequence

from ..powermodel import CAPACITY_TOL, DeviceProfile
from ..topology import CandidatePolicy, NodeKind, Topology
from ..workload import Demand
from .formulation import Formulation
from .model import DEFAULT_MIN_ALLOCATION, InfeasibleError, Placement, SolveResult, SolverStats, evaluate


def solve_greedy(
    topology: Topology,
    profiles: Mapping[NodeKind, DeviceProfile],
    demands: Sequence[Demand],
    K: int,
    candidate_policy: CandidatePolicy | str = CandidatePolicy.PEERS,
    *,
    min_allocation: float = DEFAULT_MIN_ALLOCATION,
    candidates: Sequence[Sequence[int]] | None = None,
) -> SolveResult:
    t0 = time.perf_counter()
    demands = list(demands)
    if not demands:
        from .exact import empty_result

        return empty_result("greedy")
    form = Formulation(topology, profiles, demands, K, candidate_policy, min_allocation, candidates)
    m = form.min_allocation
    cloud = topology.cloud_server

    resid_cpu = dict(form.cap)
    resid_net = dict(form.net_cap)
    proc_on: set[int] = set()
    net_on: set[int] = set()
    shares: list[dict[int, float]] = [{} for _ in demands]

    def stream_fits(path, traffic, reserve=()):
        for v in path:
            if v in resid_net:
                need = traffic * (2 if v in reserve else 1)
                if resid_net[v] + CAPACITY_TOL < need:
                    return False
        return True

    order = sorted(range(len(demands)), key=lambda i: (-demands[i].cpu, demands[i].id))
    for i in order:
        d = demands[i]
        remaining = d.cpu
        fallback = set(topology.path(d.source, cloud)) if cloud != d.source else set()
        while remaining > 0:
            last = len(shares[i]) == K - 1
            best = None
            for p in form.pairs_of[i]:
                pr = form.pairs[p]
                n = pr.node
                if n in shares[i] or resid_cpu[n] < m:
                    continue
                if last:
                    if resid_cpu[n] + CAPACITY_TOL * max(1.0, remaining) < remaining:
                        continue
                    amount = remaining
                else:
                    amount = min(resid_cpu[n], remaining)
                    if 0 < remaining - amount < m:
                        amount = remaining - m
                    if amount < m:
                        continue
                # a partial share must leave room to stream the rest to the cloud
                reserve = fallback if amount < remaining else ()
                if not stream_fits(pr.path, d.traffic, reserve):
                    continue
                extra = pr.stream_cost + pr.proc_slope * amount
                if n not in proc_on:
                    extra += form.proc_idle.get(n, 0.0)
                extra += sum(form.net_idle[v] for v in set(pr.dedicated_net) - net_on)
                score = extra if last else extra / amount
                key = (score, n)
                if best is None or key < best[0]:
                    best = (key, pr, amount)
            if best is None:
                raise InfeasibleError(f"greedy: demand {d.id} cannot be placed with K={K}")
            _, pr, amount = best
            n = pr.node
            shares[i][n] = amount
            remaining = 0.0 if amount >= remaining else remaining - amount
            resid_cpu[n] -= amount
            proc_on.add(n)
            for v in pr.path:
                if v in resid_net:
                    resid_net[v] -= d.traffic
            net_on.update(pr.dedicated_net)
        # exact conservation: fold rounding into the largest share
        total = sum(shares[i].values())
        if total != d.cpu:
            n = max(shares[i], key=lambda n: (shares[i][n], -n))
            shares[i][n] += d.cpu - total

    result = evaluate(topology, profiles, demands, Placement.from_lists(shares), K=K, min_allocation=m)
    result.stats = SolverStats(solver="greedy", optimal=False, wall_time=time.perf_counter() - t0,
                               lower_bound=float("nan"), gap=float("nan"))
    return result
