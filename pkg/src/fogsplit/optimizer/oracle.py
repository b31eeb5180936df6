"""Exhaustive verification oracle for tiny instances.

Enumerates every host set of size 1..K for every demand.  For each
combination the continuous allocation is a linear program over a small
transportation polytope; its optimum sits at a vertex, so the oracle lists
all vertices by brute-force basis enumeration (no LP solver involved) and
bills the cheapest one through :func:`evaluate`.
"""

from __future__ import annotations

import itertools
import math
import time
from typing import Mapping, Sequence

import numpy as np

from ..powermodel import DeviceProfile, processing_capacity
from ..topology import CandidatePolicy, NodeKind, Topology
from ..workload import Demand
from .model import DEFAULT_MIN_ALLOCATION, InfeasibleError, Placement, SolveResult, SolverStats, evaluate

MAX_DEMANDS = 2
MAX_CANDIDATES = 8
MAX_K = 3


class OracleSizeError(ValueError):
    pass


def transport_vertices(cpu, hosts, capacity, min_allocation):
    """All vertices of {x >= m, sum_n x[d,n] = cpu[d], sum_d x[d,n] <= cap[n]}.

    Yields dicts ``{(d, n): x}``.
    """
    var = [(d, n) for d, hs in enumerate(hosts) for n in hs]
    nv = len(var)
    m = min_allocation
    # shift x = m + s, s >= 0
    eq = np.zeros((len(cpu), nv))
    b_eq = np.empty(len(cpu))
    for d in range(len(cpu)):
        b_eq[d] = cpu[d] - m * len(hosts[d])
        if b_eq[d] < -1e-9:
            return
    for k, (d, _) in enumerate(var):
        eq[d, k] = 1.0
    ineq_rows, ineq_rhs = [], []
    for k in range(nv):
        row = np.zeros(nv)
        row[k] = -1.0
        ineq_rows.append(row)
        ineq_rhs.append(0.0)
    for n in sorted({n for _, n in var}):
        cols = [k for k, (_, nn) in enumerate(var) if nn == n]
        if not math.isfinite(capacity[n]):
            continue
        room = capacity[n] - m * len(cols)
        if room < -1e-9:
            return
        # redundant when every demand touching n fits together
        if sum(b_eq[var[k][0]] for k in cols) <= room:
            continue
        row = np.zeros(nv)
        row[cols] = 1.0
        ineq_rows.append(row)
        ineq_rhs.append(room)
    G = np.array(ineq_rows)
    h = np.array(ineq_rhs)
    need = nv - len(cpu)
    tights = np.array(list(itertools.combinations(range(len(G)), need)), dtype=int)
    if tights.size == 0:
        tights = tights.reshape(-1 if need else 1, need)
    if len(tights) == 0:
        return
    # one square system per choice of tight inequalities, solved as a batch
    A = np.concatenate([np.broadcast_to(eq, (len(tights),) + eq.shape), G[tights]], axis=1)
    b = np.concatenate([np.broadcast_to(b_eq, (len(tights), len(b_eq))), h[tights]], axis=1)
    ok = np.abs(np.linalg.det(A)) > 1e-12
    if not ok.any():
        return
    sol = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
    feasible = np.all(sol @ G.T <= h + 1e-7 * np.maximum(1.0, np.abs(h)), axis=1)
    for s in np.unique(np.round(sol[feasible], 7), axis=0):
        yield {v: float(m + max(sk, 0.0)) for v, sk in zip(var, s)}


def brute_force_oracle(
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
    if K < 1:
        raise ValueError("K must be >= 1")
    if len(demands) > MAX_DEMANDS or K > MAX_K:
        raise OracleSizeError(
            f"oracle is limited to {MAX_DEMANDS} demands and K <= {MAX_K} (got {len(demands)} demands, K={K})"
        )
    if candidates is None:
        candidates = [topology.candidates(d.source, candidate_policy) for d in demands]
    union = sorted({n for c in candidates for n in c})
    if len(union) > MAX_CANDIDATES:
        raise OracleSizeError(f"oracle is limited to {MAX_CANDIDATES} candidate nodes (got {len(union)})")
    if not demands:
        from .exact import empty_result

        return empty_result("oracle")

    capacity = {n: processing_capacity(profiles, topology.kind(n)) for n in union}
    unit = {}
    for n in union:
        proc = profiles[topology.kind(n)].processing
        unit[n] = proc.pue * proc.slope

    per_demand = []
    for c in candidates:
        hosts = sorted(n for n in c if capacity[n] >= min_allocation)
        sets = [s for k in range(1, K + 1) for s in itertools.combinations(hosts, k)]
        per_demand.append(sets)

    best: SolveResult | None = None
    combos = 0
    for combo in itertools.product(*per_demand):
        combos += 1
        choice = None
        for vertex in transport_vertices([d.cpu for d in demands], combo, capacity, min_allocation):
            cost = sum(unit[n] * x for (_, n), x in vertex.items())
            if choice is None or cost < choice[0] - 1e-12:
                choice = (cost, vertex)
        if choice is None:
            continue
        shares = [dict() for _ in demands]
        for (d, n), x in choice[1].items():
            shares[d][n] = x
        for d, dem in enumerate(demands):
            # exact conservation after the vertex solve
            n = max(shares[d], key=lambda n: (capacity[n] - shares[d][n], -n))
            shares[d][n] += dem.cpu - sum(shares[d].values())
        try:
            res = evaluate(topology, profiles, demands, Placement.from_lists(shares), K=K,
                           min_allocation=min_allocation * (1 - 1e-9))
        except InfeasibleError:
            continue
        if best is None or res.total_power < best.total_power - 1e-12 * max(1.0, best.total_power):
            best = res
    if best is None:
        raise InfeasibleError("oracle: no feasible placement")
    best.stats = SolverStats(solver="oracle", optimal=True, nodes_explored=combos,
                             lower_bound=best.total_power, wall_time=time.perf_counter() - t0)
    return best
