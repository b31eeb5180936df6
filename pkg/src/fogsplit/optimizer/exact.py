"""Exact solvers: branch-and-bound over host activations.

Two engines share :class:`Formulation`:

* ``"highs"`` (default) hands the mixed-integer program to the HiGHS
  branch-and-cut solver shipped with SciPy;
* ``"bnb"`` is a plain LP-based branch-and-bound, adequate for small
  instances and kept as an independent route.

In the ``"bnb"`` engine each node of the search tree fixes some activation
variables to 0 or 1 and bounds the rest by the LP relaxation of :class:`Formulation`, where
fractional activations pay a matching fraction of idle and network costs.
Whenever the relaxation comes back integral in the activations, the host sets
are handed to :func:`transport.allocate` and the resulting placement is billed
by :func:`evaluate`.
"""

from __future__ import annotations

import heapq
import logging
import math
import time
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from ..powermodel import DeviceProfile
from ..topology import CandidatePolicy, NodeKind, Topology
from ..workload import Demand
from .formulation import Formulation
from .model import (
    DEFAULT_MIN_ALLOCATION,
    InfeasibleError,
    Placement,
    SolveResult,
    SolverStats,
    evaluate,
)
from .transport import allocate

log = logging.getLogger(__name__)

INT_TOL = 1e-6
DEFAULT_NODE_LIMIT = 20000


class _LP:
    def __init__(self, form: Formulation):
        self.form = form
        self.calls = 0

    def solve(self, fixed: Mapping[int, int]):
        f = self.form
        lb, ub = f.lb.copy(), f.ub.copy()
        P = f.n_pairs
        for p, v in fixed.items():
            lb[P + p] = ub[P + p] = float(v)
            if v == 0:
                ub[p] = 0.0
        self.calls += 1
        res = linprog(
            f.c,
            A_ub=f.A_ub if f.A_ub.shape[0] else None,
            b_ub=f.b_ub if f.A_ub.shape[0] else None,
            A_eq=f.A_eq,
            b_eq=f.b_eq,
            bounds=np.column_stack([lb, ub]),
            method="highs",
        )
        if res.status == 2:
            return None
        if res.status != 0:
            raise RuntimeError(f"LP relaxation failed: {res.message}")
        return res.fun, res.x


def _host_sets(form: Formulation, active: Sequence[int]) -> list[list[int]]:
    hosts: list[list[int]] = [[] for _ in form.demands]
    for p in active:
        hosts[form.pairs[p].demand].append(form.pairs[p].node)
    return hosts


def realise(form: Formulation, active: Sequence[int]) -> SolveResult | None:
    """Cheapest placement using exactly the activated pairs, or None if infeasible."""
    hosts = _host_sets(form, active)
    if any(not h or len(h) > form.K for h in hosts):
        return None
    unit = {pr.node: pr.proc_slope for pr in form.pairs}
    try:
        shares = allocate([d.cpu for d in form.demands], hosts, unit, form.cap, form.min_allocation)
        return evaluate(form.topology, form.profiles, form.demands, Placement.from_lists(shares),
                        K=form.K, min_allocation=form.min_allocation)
    except InfeasibleError:
        return None


def empty_result(solver: str) -> SolveResult:
    return SolveResult(Placement(()), 0.0, 0.0, 0.0, dict.fromkeys(
        ("iot", "accessfog", "edgefog", "metro", "core", "cloud"), 0.0), {}, SolverStats(solver=solver))


def solve_exact(
    topology: Topology,
    profiles: Mapping[NodeKind, DeviceProfile],
    demands: Sequence[Demand],
    K: int,
    candidate_policy: CandidatePolicy | str = CandidatePolicy.PEERS,
    *,
    min_allocation: float = DEFAULT_MIN_ALLOCATION,
    node_limit: int | None = DEFAULT_NODE_LIMIT,
    time_limit: float | None = None,
    candidates: Sequence[Sequence[int]] | None = None,
    rel_gap: float = 1e-9,
    engine: str = "highs",
) -> SolveResult:
    """Provably optimal split placement (unless a budget runs out).

    On budget exhaustion the best placement found so far (never worse than
    the greedy heuristic) is returned with ``stats.optimal = False`` and the
    remaining bound gap.
    """
    demands = list(demands)
    if not demands:
        return empty_result("exact")
    if engine == "highs":
        return _solve_highs(topology, profiles, demands, K, candidate_policy, min_allocation,
                            node_limit, time_limit, candidates, rel_gap)
    if engine == "bnb":
        return _solve_bnb(topology, profiles, demands, K, candidate_policy, min_allocation,
                          node_limit, time_limit, candidates, rel_gap)
    raise ValueError(f"unknown engine {engine!r}")


def _greedy_incumbent(topology, profiles, demands, K, policy, min_allocation, candidates):
    from .greedy import solve_greedy

    try:
        return solve_greedy(topology, profiles, demands, K, policy,
                            min_allocation=min_allocation, candidates=candidates)
    except InfeasibleError:
        return None


def _solve_highs(topology, profiles, demands, K, policy, min_allocation, node_limit, time_limit,
                 candidates, rel_gap) -> SolveResult:
    t0 = time.perf_counter()
    form = Formulation(topology, profiles, demands, K, policy, min_allocation, candidates)
    P = form.n_pairs
    constraints = [LinearConstraint(form.A_eq, form.b_eq, form.b_eq)]
    if form.A_ub.shape[0]:
        constraints.append(LinearConstraint(form.A_ub, -np.inf, form.b_ub))
    options = {"mip_rel_gap": rel_gap}
    if node_limit is not None:
        options["node_limit"] = int(node_limit)
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(form.c, constraints=constraints, integrality=form.integer_mask.astype(int),
               bounds=Bounds(form.lb, form.ub), options=options)
    if res.status == 2:
        raise InfeasibleError("no feasible placement exists")
    best = None
    if res.x is not None:
        best = realise(form, [p for p in range(P) if res.x[P + p] > 0.5])
    proven = res.status == 0
    greedy = None if proven and best is not None else _greedy_incumbent(
        topology, profiles, demands, K, policy, min_allocation, candidates)
    if greedy is not None and (best is None or greedy.total_power < best.total_power):
        best = greedy
    if best is None:
        raise InfeasibleError(f"HiGHS returned no solution ({res.message})")
    lower = getattr(res, "mip_dual_bound", None)
    if lower is None or not np.isfinite(lower):
        lower = float("nan")
    if proven:
        lower = min(lower, best.total_power) if np.isfinite(lower) else best.total_power
    gap = (best.total_power - lower) / max(abs(best.total_power), 1e-12) if np.isfinite(lower) else float("nan")
    best.stats = SolverStats(
        solver="exact",
        optimal=proven,
        nodes_explored=int(getattr(res, "mip_node_count", 0) or 0),
        lower_bound=lower,
        gap=max(gap, 0.0) if np.isfinite(gap) else gap,
        wall_time=time.perf_counter() - t0,
        message="" if proven else str(res.message),
    )
    return best


def _solve_bnb(topology, profiles, demands, K, candidate_policy, min_allocation, node_limit, time_limit,
               candidates, rel_gap) -> SolveResult:
    t0 = time.perf_counter()
    form = Formulation(topology, profiles, demands, K, candidate_policy, min_allocation, candidates)
    lp = _LP(form)
    P = form.n_pairs

    best = _greedy_incumbent(topology, profiles, demands, K, candidate_policy, min_allocation, candidates)
    best_val = best.total_power if best is not None else math.inf

    # branching order: demands by descending cpu then id, hosts by ascending marginal cost then id
    demand_rank = sorted(range(len(demands)), key=lambda i: (-demands[i].cpu, demands[i].id))
    order: list[int] = []
    for i in demand_rank:
        order += sorted(form.pairs_of[i], key=lambda p: (form.marginal_cost(p), form.pairs[p].node))

    root = lp.solve({})
    if root is None:
        raise InfeasibleError("LP relaxation infeasible at the root: no placement exists")
    heap: list = [(root[0], 0, 0, (), root)]  # (bound, -depth, seq, fixings, lp)
    seq = 1
    explored = 0
    optimal = True
    message = ""

    def cutoff(val: float) -> float:
        return best_val - rel_gap * max(1.0, abs(best_val))

    while heap:
        bound, neg_depth, _, fixings, solved = heapq.heappop(heap)
        if bound >= cutoff(best_val):
            continue
        if (node_limit is not None and explored >= node_limit) or (
            time_limit is not None and time.perf_counter() - t0 > time_limit
        ):
            heapq.heappush(heap, (bound, neg_depth, -1, fixings, solved))
            optimal = False
            message = "budget exhausted"
            break
        fixed = dict(fixings)
        if solved is None:
            solved = lp.solve(fixed)
            if solved is None:
                explored += 1
                continue
        explored += 1
        val, xs = solved
        if val >= cutoff(best_val):
            continue
        a = xs[P: 2 * P]
        frac = [p for p in order if INT_TOL < a[p] < 1 - INT_TOL]
        if not frac:
            cand = realise(form, [p for p in range(P) if a[p] > 0.5])
            if cand is not None and cand.total_power < best_val:
                best, best_val = cand, cand.total_power
            continue
        # rounding heuristic: keep the support, trimmed to the K largest shares
        support = _round_support(form, xs) if explored <= 16 or explored % 16 == 0 else None
        if support is not None:
            cand = realise(form, support)
            if cand is not None and cand.total_power < best_val - rel_gap * max(1.0, best_val):
                best, best_val = cand, cand.total_power
        p = frac[0]
        depth = -neg_depth + 1
        for v in (1, 0):
            child = fixings + ((p, v),)
            heapq.heappush(heap, (val, -depth, seq, child, None))
            seq += 1

    if best is None:
        raise InfeasibleError("no feasible placement found")
    open_bounds = [h[0] for h in heap if h[0] < cutoff(best_val)]
    optimal = not open_bounds
    lower = min(min(open_bounds), best_val) if open_bounds else best_val
    best.stats = SolverStats(
        solver="exact",
        optimal=optimal,
        nodes_explored=explored,
        lower_bound=lower,
        gap=(best_val - lower) / max(abs(best_val), 1e-12),
        wall_time=time.perf_counter() - t0,
        message=message if not optimal else "",
    )
    log.debug("exact: K=%d nodes=%d lp=%d total=%.6f optimal=%s", K, explored, lp.calls, best_val, optimal)
    return best


def _round_support(form: Formulation, xs: np.ndarray) -> list[int] | None:
    active = []
    for plist in form.pairs_of:
        used = [p for p in plist if xs[p] > 1e-7]
        used.sort(key=lambda p: (-xs[p], form.pairs[p].node))
        active += used[: form.K]
    return sorted(active) if active else None
