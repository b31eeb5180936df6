"""Continuous allocation once the host sets are fixed.

With activations fixed, the remaining problem is a transportation problem:
ship each demand's MIPS to its active hosts (at least ``min_allocation`` per
host), respect node capacities, minimise the linear processing cost.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .model import InfeasibleError


def allocate(
    cpu: Sequence[float],
    hosts: Sequence[Sequence[int]],
    unit_cost: Mapping[int, float],
    capacity: Mapping[int, float],
    min_allocation: float = 1.0,
) -> list[list[tuple[int, float]]]:
    """Cheapest split of every demand over its fixed host set.

    Returns ``[(node, MIPS), ...]`` per demand with shares summing exactly
    (to rounding) to the demand.  Raises :class:`InfeasibleError` when the
    host sets cannot carry the demands.
    """
    var = [(i, n) for i, hs in enumerate(hosts) for n in sorted(hs)]
    if not var:
        return [[] for _ in cpu]
    nodes = sorted({n for _, n in var})
    m = min_allocation
    nv = len(var)
    c = np.array([unit_cost[n] for _, n in var])
    A_eq = np.zeros((len(cpu), nv))
    for k, (i, _) in enumerate(var):
        A_eq[i, k] = 1.0
    rows, rhs = [], []
    for n in nodes:
        if np.isfinite(capacity[n]):
            row = np.array([1.0 if nn == n else 0.0 for _, nn in var])
            rows.append(row)
            rhs.append(capacity[n])
    bounds = [(m, min(capacity[n], cpu[i])) for i, n in var]
    for (i, n), (lo, hi) in zip(var, bounds):
        if lo > hi:
            raise InfeasibleError(f"host {n} cannot take the minimum share of demand {i}")
    res = linprog(
        c,
        A_ub=np.array(rows) if rows else None,
        b_ub=np.array(rhs) if rhs else None,
        A_eq=A_eq,
        b_eq=np.asarray(cpu, dtype=float),
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        raise InfeasibleError(f"no feasible allocation for the fixed host sets ({res.message})")
    return _clean(res.x, var, cpu, capacity, m)


def _clean(xs, var, cpu, capacity, m):
    shares: list[list[tuple[int, float]]] = [[] for _ in cpu]
    for (i, n), x in zip(var, xs):
        hi = min(capacity[n], cpu[i])
        shares[i].append((n, float(min(max(x, m), hi))))
    # push rounding residue onto the host with the most headroom
    load: dict[int, float] = {}
    for s in shares:
        for n, x in s:
            load[n] = load.get(n, 0.0) + x
    for i, s in enumerate(shares):
        resid = cpu[i] - sum(x for _, x in s)
        if resid == 0.0:
            continue
        k = max(range(len(s)), key=lambda k: (capacity[s[k][0]] - load[s[k][0]], s[k][1], -s[k][0]))
        n, x = s[k]
        s[k] = (n, x + resid)
        load[n] += resid
    return shares
