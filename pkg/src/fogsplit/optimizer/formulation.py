"""Mixed-integer formulation of the split-placement problem.

Variables, per (demand d, candidate host n) pair ``p``:

* ``x[p]`` MIPS of d hosted on n (continuous),
* ``a[p]`` whether n takes part in d (binary);

per dedicated processing node ``y[n]`` (idle CPU power billed) and per
dedicated network device ``z[v]`` (idle network power billed).

Every remote activation ``a[p]`` routes the *full* stream of d along
``path(source(d), n)``, so network cost and network capacity are driven by
``a`` alone; processing cost is linear in ``x`` plus idle charges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse

from ..powermodel import DeviceProfile, processing_capacity
from ..topology import CandidatePolicy, NodeKind, Topology
from ..workload import Demand
from .model import InfeasibleError


@dataclass(frozen=True)
class Pair:
    demand: int  # index into the demand sequence
    node: int
    path: tuple[int, ...]
    upper: float  # largest share n can take of d
    proc_slope: float  # billed W/MIPS on n
    stream_cost: float  # billed proportional network W of routing d's stream to n
    dedicated_net: tuple[int, ...]  # dedicated network devices on the path


class Formulation:
    """Index maps, cost vectors and constraint matrices for one instance."""

    def __init__(
        self,
        topology: Topology,
        profiles: Mapping[NodeKind, DeviceProfile],
        demands: Sequence[Demand],
        K: int,
        policy: CandidatePolicy | str = CandidatePolicy.PEERS,
        min_allocation: float = 1.0,
        candidates: Sequence[Sequence[int]] | None = None,
    ):
        if K < 1:
            raise ValueError(f"K must be >= 1, got {K}")
        self.topology = topology
        self.profiles = profiles
        self.demands = list(demands)
        self.K = int(K)
        self.min_allocation = float(min_allocation)
        policy = CandidatePolicy(policy)

        self.cap: dict[int, float] = {}
        self.proc_idle: dict[int, float] = {}
        self.net_idle: dict[int, float] = {}
        self.net_cap: dict[int, float] = {}

        pairs: list[Pair] = []
        for i, d in enumerate(self.demands):
            cands = candidates[i] if candidates is not None else topology.candidates(d.source, policy)
            for n in sorted(set(cands)):
                kind = topology.kind(n)
                if not kind.can_process:
                    raise ValueError(f"node {n} cannot process")
                cap = processing_capacity(profiles, kind)
                proc = profiles[kind].processing
                if proc is None or cap < self.min_allocation:
                    continue
                self.cap[n] = cap
                self.proc_idle[n] = proc.billed_idle
                path = tuple(topology.path(d.source, n))
                stream = 0.0
                dedicated = []
                for v in path:
                    net = profiles[topology.kind(v)].network
                    if net is None:
                        continue
                    self.net_cap[v] = net.capacity
                    stream += net.billed_slope * d.traffic
                    if not net.shared:
                        dedicated.append(v)
                        self.net_idle[v] = net.billed_idle
                pairs.append(Pair(i, n, path, min(cap, d.cpu), proc.billed_slope, stream, tuple(dedicated)))
        self.pairs = pairs
        self.pairs_of: list[list[int]] = [[] for _ in self.demands]
        for p, pr in enumerate(pairs):
            self.pairs_of[pr.demand].append(p)
        for i, d in enumerate(self.demands):
            if not self.pairs_of[i]:
                raise InfeasibleError(f"demand {d.id} has no candidate host")

        # dedicated processing nodes that appear as hosts
        self.y_nodes = sorted({pr.node for pr in pairs if not profiles[topology.kind(pr.node)].processing.shared})
        self.z_nodes = sorted({v for pr in pairs for v in pr.dedicated_net})
        self._build()

    # ------------------------------------------------------------------
    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    def x_index(self, p: int) -> int:
        return p

    def a_index(self, p: int) -> int:
        return self.n_pairs + p

    def _build(self):
        P = self.n_pairs
        ny, nz = len(self.y_nodes), len(self.z_nodes)
        self.y_pos = {n: 2 * P + j for j, n in enumerate(self.y_nodes)}
        self.z_pos = {v: 2 * P + ny + j for j, v in enumerate(self.z_nodes)}
        nvar = 2 * P + ny + nz
        self.n_vars = nvar

        c = np.zeros(nvar)
        for p, pr in enumerate(self.pairs):
            c[p] = pr.proc_slope
            c[P + p] = pr.stream_cost
        for n in self.y_nodes:
            c[self.y_pos[n]] = self.proc_idle[n]
        for v in self.z_nodes:
            c[self.z_pos[v]] = self.net_idle[v]
        self.c = c

        # equalities: sum_n x[d, n] = cpu(d)
        rows, cols, vals = [], [], []
        for i, plist in enumerate(self.pairs_of):
            for p in plist:
                rows.append(i), cols.append(p), vals.append(1.0)
        self.A_eq = sparse.csr_matrix((vals, (rows, cols)), shape=(len(self.demands), nvar))
        self.b_eq = np.array([d.cpu for d in self.demands], dtype=float)

        rows, cols, vals, rhs = [], [], [], []
        r = 0

        def add(entries, b):
            nonlocal r
            for col, val in entries:
                rows.append(r), cols.append(col), vals.append(val)
            rhs.append(b)
            r += 1

        m = self.min_allocation
        for i, plist in enumerate(self.pairs_of):
            if len(plist) > self.K:
                add([(P + p, 1.0) for p in plist], float(self.K))
        for p, pr in enumerate(self.pairs):
            add([(p, 1.0), (P + p, -pr.upper)], 0.0)
            add([(p, -1.0), (P + p, m)], 0.0)
            if pr.node in self.y_pos:
                add([(P + p, 1.0), (self.y_pos[pr.node], -1.0)], 0.0)
            for v in pr.dedicated_net:
                add([(P + p, 1.0), (self.z_pos[v], -1.0)], 0.0)
        # processing capacity
        by_node: dict[int, list[int]] = {}
        for p, pr in enumerate(self.pairs):
            by_node.setdefault(pr.node, []).append(p)
        for n, plist in sorted(by_node.items()):
            cap = self.cap[n]
            if not np.isfinite(cap):
                continue
            if sum(self.pairs[p].upper for p in plist) <= cap:
                continue
            if n in self.y_pos:
                add([(p, 1.0) for p in plist] + [(self.y_pos[n], -cap)], 0.0)
            else:
                add([(p, 1.0) for p in plist], cap)
        # network capacity: each activation puts the demand's full stream on its path
        through: dict[int, list[int]] = {}
        for p, pr in enumerate(self.pairs):
            for v in pr.path:
                if v in self.net_cap:
                    through.setdefault(v, []).append(p)
        self.net_rows: dict[int, list[int]] = {}
        for v, plist in sorted(through.items()):
            tr = [self.demands[self.pairs[p].demand].traffic for p in plist]
            if sum(tr) <= self.net_cap[v]:
                continue
            self.net_rows[v] = plist
            add([(P + p, t) for p, t in zip(plist, tr)], self.net_cap[v])
        self.A_ub = sparse.csr_matrix((vals, (rows, cols)), shape=(r, nvar))
        self.b_ub = np.array(rhs, dtype=float)

        lb = np.zeros(nvar)
        ub = np.ones(nvar)
        for p, pr in enumerate(self.pairs):
            ub[p] = pr.upper
        self.lb, self.ub = lb, ub
        self.integer_mask = np.zeros(nvar, dtype=bool)
        self.integer_mask[P: 2 * P] = True
        self.integer_mask[2 * P:] = True

    # ------------------------------------------------------------------
    def marginal_cost(self, p: int) -> float:
        """Rough W/MIPS of hosting on pair ``p`` when fully used; orders branching."""
        pr = self.pairs[p]
        fixed = pr.stream_cost + self.proc_idle.get(pr.node, 0.0)
        fixed += sum(self.net_idle[v] for v in pr.dedicated_net)
        return pr.proc_slope + fixed / pr.upper

    def activation_cost(self, a: np.ndarray) -> float:
        """Idle and network cost implied by a 0/1 activation vector over pairs."""
        total = float(np.dot([pr.stream_cost for pr in self.pairs], a))
        ys, zs = set(), set()
        for p, pr in enumerate(self.pairs):
            if a[p] > 0.5:
                if pr.node in self.y_pos:
                    ys.add(pr.node)
                zs.update(pr.dedicated_net)
        total += sum(self.proc_idle[n] for n in ys) + sum(self.net_idle[v] for v in zs)
        return total
