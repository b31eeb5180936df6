"""Placement types and the power evaluator shared by every solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..powermodel import (
    CAPACITY_TOL,
    CapacityError,
    DeviceProfile,
    processing_capacity,
    subsystem_power,
)
from ..topology import NodeKind, Topology
from ..workload import Demand

LAYERS = ("iot", "accessfog", "edgefog", "metro", "core", "cloud")

LAYER_OF = {
    NodeKind.IOT_DEVICE: "iot",
    NodeKind.ACCESS_FOG: "accessfog",
    NodeKind.EDGE_FOG: "edgefog",
    NodeKind.METRO_SWITCH: "metro",
    NodeKind.METRO_ROUTER: "metro",
    NodeKind.CORE_NODE: "core",
    NodeKind.CLOUD_LAN_SWITCH: "cloud",
    NodeKind.CLOUD_LAN_ROUTER: "cloud",
    NodeKind.CLOUD_SERVER: "cloud",
}

#: flow conservation slack, MIPS
CONSERVATION_TOL = 1e-9
DEFAULT_MIN_ALLOCATION = 1.0


class InfeasibleError(RuntimeError):
    """No feasible placement, or a placement violating a constraint."""


@dataclass(frozen=True)
class Placement:
    """``shares[i]`` lists ``(node id, MIPS)`` for the i-th demand, ascending node id."""

    shares: tuple[tuple[tuple[int, float], ...], ...]

    @classmethod
    def from_lists(cls, shares: Sequence[Mapping[int, float] | Sequence[tuple[int, float]]]) -> "Placement":
        norm = []
        for s in shares:
            items = s.items() if isinstance(s, Mapping) else s
            norm.append(tuple(sorted((int(n), float(x)) for n, x in items if x > 0)))
        return cls(tuple(norm))

    def hosts(self, i: int) -> list[int]:
        return [n for n, _ in self.shares[i]]

    def __len__(self):
        return len(self.shares)


@dataclass
class DeviceLoad:
    traffic: float = 0.0  # Gbps
    cpu: float = 0.0  # MIPS
    network_active: bool = False
    processing_active: bool = False


@dataclass
class SolverStats:
    solver: str = "evaluate"
    optimal: bool = True
    nodes_explored: int = 0
    lower_bound: float = float("nan")
    gap: float = 0.0
    wall_time: float = 0.0
    message: str = ""


@dataclass
class SolveResult:
    placement: Placement
    total_power: float
    network_power: float
    processing_power: float
    layers: dict[str, float]
    ledger: dict[int, DeviceLoad] = field(repr=False)
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def optimal(self) -> bool:
        return self.stats.optimal


def check_placement(demands: Sequence[Demand], placement: Placement, K: int | None = None,
                    min_allocation: float = 0.0) -> None:
    """Flow conservation, split cardinality and minimum share size."""
    if len(placement) != len(demands):
        raise InfeasibleError(f"placement covers {len(placement)} demands, expected {len(demands)}")
    for d, shares in zip(demands, placement.shares):
        total = sum(x for _, x in shares)
        if abs(total - d.cpu) > CONSERVATION_TOL * max(1.0, d.cpu):
            raise InfeasibleError(f"demand {d.id}: allocated {total!r} MIPS of {d.cpu!r}")
        if K is not None and len(shares) > K:
            raise InfeasibleError(f"demand {d.id}: {len(shares)} hosts exceeds K={K}")
        hosts = [n for n, _ in shares]
        if len(set(hosts)) != len(hosts):
            raise InfeasibleError(f"demand {d.id}: repeated host")
        for n, x in shares:
            if x < min_allocation * (1 - 1e-12):
                raise InfeasibleError(f"demand {d.id}: share {x} on node {n} below minimum {min_allocation}")


def build_ledger(topology: Topology, demands: Sequence[Demand], placement: Placement) -> dict[int, DeviceLoad]:
    ledger: dict[int, DeviceLoad] = {}
    for d, shares in zip(demands, placement.shares):
        for n, x in shares:
            if not topology.kind(n).can_process:
                raise InfeasibleError(f"node {n} ({topology.kind(n).value}) cannot process")
            host = ledger.setdefault(n, DeviceLoad())
            host.cpu += x
            host.processing_active = True
            for v in topology.path(d.source, n):
                dev = ledger.setdefault(v, DeviceLoad())
                dev.traffic += d.traffic
                dev.network_active = True
    return ledger


def evaluate(
    topology: Topology,
    profiles: Mapping[NodeKind, DeviceProfile],
    demands: Sequence[Demand],
    placement: Placement,
    K: int | None = None,
    min_allocation: float = 0.0,
) -> SolveResult:
    """Power drawn by ``placement``.

    Builds the per-device traffic/CPU ledger from the routed streams, then
    bills every device through :func:`subsystem_power`.  Raises
    :class:`InfeasibleError` naming the device on any capacity violation.
    """
    check_placement(demands, placement, K, min_allocation)
    ledger = build_ledger(topology, demands, placement)
    layers = dict.fromkeys(LAYERS, 0.0)
    network = processing = 0.0
    for v in sorted(ledger):
        load = ledger[v]
        kind = topology.kind(v)
        prof = profiles[kind]
        label = topology.node(v).label
        if load.traffic > 0:
            if prof.network is not None:
                try:
                    p = subsystem_power(prof.network, load.traffic, load.network_active)
                except CapacityError as exc:
                    raise InfeasibleError(f"{label}: network {exc}") from None
                network += p
                layers[LAYER_OF[kind]] += p
        if load.processing_active:
            cap = processing_capacity(profiles, kind)
            if load.cpu > cap + CAPACITY_TOL * max(1.0, cap):
                raise InfeasibleError(f"{label}: hosted {load.cpu} MIPS exceeds capacity {cap}")
            proc = prof.processing
            if kind is NodeKind.CLOUD_SERVER:
                # unbounded pool billed at the per-server proportional rate
                p = proc.pue * (proc.slope * load.cpu + (0.0 if proc.shared else proc.idle_power))
            else:
                p = subsystem_power(proc, min(load.cpu, proc.capacity), True)
            processing += p
            layers[LAYER_OF[kind]] += p
    return SolveResult(
        placement=placement,
        total_power=network + processing,
        network_power=network,
        processing_power=processing,
        layers=layers,
        ledger=ledger,
    )
