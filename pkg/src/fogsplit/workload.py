"""Homogeneous IoT video-analytics demands.

A demand's CPU requirement is proportional to its traffic: at ``intensity``
instructions per bit, ``traffic_mbps`` megabits per second need
``traffic_mbps * intensity`` MIPS (1 Mbps at 1000 instr/bit is 1000 MIPS).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

from .topology import NodeKind, Topology

DEFAULT_INTENSITY = 1000.0
#: WiFi (802.11g) uplink of one IoT device, Gbps
WIFI_CAPACITY_GBPS = 0.054
#: traffic range covered by the 640x360 .. 1280x720 @ 10 fps video streams
TRAFFIC_RANGE_MBPS = (1.0, 10.0)


class WorkloadError(ValueError):
    pass


class TrafficRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Demand:
    id: int
    source: int
    cpu: float  # MIPS
    traffic: float  # Gbps

    def __post_init__(self):
        if not (self.cpu > 0 and self.traffic > 0):
            raise WorkloadError(f"demand {self.id}: cpu and traffic must both be positive")
        if self.traffic > WIFI_CAPACITY_GBPS + 1e-12:
            raise WorkloadError(
                f"demand {self.id}: traffic {self.traffic} Gbps exceeds the {WIFI_CAPACITY_GBPS} Gbps uplink"
            )


@dataclass(frozen=True)
class DemandSet:
    demands: tuple[Demand, ...]
    active_iot_count: int

    def __iter__(self):
        return iter(self.demands)

    def __len__(self):
        return len(self.demands)

    def __getitem__(self, i):
        return self.demands[i]

    @property
    def total_cpu(self) -> float:
        return sum(d.cpu for d in self.demands)


def cpu_from_traffic(traffic_mbps: float, intensity: float = DEFAULT_INTENSITY) -> float:
    """MIPS needed to analyse ``traffic_mbps`` at ``intensity`` instructions/bit."""
    if traffic_mbps < 0:
        raise WorkloadError(f"negative traffic {traffic_mbps}")
    if not intensity > 0:
        raise WorkloadError(f"intensity must be positive, got {intensity}")
    # Mbit/s * instr/bit = 1e6 instr/s = 1 MIPS
    return traffic_mbps * intensity


def demand_from_traffic(
    demand_id: int, source: int, traffic_mbps: float, intensity: float = DEFAULT_INTENSITY
) -> Demand:
    return Demand(demand_id, source, cpu_from_traffic(traffic_mbps, intensity), traffic_mbps / 1000.0)


def make_demand_set(
    topology: Topology,
    active_iot_count: int,
    traffic_mbps: float,
    intensity: float = DEFAULT_INTENSITY,
    sources: Sequence[int] | None = None,
) -> DemandSet:
    """One homogeneous demand per active IoT device.

    Sources default to the first ``active_iot_count`` IoT ids in site-major
    order.  Traffic outside the 1-10 Mbps video range is allowed but warned
    about.
    """
    iots = topology.iot_ids
    if sources is None:
        if not 1 <= active_iot_count <= len(iots):
            raise WorkloadError(f"active_iot_count must be in 1..{len(iots)}, got {active_iot_count}")
        sources = iots[:active_iot_count]
    else:
        sources = list(sources)
        if len(sources) != active_iot_count:
            raise WorkloadError("explicit source list length must equal active_iot_count")
        if len(set(sources)) != len(sources):
            raise WorkloadError("duplicate demand sources")
        for s in sources:
            if topology.kind(s) is not NodeKind.IOT_DEVICE:
                raise WorkloadError(f"demand source {s} is not an IoT device")
    lo, hi = TRAFFIC_RANGE_MBPS
    if not lo <= traffic_mbps <= hi:
        warnings.warn(
            f"traffic {traffic_mbps} Mbps is outside the {lo:g}-{hi:g} Mbps video range",
            TrafficRangeWarning,
            stacklevel=2,
        )
    demands = tuple(demand_from_traffic(i, s, traffic_mbps, intensity) for i, s in enumerate(sources))
    return DemandSet(demands, len(demands))
