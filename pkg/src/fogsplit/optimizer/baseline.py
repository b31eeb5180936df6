from __future__ import annotations

import time
from typing import Mapping, Sequence

from ..powermodel import DeviceProfile
from ..topology import NodeKind, Topology
from ..workload import Demand
from .model import Placement, SolveResult, SolverStats, evaluate


def baseline_cloud(
    topology: Topology, profiles: Mapping[NodeKind, DeviceProfile], demands: Sequence[Demand]
) -> SolveResult:
    """Process every demand entirely in the cloud data centre."""
    t0 = time.perf_counter()
    cloud = topology.cloud_server
    placement = Placement.from_lists([[(cloud, d.cpu)] for d in demands])
    result = evaluate(topology, profiles, list(demands), placement, K=1)
    result.stats = SolverStats(solver="baseline", optimal=True, lower_bound=result.total_power,
                               wall_time=time.perf_counter() - t0)
    return result
