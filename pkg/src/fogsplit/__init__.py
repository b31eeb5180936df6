"""Energy-aware splitting of IoT video-analytics demands over IoT, fog and cloud."""

from .optimizer import (
    InfeasibleError,
    Placement,
    SolveResult,
    baseline_cloud,
    brute_force_oracle,
    evaluate,
    solve_exact,
    solve_greedy,
)
from .powermodel import DEFAULT_CATALOG, DeviceProfile, Sharing, SubsystemProfile
from .topology import CandidatePolicy, NodeKind, Topology, build
from .workload import Demand, DemandSet, cpu_from_traffic, make_demand_set

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CATALOG",
    "CandidatePolicy",
    "Demand",
    "DemandSet",
    "DeviceProfile",
    "InfeasibleError",
    "NodeKind",
    "Placement",
    "Sharing",
    "SolveResult",
    "SubsystemProfile",
    "Topology",
    "baseline_cloud",
    "brute_force_oracle",
    "build",
    "cpu_from_traffic",
    "evaluate",
    "make_demand_set",
    "solve_exact",
    "solve_greedy",
]
