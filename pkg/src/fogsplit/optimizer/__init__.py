from .baseline import baseline_cloud
from .exact import DEFAULT_NODE_LIMIT, solve_exact
from .formulation import Formulation
from .greedy import solve_greedy
from .model import (
    DEFAULT_MIN_ALLOCATION,
    LAYERS,
    DeviceLoad,
    InfeasibleError,
    Placement,
    SolveResult,
    SolverStats,
    check_placement,
    evaluate,
)
from .oracle import OracleSizeError, brute_force_oracle
from .transport import allocate

SOLVERS = {
    "exact": solve_exact,
    "greedy": solve_greedy,
    "oracle": brute_force_oracle,
}

__all__ = [
    "DEFAULT_MIN_ALLOCATION",
    "DEFAULT_NODE_LIMIT",
    "LAYERS",
    "SOLVERS",
    "DeviceLoad",
    "Formulation",
    "InfeasibleError",
    "OracleSizeError",
    "Placement",
    "SolveResult",
    "SolverStats",
    "allocate",
    "baseline_cloud",
    "brute_force_oracle",
    "check_placement",
    "evaluate",
    "solve_exact",
    "solve_greedy",
]
