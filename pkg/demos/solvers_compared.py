"""
Exact, greedy and exhaustive
============================

The exact solver is checked against exhaustive enumeration on instances
small enough to enumerate, and compared with the greedy heuristic on the
five-camera scenario.
"""

# %%
import time

from fogsplit import DEFAULT_CATALOG, brute_force_oracle, build, make_demand_set, solve_exact, solve_greedy

tiny = build(1, 2, 2)
demands = make_demand_set(tiny, 2, 6.0)
for K in (1, 2, 3):
    o = brute_force_oracle(tiny, DEFAULT_CATALOG, demands, K)
    h = solve_exact(tiny, DEFAULT_CATALOG, demands, K)
    b = solve_exact(tiny, DEFAULT_CATALOG, demands, K, engine="bnb")
    print(f"K={K} oracle {o.total_power:.6f}  highs {h.total_power:.6f}  bnb {b.total_power:.6f}"
          f"  ({o.stats.nodes_explored} host-set combinations)")

# %%
net = build(4, 5, 4)
demands = make_demand_set(net, 5, 5.0)
for K in (1, 2, 3, 4):
    t0 = time.perf_counter()
    e = solve_exact(net, DEFAULT_CATALOG, demands, K)
    t1 = time.perf_counter()
    g = solve_greedy(net, DEFAULT_CATALOG, demands, K)
    gap = 100 * (g.total_power - e.total_power) / e.total_power
    print(f"K={K} exact {e.total_power:8.2f} W ({t1 - t0:.2f} s, {e.stats.nodes_explored} nodes)"
          f"  greedy {g.total_power:8.2f} W (+{gap:.1f}%)")
