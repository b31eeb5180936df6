"""
One camera, one demand
======================

How the cheapest placement of a single video-analytics demand changes
with its size and with the number of hosts it may be split over.
"""

# %%
from fogsplit import DEFAULT_CATALOG, baseline_cloud, build, make_demand_set, solve_exact

net = build(4, 5, 4)
labels = {n.id: n.label for n in net.nodes}


def show(res):
    return ", ".join(f"{labels[n]}={x:.0f}" for n, x in res.placement.shares[0])


# %%
# Small demands stay on the camera; large ones have to leave it.
for mbps in (1, 2, 3, 8):
    demands = make_demand_set(net, 1, mbps)
    res = solve_exact(net, DEFAULT_CATALOG, demands, K=1)
    base = baseline_cloud(net, DEFAULT_CATALOG, demands)
    print(f"{mbps:4} Mbps  {res.total_power:8.2f} W (cloud {base.total_power:7.2f} W)  {show(res)}")

# %%
# Letting an 8 Mbps demand split spreads it down the hierarchy.
demands = make_demand_set(net, 1, 8)
for K in range(1, 5):
    res = solve_exact(net, DEFAULT_CATALOG, demands, K=K)
    print(f"K={K}  {res.total_power:8.2f} W  {show(res)}")
