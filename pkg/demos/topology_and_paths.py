"""
Network tree and routing
========================

Cameras hang off per-site ONUs, which share one OLT/Edge Fog.  Traffic to
the cloud then crosses the metro node and a chain of IP/WDM core routers.
"""

# %%
from fogsplit.powermodel import cloud_path_network_slope
from fogsplit.topology import CandidatePolicy, build

net = build(site_count=4, iot_per_site=5, core_hop_count=4)
print(len(net.nodes), "nodes")
print("cameras", net.iot_ids[:5], "...", "ONUs", net.onu_ids, "Edge Fog", net.edge_fog,
      "cloud", net.cloud_server)

# %%
# Paths go up to the lowest common ancestor and back down.
for dst in (0, 1, 7, net.onu_of(0), net.edge_fog, net.cloud_server):
    print(f"0 -> {dst:2d}:", " ".join(net.node(v).label for v in net.path(0, dst)))

# %%
# Who may host a share of camera 0's work.
print("hierarchy:", net.candidates(0, CandidatePolicy.HIERARCHY))
print("peers:    ", len(net.candidates(0, CandidatePolicy.PEERS)), "hosts")

# %%
# Every extra core hop adds about 44 W per Gbps streamed to the cloud.
for hops in (0, 2, 4, 6):
    print(hops, "hops:", round(cloud_path_network_slope(build(4, 5, hops)), 1), "W/Gbps")
