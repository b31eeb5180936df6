"""
Device power model
==================

Each device is split into a network subsystem (load in Gbps) and a
processing subsystem (load in MIPS).  Dedicated subsystems pay their idle
power as soon as they carry anything; shared ones only pay for the load.
"""

# %%
from fogsplit.powermodel import DEFAULT_CATALOG, efficiency_table, subsystem_power
from fogsplit.topology import NodeKind

# the slopes are derived from max/idle/capacity, then compared with the
# efficiency columns printed next to them
for name, unit, derived, printed in efficiency_table():
    note = "" if printed is None else f"(printed {printed:g})"
    print(f"{name:<18}{unit:<8}{derived:10.5g} {note}")

# %%
# Power of an Access Fog ONU as its processing load grows.  The first MIPS
# costs the whole idle draw, every further MIPS only the slope.
onu = DEFAULT_CATALOG[NodeKind.ACCESS_FOG].processing
for mips in (0, 1, 600, 1200, 2400):
    print(f"{mips:5d} MIPS -> {subsystem_power(onu, mips, active=mips > 0):7.3f} W")

# %%
# The Edge Fog server sits in a central office with PUE 2.5: turning it on
# costs 280 W before it does any work.
ef = DEFAULT_CATALOG[NodeKind.EDGE_FOG].processing
print("Edge Fog idle bill:", ef.billed_idle, "W")
print("Edge Fog at 1000 MIPS:", round(subsystem_power(ef, 1000, True), 2), "W")

# %%
# Cloud servers are shared, so the cloud only charges proportionally.
cloud = DEFAULT_CATALOG[NodeKind.CLOUD_SERVER].processing
print("cloud, 1000 MIPS:", round(subsystem_power(cloud, 1000, True), 2), "W")
