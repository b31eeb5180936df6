"""Device power catalog and power evaluation.

Every device has up to two subsystems, network (load in Gbps) and processing
(load in MIPS).  A subsystem is either *dedicated* to the IoT service, in which
case it draws idle power as soon as it is active, or *shared* with other
services, in which case only the load-proportional part is billed.

The load-proportional slope is always derived as ``(max - idle) / capacity``.
The printed W/MIPS figures for the IoT and Access Fog rows of the device table
are about 100x too large to be consistent with their own max/idle/capacity
columns, so they are never used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping

from .topology import NodeKind, Topology

CATALOG_VERSION = "derived-slopes-v1"

#: absolute slack when comparing a load against a capacity
CAPACITY_TOL = 1e-9


class Sharing(enum.Enum):
    DEDICATED = "dedicated"
    SHARED = "shared"


class PowerModelError(ValueError):
    pass


class CapacityError(PowerModelError):
    pass


@dataclass(frozen=True)
class SubsystemProfile:
    max_power: float
    idle_power: float
    capacity: float
    pue: float = 1.0
    sharing: Sharing = Sharing.DEDICATED

    def __post_init__(self):
        if not 0 <= self.idle_power <= self.max_power:
            raise PowerModelError(
                f"need 0 <= idle_power <= max_power, got idle={self.idle_power} max={self.max_power}"
            )
        if not self.capacity > 0:
            raise PowerModelError(f"capacity must be positive, got {self.capacity}")
        if not self.pue >= 1:
            raise PowerModelError(f"pue must be >= 1, got {self.pue}")

    @property
    def shared(self) -> bool:
        return self.sharing is Sharing.SHARED

    @property
    def slope(self) -> float:
        return proportional_slope(self)

    @property
    def billed_idle(self) -> float:
        """Idle watts (after PUE) charged when the subsystem is active."""
        return 0.0 if self.shared else self.pue * self.idle_power

    @property
    def billed_slope(self) -> float:
        """Watts (after PUE) per unit of load."""
        return self.pue * self.slope


@dataclass(frozen=True)
class DeviceProfile:
    kind: NodeKind
    network: SubsystemProfile | None = None
    processing: SubsystemProfile | None = None


def proportional_slope(s: SubsystemProfile) -> float:
    """Watts per Gbps (network) or per MIPS (processing)."""
    if not s.capacity > 0:
        raise PowerModelError("capacity must be positive")
    return (s.max_power - s.idle_power) / s.capacity


def subsystem_power(s: SubsystemProfile, load: float, active: bool) -> float:
    """Power drawn by one subsystem carrying ``load``.

    Shared subsystems are purely proportional.  Dedicated ones draw nothing
    when inactive and ``idle + slope * load`` (times PUE) when active.
    """
    if load < 0:
        raise PowerModelError(f"negative load {load}")
    if load > s.capacity + CAPACITY_TOL * max(1.0, s.capacity):
        raise CapacityError(f"load {load} exceeds capacity {s.capacity}")
    if s.shared:
        return s.pue * s.slope * load
    if not active:
        if load > 0:
            raise PowerModelError("a dedicated subsystem carrying load must be active")
        return 0.0
    return s.pue * (s.idle_power + s.slope * load)


_D, _S = Sharing.DEDICATED, Sharing.SHARED
_INF = float("inf")

DEFAULT_CATALOG: dict[NodeKind, DeviceProfile] = {
    NodeKind.IOT_DEVICE: DeviceProfile(
        NodeKind.IOT_DEVICE,
        network=SubsystemProfile(0.56, 0.34, 0.054, 1.0, _D),
        processing=SubsystemProfile(3.6, 0.33, 1000.0, 1.0, _D),
    ),
    NodeKind.ACCESS_FOG: DeviceProfile(
        NodeKind.ACCESS_FOG,
        network=SubsystemProfile(15.0, 9.0, 0.3, 1.0, _D),
        processing=SubsystemProfile(12.5, 2.0, 2400.0, 1.0, _D),
    ),
    NodeKind.EDGE_FOG: DeviceProfile(
        NodeKind.EDGE_FOG,
        network=SubsystemProfile(48.0, 0.0, 2.4, 1.5, _S),
        processing=SubsystemProfile(363.0, 112.0, 10800.0, 2.5, _D),
    ),
    NodeKind.CORE_NODE: DeviceProfile(
        NodeKind.CORE_NODE, network=SubsystemProfile(1182.0, 0.0, 40.0, 1.5, _S)
    ),
    NodeKind.METRO_SWITCH: DeviceProfile(
        NodeKind.METRO_SWITCH, network=SubsystemProfile(1766.0, 0.0, 256.0, 1.5, _S)
    ),
    NodeKind.METRO_ROUTER: DeviceProfile(
        NodeKind.METRO_ROUTER, network=SubsystemProfile(4550.0, 0.0, 560.0, 1.5, _S)
    ),
    NodeKind.CLOUD_LAN_SWITCH: DeviceProfile(
        NodeKind.CLOUD_LAN_SWITCH, network=SubsystemProfile(1766.0, 0.0, 256.0, 1.5, _S)
    ),
    NodeKind.CLOUD_LAN_ROUTER: DeviceProfile(
        NodeKind.CLOUD_LAN_ROUTER, network=SubsystemProfile(4550.0, 0.0, 560.0, 1.5, _S)
    ),
    # one server's figures; the pool itself is unbounded (see processing_capacity)
    NodeKind.CLOUD_SERVER: DeviceProfile(
        NodeKind.CLOUD_SERVER, processing=SubsystemProfile(363.0, 112.0, 10800.0, 2.5, _S)
    ),
}

#: printed efficiency columns, kept only to check the derived slopes against
PRINTED_W_PER_GBPS = {
    NodeKind.IOT_DEVICE: 4.1,
    NodeKind.ACCESS_FOG: 20.0,
    NodeKind.EDGE_FOG: 20.0,
    NodeKind.CORE_NODE: 29.6,
    NodeKind.METRO_SWITCH: 6.9,
    NodeKind.METRO_ROUTER: 8.1,
    NodeKind.CLOUD_LAN_SWITCH: 6.9,
    NodeKind.CLOUD_LAN_ROUTER: 8.1,
}
PRINTED_W_PER_MIPS = {
    NodeKind.EDGE_FOG: 0.023,
    NodeKind.CLOUD_SERVER: 0.023,
}


def processing_capacity(profiles: Mapping[NodeKind, DeviceProfile], kind: NodeKind) -> float:
    """MIPS a processing node can host; the cloud server pool is unbounded."""
    if kind is NodeKind.CLOUD_SERVER:
        return _INF
    proc = profiles[kind].processing
    return proc.capacity if proc is not None else 0.0


def cloud_path_network_slope(topology: Topology, profiles: Mapping[NodeKind, DeviceProfile] | None = None) -> float:
    """Billed W/Gbps of the shared devices between the metro node and the cloud.

    Covers the metro switch and router, every core hop and the cloud LAN
    switch and router.
    """
    profiles = DEFAULT_CATALOG if profiles is None else profiles
    kinds = [NodeKind.METRO_SWITCH, NodeKind.METRO_ROUTER]
    kinds += [NodeKind.CORE_NODE] * topology.core_hop_count
    kinds += [NodeKind.CLOUD_LAN_SWITCH, NodeKind.CLOUD_LAN_ROUTER]
    return sum(profiles[k].network.billed_slope for k in kinds)


def efficiency_table(profiles: Mapping[NodeKind, DeviceProfile] | None = None) -> list[tuple[str, str, float, float | None]]:
    """Rows of (device, unit, derived efficiency, printed efficiency or None)."""
    profiles = DEFAULT_CATALOG if profiles is None else profiles
    rows = []
    for kind, prof in profiles.items():
        if prof.network is not None:
            rows.append((kind.value, "W/Gbps", prof.network.slope, PRINTED_W_PER_GBPS.get(kind)))
        if prof.processing is not None:
            rows.append((kind.value, "W/MIPS", prof.processing.slope, PRINTED_W_PER_MIPS.get(kind)))
    return rows


def scaled_catalog(profiles: Mapping[NodeKind, DeviceProfile], factor: float) -> dict[NodeKind, DeviceProfile]:
    """Catalog with every idle and max power multiplied by ``factor``."""
    out = {}
    for kind, prof in profiles.items():
        subs = {}
        for name in ("network", "processing"):
            s = getattr(prof, name)
            subs[name] = None if s is None else replace(
                s, max_power=s.max_power * factor, idle_power=s.idle_power * factor
            )
        out[kind] = replace(prof, **subs)
    return out


def override_catalog(
    profiles: Mapping[NodeKind, DeviceProfile], overrides: Mapping[tuple[NodeKind, str, str], float | str]
) -> dict[NodeKind, DeviceProfile]:
    """Apply ``{(kind, "network"|"processing", field): value}`` overrides."""
    grouped: dict[tuple[NodeKind, str], dict] = {}
    for (kind, subsystem, fld), value in overrides.items():
        if subsystem not in ("network", "processing"):
            raise PowerModelError(f"unknown subsystem {subsystem!r}")
        if fld == "sharing":
            value = Sharing(value)
        elif fld in ("max_power", "idle_power", "capacity", "pue"):
            value = float(value)
        else:
            raise PowerModelError(f"unknown profile field {fld!r}")
        grouped.setdefault((kind, subsystem), {})[fld] = value

    out = dict(profiles)
    for (kind, subsystem), fields in grouped.items():
        prof = out.get(kind, DeviceProfile(kind))
        current = getattr(prof, subsystem)
        if current is None:
            raise PowerModelError(f"{kind.value} has no {subsystem} subsystem to override")
        try:
            new = replace(current, **fields)
        except PowerModelError as exc:
            raise PowerModelError(f"{kind.value}.{subsystem}: {exc}") from None
        out[kind] = replace(prof, **{subsystem: new})
    return out
