"""Hierarchical IoT / PON / core / cloud network.

The network is a tree::

    IoT devices --WiFi--> ONU (Access Fog) --PON--> OLT (Edge Fog)
        --> metro switch --> metro router --> IP/WDM core nodes
        --> cloud LAN switch --> cloud LAN router --> cloud server pool

Node ids are assigned site-major: IoT devices first (site 0 devices, then
site 1, ...), then the ONUs in site order, then the OLT/Edge Fog, the metro
pair, the core chain and the cloud chain.  Paths are unique because the graph
is a tree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property


class NodeKind(enum.Enum):
    IOT_DEVICE = "iot"
    ACCESS_FOG = "accessfog"
    EDGE_FOG = "edgefog"
    METRO_SWITCH = "metro_switch"
    METRO_ROUTER = "metro_router"
    CORE_NODE = "core"
    CLOUD_LAN_SWITCH = "cloud_lan_switch"
    CLOUD_LAN_ROUTER = "cloud_lan_router"
    CLOUD_SERVER = "cloud_server"

    @property
    def can_process(self) -> bool:
        return self in PROCESSING_KINDS


PROCESSING_KINDS = frozenset(
    {NodeKind.IOT_DEVICE, NodeKind.ACCESS_FOG, NodeKind.EDGE_FOG, NodeKind.CLOUD_SERVER}
)


class CandidatePolicy(enum.Enum):
    """Which processing nodes may host part of a demand."""

    #: every processing node, including peer IoT devices and ONUs of other sites
    PEERS = "peers"
    #: only the source's own chain: itself, its ONU, the Edge Fog and the cloud
    HIERARCHY = "hierarchy"


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    parent: int | None
    site: int | None = None

    @property
    def label(self) -> str:
        return f"{self.kind.value}#{self.id}"


@dataclass(frozen=True)
class Topology:
    nodes: tuple[Node, ...]
    site_count: int
    iot_per_site: int
    core_hop_count: int
    _path_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    # -- lookups -----------------------------------------------------------
    def node(self, node_id: int) -> Node:
        if not isinstance(node_id, int) or not 0 <= node_id < len(self.nodes):
            raise TopologyError(f"unknown node id {node_id!r}")
        return self.nodes[node_id]

    def kind(self, node_id: int) -> NodeKind:
        return self.node(node_id).kind

    def of_kind(self, kind: NodeKind) -> list[int]:
        return [n.id for n in self.nodes if n.kind is kind]

    @cached_property
    def iot_ids(self) -> list[int]:
        return self.of_kind(NodeKind.IOT_DEVICE)

    @cached_property
    def onu_ids(self) -> list[int]:
        return self.of_kind(NodeKind.ACCESS_FOG)

    @cached_property
    def edge_fog(self) -> int:
        return self.of_kind(NodeKind.EDGE_FOG)[0]

    @cached_property
    def cloud_server(self) -> int:
        return self.of_kind(NodeKind.CLOUD_SERVER)[0]

    @cached_property
    def processing_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind.can_process]

    def onu_of(self, iot_id: int) -> int:
        node = self.node(iot_id)
        if node.kind is not NodeKind.IOT_DEVICE:
            raise TopologyError(f"{node.label} is not an IoT device")
        return node.parent

    def site_iots(self, site: int) -> list[int]:
        return [n.id for n in self.nodes if n.kind is NodeKind.IOT_DEVICE and n.site == site]

    def ancestors(self, node_id: int) -> list[int]:
        """``node_id`` followed by every ancestor up to the cloud server."""
        chain = [node_id]
        parent = self.node(node_id).parent
        while parent is not None:
            chain.append(parent)
            parent = self.nodes[parent].parent
        return chain

    # -- routing -----------------------------------------------------------
    def path(self, src: int, dst: int) -> list[int]:
        """Devices whose network subsystem carries a stream from ``src`` to ``dst``.

        ``src`` must be an IoT device and ``dst`` a processing node.  The
        result starts at ``src`` and ends at ``dst``; local processing
        (``src == dst``) carries no traffic and returns an empty list.
        """
        key = (src, dst)
        cached = self._path_cache.get(key)
        if cached is not None:
            return list(cached)
        if self.kind(src) is not NodeKind.IOT_DEVICE:
            raise TopologyError(f"demands originate at IoT devices, got {self.node(src).label}")
        if not self.kind(dst).can_process:
            raise TopologyError(f"{self.node(dst).label} cannot process")
        if src == dst:
            route: tuple[int, ...] = ()
        else:
            up = self.ancestors(src)
            down = self.ancestors(dst)
            on_up = set(up)
            lca_pos = next(i for i, n in enumerate(down) if n in on_up)
            lca = down[lca_pos]
            route = tuple(up[: up.index(lca) + 1]) + tuple(reversed(down[:lca_pos]))
        self._path_cache[key] = route
        return list(route)

    def candidates(self, src: int, policy: CandidatePolicy = CandidatePolicy.PEERS) -> list[int]:
        """Processing nodes allowed to host work sourced at ``src``, ascending id."""
        policy = CandidatePolicy(policy)
        if policy is CandidatePolicy.HIERARCHY:
            return sorted({src, self.onu_of(src), self.edge_fog, self.cloud_server})
        return list(self.processing_ids)


def build(site_count: int = 4, iot_per_site: int = 5, core_hop_count: int = 4) -> Topology:
    """Build the tree topology.

    ``site_count`` and ``iot_per_site`` must be at least 1.  ``core_hop_count``
    may be 0, in which case the metro router connects straight to the cloud
    LAN switch.
    """
    for name, value in (("site_count", site_count), ("iot_per_site", iot_per_site)):
        if int(value) != value or value < 1:
            raise TopologyError(f"{name} must be a positive integer, got {value!r}")
    if int(core_hop_count) != core_hop_count or core_hop_count < 0:
        raise TopologyError(f"core_hop_count must be a non-negative integer, got {core_hop_count!r}")
    site_count, iot_per_site, core_hop_count = int(site_count), int(iot_per_site), int(core_hop_count)

    n_iot = site_count * iot_per_site
    onu0 = n_iot
    edge = onu0 + site_count
    metro_switch = edge + 1
    metro_router = edge + 2
    core0 = edge + 3
    lan_switch = core0 + core_hop_count
    lan_router = lan_switch + 1
    cloud = lan_switch + 2

    nodes: list[Node] = []
    for site in range(site_count):
        for _ in range(iot_per_site):
            nodes.append(Node(len(nodes), NodeKind.IOT_DEVICE, onu0 + site, site))
    for site in range(site_count):
        nodes.append(Node(len(nodes), NodeKind.ACCESS_FOG, edge, site))
    nodes.append(Node(edge, NodeKind.EDGE_FOG, metro_switch))
    nodes.append(Node(metro_switch, NodeKind.METRO_SWITCH, metro_router))
    nodes.append(Node(metro_router, NodeKind.METRO_ROUTER, core0 if core_hop_count else lan_switch))
    for hop in range(core_hop_count):
        nxt = core0 + hop + 1 if hop + 1 < core_hop_count else lan_switch
        nodes.append(Node(core0 + hop, NodeKind.CORE_NODE, nxt))
    nodes.append(Node(lan_switch, NodeKind.CLOUD_LAN_SWITCH, lan_router))
    nodes.append(Node(lan_router, NodeKind.CLOUD_LAN_ROUTER, cloud))
    nodes.append(Node(cloud, NodeKind.CLOUD_SERVER, None))
    assert [n.id for n in nodes] == list(range(len(nodes)))
    return Topology(tuple(nodes), site_count, iot_per_site, core_hop_count)
