import math

import pytest
from hypothesis import given, strategies as st

from fogsplit.powermodel import (
    DEFAULT_CATALOG,
    PRINTED_W_PER_GBPS,
    PRINTED_W_PER_MIPS,
    CapacityError,
    PowerModelError,
    Sharing,
    SubsystemProfile,
    cloud_path_network_slope,
    efficiency_table,
    override_catalog,
    processing_capacity,
    scaled_catalog,
    subsystem_power,
)
from fogsplit.topology import NodeKind, build


def test_dedicated_and_shared_billing():
    ded = SubsystemProfile(10.0, 4.0, 2.0, 1.5, Sharing.DEDICATED)
    shr = SubsystemProfile(10.0, 4.0, 2.0, 1.5, Sharing.SHARED)
    assert ded.slope == pytest.approx(3.0)
    assert subsystem_power(ded, 1.0, True) == pytest.approx(1.5 * (4 + 3))
    assert subsystem_power(ded, 0.0, False) == 0.0
    assert subsystem_power(shr, 1.0, True) == pytest.approx(1.5 * 3)
    assert subsystem_power(shr, 0.0, True) == 0.0


def test_load_above_capacity_raises():
    with pytest.raises(CapacityError):
        subsystem_power(SubsystemProfile(10.0, 4.0, 2.0), 2.5, True)


@pytest.mark.parametrize("kw", [
    dict(max_power=1.0, idle_power=2.0, capacity=1.0),
    dict(max_power=1.0, idle_power=-0.1, capacity=1.0),
    dict(max_power=1.0, idle_power=0.5, capacity=0.0),
    dict(max_power=1.0, idle_power=0.5, capacity=1.0, pue=0.9),
])
def test_profile_invariants(kw):
    with pytest.raises(PowerModelError):
        SubsystemProfile(**kw)


def test_catalog_slopes_from_table():
    # (max - idle) / capacity worked by hand from the device table
    expected = {
        NodeKind.IOT_DEVICE: (0.22 / 0.054, 3.27 / 1000),
        NodeKind.ACCESS_FOG: (6.0 / 0.3, 10.5 / 2400),
        NodeKind.EDGE_FOG: (48.0 / 2.4, 251.0 / 10800),
    }
    for kind, (net, proc) in expected.items():
        assert DEFAULT_CATALOG[kind].network.slope == pytest.approx(net)
        assert DEFAULT_CATALOG[kind].processing.slope == pytest.approx(proc)
    assert DEFAULT_CATALOG[NodeKind.CORE_NODE].network.slope == pytest.approx(29.55)


def test_printed_efficiencies_within_two_percent():
    for name, unit, derived, printed in efficiency_table():
        if printed is not None:
            assert abs(derived - printed) <= 0.02 * printed, (name, unit, derived, printed)
    assert set(PRINTED_W_PER_MIPS) == {NodeKind.EDGE_FOG, NodeKind.CLOUD_SERVER}
    assert len(PRINTED_W_PER_GBPS) == 8


def test_cloud_path_slope_four_hops():
    # 1.5 * (2 * (6.8984 + 8.125) + 4 * 29.55)
    t = build(4, 5, 4)
    hand = 1.5 * (2 * (1766 / 256 + 4550 / 560) + 4 * 1182 / 40)
    assert cloud_path_network_slope(t) == pytest.approx(hand)
    assert cloud_path_network_slope(t) == pytest.approx(222.6, rel=5e-3)


def test_cloud_capacity_unbounded():
    assert math.isinf(processing_capacity(DEFAULT_CATALOG, NodeKind.CLOUD_SERVER))
    assert processing_capacity(DEFAULT_CATALOG, NodeKind.ACCESS_FOG) == 2400


def test_override_applies_fields_together():
    cat = override_catalog(DEFAULT_CATALOG, {
        (NodeKind.IOT_DEVICE, "processing", "max_power"): 0.2,
        (NodeKind.IOT_DEVICE, "processing", "idle_power"): 0.1,
    })
    assert cat[NodeKind.IOT_DEVICE].processing.max_power == 0.2
    assert DEFAULT_CATALOG[NodeKind.IOT_DEVICE].processing.max_power == 3.6


def test_override_names_the_profile():
    with pytest.raises(PowerModelError, match="iot.network"):
        override_catalog(DEFAULT_CATALOG, {(NodeKind.IOT_DEVICE, "network", "idle_power"): 5})
    with pytest.raises(PowerModelError):
        override_catalog(DEFAULT_CATALOG, {(NodeKind.CORE_NODE, "processing", "pue"): 2})
    with pytest.raises(PowerModelError):
        override_catalog(DEFAULT_CATALOG, {(NodeKind.CORE_NODE, "network", "colour"): 2})


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_dedicated_power_monotone_in_load(a, b):
    s = DEFAULT_CATALOG[NodeKind.ACCESS_FOG].network
    lo, hi = sorted((a * s.capacity, b * s.capacity))
    assert subsystem_power(s, lo, True) <= subsystem_power(s, hi, True) + 1e-12


@given(st.floats(0.1, 10.0))
def test_scaling_scales_power(factor):
    scaled = scaled_catalog(DEFAULT_CATALOG, factor)
    for kind, prof in DEFAULT_CATALOG.items():
        for name in ("network", "processing"):
            s, t = getattr(prof, name), getattr(scaled[kind], name)
            if s is None:
                continue
            load = 0.5 * s.capacity
            assert subsystem_power(t, load, True) == pytest.approx(factor * subsystem_power(s, load, True))


@given(st.sampled_from([k for k in DEFAULT_CATALOG]), st.sampled_from(["network", "processing"]),
       st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_linear_above_zero_and_full_load_is_max(kind, name, u, v):
    s = getattr(DEFAULT_CATALOG[kind], name)
    if s is None:
        return
    p = lambda f: subsystem_power(s, f * s.capacity, True)  # noqa: E731
    mid = p((u + v) / 2)
    assert mid == pytest.approx((p(u) + p(v)) / 2, rel=1e-9, abs=1e-12)
    if not s.shared:
        assert p(1.0) == pytest.approx(s.pue * s.max_power)
