import warnings

import pytest
from hypothesis import given, strategies as st

from fogsplit.topology import build
from fogsplit.workload import (
    TrafficRangeWarning,
    Demand,
    WorkloadError,
    cpu_from_traffic,
    demand_from_traffic,
    make_demand_set,
)


def test_intensity_conversion():
    # 5 Mbit/s at 1000 instructions per bit is 5e9 instr/s
    assert cpu_from_traffic(5.0) == 5000.0
    assert cpu_from_traffic(2.0, intensity=250) == 500.0
    d = demand_from_traffic(3, 7, 4.0)
    assert (d.id, d.source, d.cpu, d.traffic) == (3, 7, 4000.0, 0.004)


@pytest.mark.parametrize("cpu, traffic", [(0.0, 0.001), (100.0, 0.0), (-1.0, 0.001), (100.0, 0.06)])
def test_demand_validation(cpu, traffic):
    with pytest.raises(WorkloadError):
        Demand(0, 0, cpu, traffic)


def test_default_sources_are_site_major(standard):
    ds = make_demand_set(standard, 5, 5.0)
    assert [d.source for d in ds] == [0, 1, 2, 3, 4]
    assert ds.total_cpu == 25000.0
    assert ds.active_iot_count == 5


def test_explicit_sources(standard):
    ds = make_demand_set(standard, 2, 1.0, sources=[3, 17])
    assert [d.source for d in ds] == [3, 17]
    with pytest.raises(WorkloadError):
        make_demand_set(standard, 2, 1.0, sources=[3, 3])
    with pytest.raises(WorkloadError):
        make_demand_set(standard, 1, 1.0, sources=[standard.edge_fog])
    with pytest.raises(WorkloadError):
        make_demand_set(standard, 21, 1.0)


def test_out_of_range_traffic_warns(standard):
    with pytest.warns(TrafficRangeWarning):
        make_demand_set(standard, 1, 20.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        make_demand_set(standard, 1, 10.0)


@given(st.integers(1, 3), st.integers(1, 4), st.floats(1.0, 10.0), st.data())
def test_demand_sets_are_homogeneous(sites, per_site, mbps, data):
    t = build(sites, per_site, 2)
    n = data.draw(st.integers(1, len(t.iot_ids)))
    ds = make_demand_set(t, n, mbps)
    assert len(ds) == n
    assert len({d.source for d in ds}) == n
    assert all(d.cpu == pytest.approx(1000 * mbps) and d.traffic == pytest.approx(mbps / 1000) for d in ds)
