import pytest
from hypothesis import given, strategies as st

from fogsplit.optimizer import (
    InfeasibleError,
    OracleSizeError,
    baseline_cloud,
    brute_force_oracle,
    evaluate,
    solve_exact,
    solve_greedy,
)
from fogsplit.powermodel import DEFAULT_CATALOG
from fogsplit.topology import CandidatePolicy, build
from fogsplit.workload import Demand, make_demand_set


def recheck(topology, demands, res, K):
    """Re-bill a returned placement from scratch and compare."""
    again = evaluate(topology, DEFAULT_CATALOG, demands, res.placement, K=K, min_allocation=1.0 - 1e-9)
    assert again.total_power == pytest.approx(res.total_power, rel=1e-9)
    return again


def test_small_demand_stays_on_the_camera(tiny):
    d = [Demand(0, 0, 500.0, 0.0005)]
    res = solve_exact(tiny, DEFAULT_CATALOG, d, 1)
    assert res.placement.shares == (((0, 500.0),),)
    assert res.total_power == pytest.approx(0.33 + 3.27e-3 * 500)
    assert res.optimal


def test_empty_demand_list(tiny):
    for solver in (solve_exact, solve_greedy, brute_force_oracle):
        res = solver(tiny, DEFAULT_CATALOG, [], 2)
        assert res.total_power == 0.0


@pytest.mark.parametrize("engine", ["highs", "bnb"])
@pytest.mark.parametrize("policy", list(CandidatePolicy))
@pytest.mark.parametrize("mbps", [1.0, 4.0, 9.0])
def test_engines_match_oracle(engine, policy, mbps):
    t = build(1, 2, 2)
    demands = list(make_demand_set(t, 2, mbps))
    for K in (1, 2, 3):
        oracle = brute_force_oracle(t, DEFAULT_CATALOG, demands, K, policy)
        exact = solve_exact(t, DEFAULT_CATALOG, demands, K, policy, engine=engine)
        assert exact.optimal
        assert exact.total_power == pytest.approx(oracle.total_power, rel=1e-6)
        recheck(t, demands, exact, K)


@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 3), st.integers(1, 3),
       st.sampled_from(list(CandidatePolicy)), st.data())
def test_exact_matches_oracle_property(sites, per_site, hops, K, policy, data):
    t = build(sites, per_site, hops)
    n = data.draw(st.integers(1, min(2, len(t.iot_ids))))
    sources = data.draw(st.permutations(t.iot_ids))[:n]
    mbps = data.draw(st.lists(st.floats(1.0, 10.0), min_size=n, max_size=n))
    demands = [Demand(i, s, 1000 * m, m / 1000) for i, (s, m) in enumerate(zip(sources, mbps))]
    oracle = brute_force_oracle(t, DEFAULT_CATALOG, demands, K, policy)
    exact = solve_exact(t, DEFAULT_CATALOG, demands, K, policy)
    assert exact.total_power == pytest.approx(oracle.total_power, rel=1e-6)


@pytest.mark.parametrize("policy", list(CandidatePolicy))
def test_monotone_in_k_and_below_baseline(standard, policy):
    demands = list(make_demand_set(standard, 2, 6.0))
    base = baseline_cloud(standard, DEFAULT_CATALOG, demands).total_power
    prev = float("inf")
    for K in range(1, 5):
        res = solve_exact(standard, DEFAULT_CATALOG, demands, K, policy)
        assert res.optimal
        assert res.total_power <= prev * (1 + 1e-9)
        assert res.total_power <= base * (1 + 1e-9)
        prev = res.total_power
        recheck(standard, demands, res, K)


@pytest.mark.parametrize("K", [1, 2, 3, 6])
def test_greedy_is_feasible_and_no_better_than_exact(standard, K):
    demands = list(make_demand_set(standard, 5, 7.0))
    greedy = solve_greedy(standard, DEFAULT_CATALOG, demands, K)
    exact = solve_exact(standard, DEFAULT_CATALOG, demands, K)
    recheck(standard, demands, greedy, K)
    assert greedy.total_power >= exact.total_power * (1 - 1e-9)
    assert not greedy.optimal


def test_budget_exhaustion_returns_flagged_incumbent(standard):
    demands = list(make_demand_set(standard, 5, 8.0))
    for engine in ("highs", "bnb"):
        res = solve_exact(standard, DEFAULT_CATALOG, demands, 4, engine=engine, node_limit=1)
        assert not res.optimal
        assert res.stats.gap > 0
        recheck(standard, demands, res, 4)
        greedy = solve_greedy(standard, DEFAULT_CATALOG, demands, 4)
        assert res.total_power <= greedy.total_power * (1 + 1e-9)


def test_oracle_size_cap(standard, tiny):
    with pytest.raises(OracleSizeError):
        brute_force_oracle(standard, DEFAULT_CATALOG, list(make_demand_set(standard, 1, 1.0)), 1)
    with pytest.raises(OracleSizeError):
        brute_force_oracle(tiny, DEFAULT_CATALOG, list(make_demand_set(tiny, 3, 1.0)), 1)
    with pytest.raises(OracleSizeError):
        brute_force_oracle(tiny, DEFAULT_CATALOG, list(make_demand_set(tiny, 1, 1.0)), 4)


def test_unknown_engine(tiny):
    with pytest.raises(ValueError):
        solve_exact(tiny, DEFAULT_CATALOG, [Demand(0, 0, 10.0, 0.001)], 1, engine="cplex")


def test_infeasible_when_no_host_fits(tiny):
    # hierarchy candidates of camera 0 restricted to its own radio
    with pytest.raises(InfeasibleError):
        solve_exact(tiny, DEFAULT_CATALOG, [Demand(0, 0, 5000.0, 0.005)], 2, candidates=[[0]])


def test_splitting_helps_at_high_load(standard):
    demands = list(make_demand_set(standard, 5, 5.0))
    k1 = solve_exact(standard, DEFAULT_CATALOG, demands, 1)
    k2 = solve_exact(standard, DEFAULT_CATALOG, demands, 2)
    assert k1.total_power == pytest.approx(1470.157, rel=1e-6)
    assert k2.total_power == pytest.approx(936.109, rel=1e-6)
    assert max(len(s) for s in k2.placement.shares) == 2


def test_repeat_solves_are_identical(standard):
    demands = list(make_demand_set(standard, 3, 6.0))
    for solver in (solve_exact, solve_greedy):
        a = solver(standard, DEFAULT_CATALOG, demands, 3)
        b = solver(standard, DEFAULT_CATALOG, demands, 3)
        assert a.placement == b.placement
        assert a.total_power == b.total_power


def test_oracle_placement_rebills_identically(tiny):
    demands = list(make_demand_set(tiny, 2, 7.0, sources=[0, 2]))
    res = brute_force_oracle(tiny, DEFAULT_CATALOG, demands, 2, CandidatePolicy.HIERARCHY)
    recheck(tiny, demands, res, 2)
