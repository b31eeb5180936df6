"""
Scenario sweep
==============

Scenario 1 (five active cameras) over a reduced grid, then the same
grid with hosts restricted to each camera's own chain.  The full grids
are in configs/ and run through ``fogsplit solve``.
"""

# %%
import dataclasses
from pathlib import Path

from fogsplit.config import load_config
from fogsplit.scenarios import marginal_savings, run_sweep
from fogsplit.topology import CandidatePolicy

config = load_config(Path(__file__).resolve().parent.parent / "configs" / "scenario1.cfg")
config = dataclasses.replace(config, traffic_mbps=(1.0, 5.0, 10.0), k_values=(1, 2, 3, 4))
rows = run_sweep(config)
for r in rows:
    print(f"{r.demand_mips:6.0f} MIPS K={r.K}  {r.total_w:8.2f} W  "
          f"vs cloud {r.savings_vs_cloud_pct:5.1f}%  vs K1 {r.savings_vs_k1_pct:5.1f}%")

# %%
# Saving of each extra split over the one before, at 5000 MIPS.
for name, cfg in (("peers", config),
                  ("hierarchy", dataclasses.replace(config, candidate_policy=CandidatePolicy.HIERARCHY))):
    mid = [r for r in run_sweep(dataclasses.replace(cfg, traffic_mbps=(5.0,)))]
    print(name, {k: round(v, 1) for k, v in marginal_savings(mid).items()})
